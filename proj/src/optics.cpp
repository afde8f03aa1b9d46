#include "g2sim/optics.hpp"

#include "g2sim/errors.hpp"
#include "g2sim/fft.hpp"
#include "g2sim/fieldgen.hpp"
#include "g2sim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace g2sim {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

// Samples excluded at each record edge after a fractional shift; the phase
// ramp is exact for grid-periodic content but rings near the wrap point for
// anything else (an off-grid coherent line, say), and the ringing decays like
// one over the distance to the edge.
constexpr std::size_t kEdgeGuard = 64;

struct ShiftPlan {
    long long whole = 0;   // integer sample part
    double fraction = 0.0; // in [-0.5, 0.5], 0 for on-grid delays
};

ShiftPlan decompose_shift(double delay, double dt) {
    const double s = delay / dt;
    ShiftPlan plan;
    plan.whole = std::llround(s);
    plan.fraction = s - static_cast<double>(plan.whole);
    if (std::abs(plan.fraction) < 1e-9)
        plan.fraction = 0.0;
    return plan;
}

void validate_sweep(const FieldEnsemble& fields, const DelaySweep& sweep) {
    if (fields.n_realizations == 0 || fields.data.empty())
        throw ConfigError("interferogram needs a non-empty field ensemble");
    if (sweep.delays.empty())
        throw DelayError("delay sweep is empty");
    if (!(sweep.fringe_sampling >= 4.0))
        throw DelayError("fringe_sampling must be at least 4");

    const double max_step = kTwoPi / fields.carrier / sweep.fringe_sampling;
    const double max_shift = static_cast<double>(fields.n_samples) / 4.0;
    for (std::size_t j = 0; j < sweep.delays.size(); ++j) {
        const double tau = sweep.delays[j];
        if (!std::isfinite(tau))
            throw DelayError("delay sweep contains a non-finite value");
        if (j > 0) {
            const double step = tau - sweep.delays[j - 1];
            if (!(step > 0.0))
                throw DelayError("delay sweep must be strictly increasing");
            if (step > max_step * (1.0 + 1e-9)) {
                std::ostringstream msg;
                msg << "delay step " << step << " exceeds fringe-sampling bound " << max_step;
                throw DelayError(msg.str());
            }
        }
        if (std::abs(tau / fields.dt) > max_shift) {
            std::ostringstream msg;
            msg << "delay " << tau << " exceeds a quarter of the record ("
                << max_shift * fields.dt << ")";
            throw DelayError(msg.str());
        }
    }
}

std::vector<std::complex<double>> padded_fft(const std::vector<std::complex<double>>& series,
                                             std::size_t padded) {
    std::vector<std::complex<double>> out(padded, {0.0, 0.0});
    std::copy(series.begin(), series.end(), out.begin());
    fft::forward(out);
    return out;
}

/// R(m) = sum_n x(n) conj(y(n - m)) for all lags, via zero-padded FFTs.
/// Index lag m >= 0 at [m] and m < 0 at [L + m].
std::vector<std::complex<double>> linear_correlation(
    const std::vector<std::complex<double>>& x_hat,
    const std::vector<std::complex<double>>& y_hat) {
    const std::size_t L = x_hat.size();
    std::vector<std::complex<double>> prod(L);
    for (std::size_t k = 0; k < L; ++k)
        prod[k] = x_hat[k] * std::conj(y_hat[k]);
    fft::backward(prod);
    const double scale = 1.0 / static_cast<double>(L);
    for (auto& v : prod)
        v *= scale;
    return prod;
}

struct ArmSeries {
    std::vector<std::complex<double>> b_hat; // E
    std::vector<std::complex<double>> c_hat; // |E|^2 E
    std::vector<std::complex<double>> d_hat; // E^2
    std::vector<std::complex<double>> i_hat; // |E|^2
};

ArmSeries build_arm_series(const std::complex<double>* field, std::size_t n, std::size_t padded,
                           std::size_t guard) {
    std::vector<std::complex<double>> b(n), c(n), d(n), in(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> e = field[k];
        const double intensity = std::norm(e);
        b[k] = e;
        in[k] = intensity;
        c[k] = intensity * e;
        d[k] = e * e;
    }
    if (guard > 0) {
        for (std::size_t k = 0; k < guard && k < n; ++k) {
            b[k] = c[k] = d[k] = in[k] = {0.0, 0.0};
            b[n - 1 - k] = c[n - 1 - k] = d[n - 1 - k] = in[n - 1 - k] = {0.0, 0.0};
        }
    }
    ArmSeries s;
    s.b_hat = padded_fft(b, padded);
    s.c_hat = padded_fft(c, padded);
    s.d_hat = padded_fft(d, padded);
    s.i_hat = padded_fft(in, padded);
    return s;
}

long long overlap_count(long long m, long long n, long long guard) {
    const long long lo = std::max<long long>(0, m + guard);
    const long long hi = std::min<long long>(n, n - guard + m);
    return hi - lo;
}

} // namespace

std::vector<std::complex<double>> fractional_shift(const std::complex<double>* src,
                                                   std::size_t n, double shift_samples) {
    std::vector<std::complex<double>> buf(src, src + n);
    if (shift_samples == 0.0)
        return buf;
    fft::forward(buf);
    for (std::size_t k = 0; k < n; ++k) {
        const long long kk = static_cast<long long>(k);
        const long long nn = static_cast<long long>(n);
        const long long signed_k = 2 * kk < nn ? kk : kk - nn;
        const double theta = -kTwoPi * static_cast<double>(signed_k) * shift_samples /
                             static_cast<double>(n);
        buf[k] *= std::complex<double>(std::cos(theta), std::sin(theta));
    }
    fft::backward(buf);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : buf)
        v *= scale;
    return buf;
}

DelaySweep make_symmetric_sweep(double carrier, double dt, double half_span,
                                double fringe_sampling) {
    if (!(carrier > 0.0) || !(dt > 0.0) || !(half_span > 0.0))
        throw DelayError("sweep needs positive carrier, dt, and span");
    if (!(fringe_sampling >= 4.0))
        throw DelayError("fringe_sampling must be at least 4");

    double step = kTwoPi / carrier / fringe_sampling;
    const double in_samples = step / dt;
    const double snapped = std::round(in_samples);
    if (snapped >= 1.0 && std::abs(in_samples - snapped) < 1e-9 * std::max(1.0, in_samples))
        step = snapped * dt;

    const auto half_count = static_cast<long long>(std::ceil(half_span / step - 1e-9));
    long long first = -half_count;
    long long last = half_count;

    // Trim the count to a whole number of fringe periods when the step is
    // commensurate with the carrier. The baseband filter sees the sweep as
    // periodic; a whole number of periods puts the carrier and its second
    // harmonic exactly on spectral bins, so fringes that persist to the sweep
    // edge (a coherent source) cannot leak into the extracted envelope.
    const double per_fringe = kTwoPi / carrier / step;
    const double k_round = std::round(per_fringe);
    if (k_round >= 2.0 && std::abs(per_fringe - k_round) < 1e-9 * per_fringe) {
        const auto k = static_cast<long long>(k_round);
        const long long total = last - first + 1;
        const long long excess = total % k;
        if (total - excess >= k)
            last -= excess;
    }

    DelaySweep sweep;
    sweep.fringe_sampling = fringe_sampling;
    sweep.delays.reserve(static_cast<std::size_t>(last - first + 1));
    for (long long j = first; j <= last; ++j)
        sweep.delays.push_back(static_cast<double>(j) * step);
    return sweep;
}

Interferogram tpa_interferogram(const FieldEnsemble& fields, const DelaySweep& sweep,
                                double arm_ratio, std::size_t threads) {
    validate_sweep(fields, sweep);
    if (!(arm_ratio >= 0.0) || !std::isfinite(arm_ratio))
        throw ConfigError("arm_ratio must be non-negative and finite");

    const std::size_t n = fields.n_samples;
    const std::size_t padded = 2 * n;
    const std::size_t n_delays = sweep.delays.size();
    const double mean_i = intensity_moments(fields).mean;

    std::vector<ShiftPlan> plans(n_delays);
    std::map<double, std::vector<std::size_t>> groups; // fraction -> delay indices
    for (std::size_t j = 0; j < n_delays; ++j) {
        plans[j] = decompose_shift(sweep.delays[j], fields.dt);
        groups[plans[j].fraction].push_back(j);
    }

    const double r2 = arm_ratio * arm_ratio;
    const double r3 = r2 * arm_ratio;
    const double r4 = r2 * r2;
    const double self_level = (1.0 + r4) * mean_i * mean_i;

    std::vector<std::vector<double>> slots(fields.n_realizations);
    parallel_for(fields.n_realizations, threads, [&](std::size_t r) {
        const std::complex<double>* field = fields.realization(r);
        const ArmSeries base = build_arm_series(field, n, padded, 0);

        auto& row = slots[r];
        row.assign(n_delays, 0.0);

        for (const auto& [fraction, members] : groups) {
            const ArmSeries* shifted = &base;
            ArmSeries shifted_storage;
            std::size_t guard = 0;
            if (fraction != 0.0) {
                const auto moved = fractional_shift(field, n, fraction);
                guard = kEdgeGuard;
                shifted_storage = build_arm_series(moved.data(), n, padded, guard);
                shifted = &shifted_storage;
            }

            const auto r_ii = linear_correlation(base.i_hat, shifted->i_hat);
            const auto r_cb = linear_correlation(base.c_hat, shifted->b_hat);
            const auto r_bc = linear_correlation(base.b_hat, shifted->c_hat);
            const auto r_dd = linear_correlation(base.d_hat, shifted->d_hat);

            for (const std::size_t j : members) {
                const long long m = plans[j].whole;
                const long long count =
                    overlap_count(m, static_cast<long long>(n), static_cast<long long>(guard));
                const std::size_t at = m >= 0 ? static_cast<std::size_t>(m)
                                              : padded - static_cast<std::size_t>(-m);
                const double tau = sweep.delays[j];
                const std::complex<double> ph1{std::cos(fields.carrier * tau),
                                               std::sin(fields.carrier * tau)};
                const std::complex<double> ph2{std::cos(2.0 * fields.carrier * tau),
                                               std::sin(2.0 * fields.carrier * tau)};

                const double cross = 4.0 * r2 * r_ii[at].real() +
                                     4.0 * (ph1 * (arm_ratio * r_cb[at] + r3 * r_bc[at])).real() +
                                     2.0 * r2 * (ph2 * r_dd[at]).real();
                row[j] = self_level + cross / static_cast<double>(count);
            }
        }
    });

    Interferogram out;
    out.delays = sweep.delays;
    out.carrier = fields.carrier;
    out.signal.assign(n_delays, 0.0);
    out.per_realization.resize(fields.n_realizations * n_delays);
    for (std::size_t r = 0; r < fields.n_realizations; ++r) {
        const auto& row = slots[r];
        std::copy(row.begin(), row.end(), out.per_realization.begin() + r * n_delays);
        for (std::size_t j = 0; j < n_delays; ++j)
            out.signal[j] += row[j];
    }
    const double scale = 1.0 / static_cast<double>(fields.n_realizations);
    for (auto& v : out.signal)
        v *= scale;

    out.meta.source = fields.source;
    out.meta.n_realizations = fields.n_realizations;
    out.meta.n_samples = fields.n_samples;
    out.meta.dt = fields.dt;
    out.meta.mean_intensity = mean_i;
    out.meta.self_level = self_level;
    out.meta.arm_ratio = arm_ratio;
    return out;
}

namespace {

struct LagCurves {
    std::vector<double> ii;           // <I(t) I(t-s)> per lag, this realization
    std::vector<std::complex<double>> bb; // <E(t) conj(E(t-s))> per lag
    double mean_intensity = 0.0;
};

/// Per-realization unbiased lag averages for lags 0..max_lag.
LagCurves realization_lag_curves(const std::complex<double>* field, std::size_t n,
                                 std::size_t max_lag, bool want_g1) {
    const std::size_t padded = 2 * n;
    std::vector<std::complex<double>> in(n), b(n);
    double sum_i = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double intensity = std::norm(field[k]);
        in[k] = intensity;
        b[k] = field[k];
        sum_i += intensity;
    }

    LagCurves out;
    out.mean_intensity = sum_i / static_cast<double>(n);

    const auto i_hat = padded_fft(in, padded);
    const auto r_ii = linear_correlation(i_hat, i_hat);
    out.ii.resize(max_lag + 1);
    for (std::size_t s = 0; s <= max_lag; ++s)
        out.ii[s] = r_ii[s].real() / static_cast<double>(n - s);

    if (want_g1) {
        const auto b_hat = padded_fft(b, padded);
        const auto r_bb = linear_correlation(b_hat, b_hat);
        out.bb.resize(max_lag + 1);
        for (std::size_t s = 0; s <= max_lag; ++s)
            out.bb[s] = r_bb[s] / static_cast<double>(n - s);
    }
    return out;
}

std::size_t lag_count(const FieldEnsemble& fields, double max_lag_time) {
    if (fields.n_realizations == 0 || fields.data.empty())
        throw ConfigError("correlation needs a non-empty field ensemble");
    if (!(max_lag_time >= 0.0))
        throw DelayError("max_lag_time must be non-negative");
    const auto max_lag = static_cast<std::size_t>(std::floor(max_lag_time / fields.dt + 1e-9));
    if (max_lag > fields.n_samples / 4)
        throw DelayError("max lag exceeds a quarter of the record");
    return max_lag;
}

} // namespace

G2Curve direct_g2(const FieldEnsemble& fields, double max_lag_time, std::size_t threads) {
    const std::size_t max_lag = lag_count(fields, max_lag_time);
    const std::size_t n_real = fields.n_realizations;

    std::vector<LagCurves> slots(n_real);
    parallel_for(n_real, threads, [&](std::size_t r) {
        slots[r] = realization_lag_curves(fields.realization(r), fields.n_samples, max_lag, false);
    });

    std::vector<double> sum_curve(max_lag + 1, 0.0);
    double sum_mean = 0.0;
    for (const auto& s : slots) {
        sum_mean += s.mean_intensity;
        for (std::size_t k = 0; k <= max_lag; ++k)
            sum_curve[k] += s.ii[k];
    }

    const double n_real_d = static_cast<double>(n_real);
    G2Curve curve;
    curve.method = G2Method::direct;
    curve.lags.resize(max_lag + 1);
    curve.g2.resize(max_lag + 1);
    curve.std_error.assign(max_lag + 1, 0.0);
    const double denom = (sum_mean / n_real_d) * (sum_mean / n_real_d);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        curve.lags[k] = static_cast<double>(k) * fields.dt;
        curve.g2[k] = (sum_curve[k] / n_real_d) / denom;
    }

    if (n_real > 1) {
        // Leave-one-out replicates of the full ratio estimator.
        std::vector<double> rep(n_real);
        for (std::size_t k = 0; k <= max_lag; ++k) {
            double mean_rep = 0.0;
            for (std::size_t r = 0; r < n_real; ++r) {
                const double num = (sum_curve[k] - slots[r].ii[k]) / (n_real_d - 1.0);
                const double den = (sum_mean - slots[r].mean_intensity) / (n_real_d - 1.0);
                rep[r] = num / (den * den);
                mean_rep += rep[r];
            }
            mean_rep /= n_real_d;
            double ss = 0.0;
            for (std::size_t r = 0; r < n_real; ++r)
                ss += (rep[r] - mean_rep) * (rep[r] - mean_rep);
            curve.std_error[k] = std::sqrt((n_real_d - 1.0) / n_real_d * ss);
        }
    }

    curve.g2_zero = curve.g2[0];
    curve.g2_zero_se = curve.std_error[0];
    return curve;
}

FieldCorrelations field_correlations(const FieldEnsemble& fields, double max_lag_time,
                                     std::size_t threads) {
    const std::size_t max_lag = lag_count(fields, max_lag_time);
    const std::size_t n_real = fields.n_realizations;

    std::vector<LagCurves> slots(n_real);
    parallel_for(n_real, threads, [&](std::size_t r) {
        slots[r] = realization_lag_curves(fields.realization(r), fields.n_samples, max_lag, true);
    });

    double mean_i = 0.0;
    FieldCorrelations out;
    out.lags.resize(max_lag + 1);
    out.g2.assign(max_lag + 1, 0.0);
    out.g1.assign(max_lag + 1, {0.0, 0.0});
    for (const auto& s : slots) {
        mean_i += s.mean_intensity;
        for (std::size_t k = 0; k <= max_lag; ++k) {
            out.g2[k] += s.ii[k];
            out.g1[k] += s.bb[k];
        }
    }
    mean_i /= static_cast<double>(n_real);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        out.lags[k] = static_cast<double>(k) * fields.dt;
        out.g2[k] /= static_cast<double>(n_real) * mean_i * mean_i;
        out.g1[k] /= static_cast<double>(n_real) * mean_i;
    }
    return out;
}

} // namespace g2sim
