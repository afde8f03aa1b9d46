#include "g2sim/dsp.hpp"

#include "g2sim/errors.hpp"
#include "g2sim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace g2sim::dsp {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double uniform_step(const std::vector<double>& delays) {
    if (delays.size() < 2)
        throw DelayError("lowpass needs at least two delay points");
    const double step = delays[1] - delays[0];
    if (!(step > 0.0))
        throw DelayError("delay grid must be strictly increasing");
    for (std::size_t j = 2; j < delays.size(); ++j) {
        const double d = delays[j] - delays[j - 1];
        if (std::abs(d - step) > 1e-9 * std::max(step, std::abs(delays[j])))
            throw DelayError("lowpass needs a uniform delay grid");
    }
    return step;
}

double raised_cosine(double omega_abs, double lo, double hi) {
    if (omega_abs <= lo)
        return 1.0;
    if (omega_abs >= hi)
        return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (omega_abs - lo) / (hi - lo)));
}

std::size_t zero_delay_index(const std::vector<double>& delays, double step) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < delays.size(); ++j)
        if (std::abs(delays[j]) < std::abs(delays[best]))
            best = j;
    if (std::abs(delays[best]) > 1e-6 * step)
        throw DelayError("delay grid must include zero delay");
    return best;
}

struct PlateauWindow {
    std::vector<std::size_t> indices;
    double tau_scale = 0.0; // span / 10, the flatness yardstick
};

PlateauWindow plateau_window(const std::vector<double>& delays, double plateau_fraction) {
    if (!(plateau_fraction > 0.0) || !(plateau_fraction < 0.5))
        throw PlateauError("plateau_fraction must lie in (0, 0.5)");
    const std::size_t n = delays.size();
    const auto per_side = static_cast<std::size_t>(std::floor(plateau_fraction * n));
    if (per_side < 2)
        throw PlateauError("sweep too short for a plateau estimate");
    PlateauWindow win;
    win.indices.reserve(2 * per_side);
    for (std::size_t j = 0; j < per_side; ++j)
        win.indices.push_back(j);
    for (std::size_t j = n - per_side; j < n; ++j)
        win.indices.push_back(j);
    win.tau_scale = (delays.back() - delays.front()) / 10.0;
    return win;
}

struct PlateauFit {
    double level = 0.0;
    double slope = 0.0;
};

PlateauFit fit_plateau(const std::vector<double>& delays, const std::vector<double>& values,
                       const PlateauWindow& win) {
    double mt = 0.0, mv = 0.0;
    for (const std::size_t j : win.indices) {
        mt += delays[j];
        mv += values[j];
    }
    const double n = static_cast<double>(win.indices.size());
    mt /= n;
    mv /= n;
    double stv = 0.0, stt = 0.0;
    for (const std::size_t j : win.indices) {
        stv += (delays[j] - mt) * (values[j] - mv);
        stt += (delays[j] - mt) * (delays[j] - mt);
    }
    PlateauFit fit;
    fit.level = mv;
    fit.slope = stt > 0.0 ? stv / stt : 0.0;
    return fit;
}

void check_plateau(const PlateauFit& fit, double tau_scale) {
    if (!(fit.level > 0.0))
        throw PlateauError("plateau level is not positive");
    const double drift = std::abs(fit.slope * tau_scale / fit.level);
    if (drift > 0.01) {
        std::ostringstream msg;
        msg << "plateau drifts by " << drift * 100.0
            << "% per tenth of the sweep; widen the sweep or check the source";
        throw PlateauError(msg.str());
    }
}

std::vector<double> extract_g2(const std::vector<double>& baseband, double plateau_level) {
    std::vector<double> g2(baseband.size());
    for (std::size_t j = 0; j < baseband.size(); ++j)
        g2[j] = (3.0 * baseband[j] / plateau_level - 1.0) / 2.0;
    return g2;
}

} // namespace

std::vector<double> lowpass_baseband(const std::vector<double>& delays,
                                     const std::vector<double>& signal, double carrier) {
    if (delays.size() != signal.size())
        throw DelayError("delay and signal lengths differ");
    if (!(carrier > 0.0))
        throw BandSeparationError("lowpass needs a positive carrier");
    const double step = uniform_step(delays);
    // The grid must still resolve the second harmonic of the fringes.
    if (step > 2.0 * kPi / carrier / 4.0 * (1.0 + 1e-9))
        throw BandSeparationError("delay grid too coarse to separate fringes from envelope");

    const std::size_t n = delays.size();
    std::vector<std::complex<double>> buf(n);
    for (std::size_t j = 0; j < n; ++j)
        buf[j] = signal[j];
    fft::forward(buf);

    const double lo = 7.0 / 16.0 * carrier;
    const double hi = 9.0 / 16.0 * carrier;
    double total = 0.0, transition = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double w = std::abs(fft::bin_frequency(k, n, step));
        const double e = std::norm(buf[k]);
        total += e;
        if (w > lo && w < hi)
            transition += e;
    }
    if (total > 0.0 && transition >= 0.01 * total) {
        std::ostringstream msg;
        msg << "spectral bands overlap: " << transition / total * 100.0
            << "% of the signal energy sits in the filter transition";
        throw BandSeparationError(msg.str());
    }

    for (std::size_t k = 0; k < n; ++k)
        buf[k] *= raised_cosine(std::abs(fft::bin_frequency(k, n, step)), lo, hi);
    fft::backward(buf);

    double peak = 0.0;
    for (const auto& s : signal)
        peak = std::max(peak, std::abs(s));
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::complex<double> v = buf[j] * scale;
        // Real input and a symmetric mask keep the output real.
        if (std::abs(v.imag()) > 1e-6 * std::max(1.0, peak))
            throw BandSeparationError("lowpass output drifted off the real axis");
        out[j] = v.real();
    }
    return out;
}

G2Curve g2_from_interferogram(const Interferogram& gram, double plateau_fraction) {
    const std::size_t n = gram.delays.size();
    if (n == 0 || gram.signal.size() != n)
        throw DelayError("interferogram is empty or inconsistent");
    const double step = uniform_step(gram.delays);
    const std::size_t i0 = zero_delay_index(gram.delays, step);
    const PlateauWindow win = plateau_window(gram.delays, plateau_fraction);

    const std::vector<double> baseband = lowpass_baseband(gram.delays, gram.signal, gram.carrier);
    const PlateauFit fit = fit_plateau(gram.delays, baseband, win);
    check_plateau(fit, win.tau_scale);
    const std::vector<double> g2 = extract_g2(baseband, fit.level);

    G2Curve curve;
    curve.method = G2Method::tpa_filtered;
    curve.lags = gram.delays;
    curve.g2 = g2;
    curve.std_error.assign(n, 0.0);
    curve.g2_zero = g2[i0];
    curve.g2_zero_se = 0.0;

    const std::size_t n_real = gram.meta.n_realizations;
    const bool have_rows = gram.per_realization.size() == n_real * n && n_real > 1;
    if (have_rows) {
        // Leave-one-out over the whole pipeline; the filter is linear, so the
        // replicate mean of filtered rows equals the filtered replicate mean.
        std::vector<std::vector<double>> rows(n_real);
        std::vector<double> sum(n, 0.0);
        for (std::size_t r = 0; r < n_real; ++r) {
            std::vector<double> raw(gram.per_realization.begin() + r * n,
                                    gram.per_realization.begin() + (r + 1) * n);
            rows[r] = lowpass_baseband(gram.delays, raw, gram.carrier);
            for (std::size_t j = 0; j < n; ++j)
                sum[j] += rows[r][j];
        }
        const double n_real_d = static_cast<double>(n_real);
        std::vector<std::vector<double>> rep(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            std::vector<double> drop(n);
            for (std::size_t j = 0; j < n; ++j)
                drop[j] = (sum[j] - rows[r][j]) / (n_real_d - 1.0);
            const PlateauFit rf = fit_plateau(gram.delays, drop, win);
            rep[r] = extract_g2(drop, rf.level);
        }
        for (std::size_t j = 0; j < n; ++j) {
            double mean_rep = 0.0;
            for (std::size_t r = 0; r < n_real; ++r)
                mean_rep += rep[r][j];
            mean_rep /= n_real_d;
            double ss = 0.0;
            for (std::size_t r = 0; r < n_real; ++r)
                ss += (rep[r][j] - mean_rep) * (rep[r][j] - mean_rep);
            curve.std_error[j] = std::sqrt((n_real_d - 1.0) / n_real_d * ss);
        }
        curve.g2_zero_se = curve.std_error[i0];
    } else {
        // No per-realization traces (a file-loaded sweep, say): quote the
        // plateau scatter of the extracted curve as a single error proxy.
        double mean = 0.0;
        for (const std::size_t j : win.indices)
            mean += g2[j];
        mean /= static_cast<double>(win.indices.size());
        double ss = 0.0;
        for (const std::size_t j : win.indices)
            ss += (g2[j] - mean) * (g2[j] - mean);
        const double proxy = std::sqrt(ss / static_cast<double>(win.indices.size() - 1));
        std::fill(curve.std_error.begin(), curve.std_error.end(), proxy);
        curve.g2_zero_se = proxy;
    }
    return curve;
}

double coherence_time(const G2Curve& curve) {
    if (curve.lags.empty() || curve.g2.size() != curve.lags.size())
        throw CoherenceTimeError("g2 curve is empty or inconsistent");
    std::size_t i0 = 0;
    for (std::size_t j = 1; j < curve.lags.size(); ++j)
        if (std::abs(curve.lags[j]) < std::abs(curve.lags[i0]))
            i0 = j;
    if (std::abs(curve.lags[i0]) > 1e-9 * std::abs(curve.lags.back() - curve.lags.front()))
        throw CoherenceTimeError("g2 curve lacks a zero-delay point");

    const double g0 = curve.g2[i0];
    if (!(g0 > 1.05))
        throw CoherenceTimeError("g2(0) <= 1.05 leaves no bunching peak to measure");
    const double target = 1.0 + (g0 - 1.0) / 2.0;

    for (std::size_t j = i0 + 1; j < curve.lags.size(); ++j) {
        if (curve.g2[j] <= target) {
            const double g_prev = curve.g2[j - 1];
            const double t_prev = curve.lags[j - 1];
            const double frac = (g_prev - target) / (g_prev - curve.g2[j]);
            return t_prev + frac * (curve.lags[j] - t_prev);
        }
    }
    throw CoherenceTimeError("g2 does not decay to half height inside the sweep");
}

} // namespace g2sim::dsp
