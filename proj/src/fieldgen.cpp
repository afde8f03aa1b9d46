#include "g2sim/fieldgen.hpp"

#include "g2sim/errors.hpp"
#include "g2sim/fft.hpp"
#include "g2sim/parallel.hpp"
#include "g2sim/rng.hpp"

#include <cmath>
#include <sstream>

namespace g2sim {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

bool power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

double resolve_carrier(double carrier, double dt) {
    return carrier > 0.0 ? carrier : default_carrier(dt);
}

void check_grid(std::size_t n_realizations, std::size_t n_samples, double dt, double carrier) {
    if (n_realizations == 0)
        throw ConfigError("n_realizations must be positive");
    if (!power_of_two(n_samples) || n_samples < 4096)
        throw ConfigError("n_samples must be a power of two >= 4096");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be positive and finite");
    if (!(carrier > 0.0) || !(carrier * dt < kPi))
        throw ConfigError("carrier must satisfy 0 < carrier * dt < pi");
}

FieldEnsemble make_empty(std::size_t n_realizations, std::size_t n_samples, double dt,
                         double carrier, double mean_intensity, SourceInfo source) {
    FieldEnsemble out;
    out.n_realizations = n_realizations;
    out.n_samples = n_samples;
    out.dt = dt;
    out.carrier = carrier;
    out.mean_intensity = mean_intensity;
    out.source = std::move(source);
    out.data.assign(n_realizations * n_samples, {0.0, 0.0});
    return out;
}

/// Per-bin spectral standard deviations for a thermal component of the given
/// mean intensity. Shared by gen_thermal and gen_mixture.
std::vector<double> spectral_sigmas(const SpectrumSpec& spec, std::size_t n_samples, double dt,
                                    double carrier, double mean_intensity) {
    validate(spec);
    const double bin_width = kTwoPi / (static_cast<double>(n_samples) * dt);
    const double min_fwhm = 16.0 * bin_width;
    const double max_fwhm = carrier / 4.0;
    if (spec.fwhm < min_fwhm || spec.fwhm > max_fwhm) {
        std::ostringstream msg;
        msg << "spectrum fwhm " << spec.fwhm << " not resolvable on this grid: need "
            << min_fwhm << " (16 frequency bins) <= fwhm <= " << max_fwhm << " (carrier / 4)";
        throw SpectrumError(msg.str());
    }

    std::vector<double> sigma(n_samples);
    double total = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double w = psd(spec, fft::bin_frequency(k, n_samples, dt));
        sigma[k] = w;
        total += w;
    }
    if (!(total > 0.0))
        throw SpectrumError("spectrum has no weight on the simulation grid");
    for (auto& s : sigma)
        s = std::sqrt(mean_intensity * s / total);
    return sigma;
}

/// Draws one thermal realization into dst: colored spectral noise, inverse FFT.
void fill_thermal(std::complex<double>* dst, const std::vector<double>& sigma,
                  std::uint64_t seed, std::uint64_t realization) {
    const std::size_t n = sigma.size();
    RandomStream rng(seed, realization, 0);
    std::vector<std::complex<double>> bins(n);
    for (std::size_t k = 0; k < n; ++k)
        bins[k] = sigma[k] * rng.complex_gaussian();
    fft::backward(bins);
    for (std::size_t k = 0; k < n; ++k)
        dst[k] = bins[k];
}

} // namespace

double default_carrier(double dt) {
    return 0.4 * kPi / dt;
}

FieldEnsemble gen_thermal(const SpectrumSpec& spec, std::size_t n_realizations,
                          std::size_t n_samples, double dt, std::uint64_t seed, double carrier,
                          std::size_t threads) {
    carrier = resolve_carrier(carrier, dt);
    check_grid(n_realizations, n_samples, dt, carrier);
    const auto sigma = spectral_sigmas(spec, n_samples, dt, carrier, 1.0);

    SourceInfo source;
    source.kind = SourceClass::thermal;
    source.thermal_fraction = 1.0;
    source.spectrum = spec;
    source.seed = seed;
    auto out = make_empty(n_realizations, n_samples, dt, carrier, 1.0, source);

    parallel_for(n_realizations, threads,
                 [&](std::size_t r) { fill_thermal(out.realization(r), sigma, seed, r); });
    return out;
}

FieldEnsemble gen_coherent(double amplitude, double detuning, std::size_t n_realizations,
                           std::size_t n_samples, double dt, std::uint64_t seed, double carrier,
                           std::size_t threads) {
    carrier = resolve_carrier(carrier, dt);
    check_grid(n_realizations, n_samples, dt, carrier);
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ConfigError("amplitude must be non-negative and finite");
    if (!(std::abs(detuning) * dt < kPi))
        throw ConfigError("detuning magnitude must stay below the Nyquist frequency");

    SourceInfo source;
    source.kind = SourceClass::coherent;
    source.thermal_fraction = 0.0;
    source.coherent_detuning = detuning;
    source.seed = seed;
    auto out = make_empty(n_realizations, n_samples, dt, carrier, amplitude * amplitude, source);

    parallel_for(n_realizations, threads, [&](std::size_t r) {
        RandomStream rng(seed, r, 1);
        const double phase = kTwoPi * rng.uniform();
        auto* dst = out.realization(r);
        for (std::size_t n = 0; n < n_samples; ++n) {
            const double arg = detuning * static_cast<double>(n) * dt + phase;
            dst[n] = amplitude * std::complex<double>(std::cos(arg), std::sin(arg));
        }
    });
    return out;
}

FieldEnsemble gen_mixture(double thermal_fraction, const SpectrumSpec& spec,
                          double total_mean_intensity, std::size_t n_realizations,
                          std::size_t n_samples, double dt, std::uint64_t seed, double carrier,
                          std::size_t threads) {
    carrier = resolve_carrier(carrier, dt);
    check_grid(n_realizations, n_samples, dt, carrier);
    if (!(thermal_fraction >= 0.0 && thermal_fraction <= 1.0))
        throw ModelDomainError("thermal_fraction must lie in [0, 1]");
    if (!(total_mean_intensity > 0.0) || !std::isfinite(total_mean_intensity))
        throw ConfigError("total_mean_intensity must be positive and finite");

    const double thermal_mean = thermal_fraction * total_mean_intensity;
    const double coherent_amp = std::sqrt((1.0 - thermal_fraction) * total_mean_intensity);
    const double detuning = spec.center_detuning;

    // The thermal component must be resolvable even when its weight is zero;
    // the spectrum still defines the source's nominal line shape.
    const auto sigma = spectral_sigmas(spec, n_samples, dt, carrier,
                                       thermal_mean > 0.0 ? thermal_mean : 1.0);

    SourceInfo source;
    source.kind = SourceClass::mixture;
    source.thermal_fraction = thermal_fraction;
    source.spectrum = spec;
    source.coherent_detuning = detuning;
    source.seed = seed;
    auto out =
        make_empty(n_realizations, n_samples, dt, carrier, total_mean_intensity, source);

    parallel_for(n_realizations, threads, [&](std::size_t r) {
        auto* dst = out.realization(r);
        if (thermal_mean > 0.0)
            fill_thermal(dst, sigma, seed, r);
        if (coherent_amp > 0.0) {
            RandomStream rng(seed, r, 1);
            const double phase = kTwoPi * rng.uniform();
            for (std::size_t n = 0; n < n_samples; ++n) {
                const double arg = detuning * static_cast<double>(n) * dt + phase;
                dst[n] += coherent_amp * std::complex<double>(std::cos(arg), std::sin(arg));
            }
        }
    });
    return out;
}

std::vector<double> ensemble_periodogram(const FieldEnsemble& fields, std::size_t threads) {
    const std::size_t n = fields.n_samples;
    std::vector<std::vector<double>> slots(fields.n_realizations);
    parallel_for(fields.n_realizations, threads, [&](std::size_t r) {
        std::vector<std::complex<double>> buf(fields.realization(r), fields.realization(r) + n);
        fft::forward(buf);
        auto& p = slots[r];
        p.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            p[k] = std::norm(buf[k]);
    });

    std::vector<double> mean(n, 0.0);
    for (const auto& p : slots)
        for (std::size_t k = 0; k < n; ++k)
            mean[k] += p[k];
    const double scale = 1.0 / static_cast<double>(fields.n_realizations);
    for (auto& v : mean)
        v *= scale;
    return mean;
}

IntensityMoments intensity_moments(const FieldEnsemble& fields) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& e : fields.data) {
        const double i = std::norm(e);
        sum += i;
        sum_sq += i * i;
    }
    const double count = static_cast<double>(fields.data.size());
    IntensityMoments m;
    m.mean = sum / count;
    m.mean_sq = sum_sq / count;
    m.g2_zero = m.mean_sq / (m.mean * m.mean);
    return m;
}

} // namespace g2sim
