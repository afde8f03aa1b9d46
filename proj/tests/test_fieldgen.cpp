#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "g2sim/errors.hpp"
#include "g2sim/fft.hpp"
#include "g2sim/fieldgen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace g2sim;

namespace {

SpectrumSpec gaussian_line(double fwhm, double detuning = 0.0) {
    return SpectrumSpec{LineShape::gaussian, detuning, fwhm};
}

// One-sample Kolmogorov-Smirnov distance against the unit-mean exponential.
double ks_exponential(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 1.0 - std::exp(-samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        worst = std::max({worst, std::abs(cdf - lo), std::abs(cdf - hi)});
    }
    return worst;
}

// Log-quadratic fit of the periodogram peak; exact for a Gaussian line.
double fitted_fwhm(const std::vector<double>& power, std::size_t n, double dt) {
    std::size_t peak = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (power[k] > power[peak])
            peak = k;
    const double half = power[peak] / 2.0;

    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (power[k] < half * 0.5)
            continue; // fit only the bright core of the line
        const double w = fft::bin_frequency(k, n, dt);
        const double y = std::log(power[k]);
        s0 += 1;
        s1 += w;
        s2 += w * w;
        s3 += w * w * w;
        s4 += w * w * w * w;
        t0 += y;
        t1 += y * w;
        t2 += y * w * w;
    }
    // Solve the 3x3 normal equations for y = a + b w + c w^2 by elimination.
    double m[3][4] = {{s0, s1, s2, t0}, {s1, s2, s3, t1}, {s2, s3, s4, t2}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col]))
                pivot = r;
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    const double c = m[2][3] / m[2][2];
    REQUIRE(c < 0.0);
    const double sigma = std::sqrt(-1.0 / (2.0 * c));
    return 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma;
}

} // namespace

TEST_CASE("thermal intensity is exponentially distributed") {
    const auto fields = gen_thermal(gaussian_line(0.1), 64, 4096, 1.0, 101);
    const double mean = intensity_moments(fields).mean;
    std::vector<double> samples;
    samples.reserve(fields.data.size());
    for (const auto& v : fields.data)
        samples.push_back(std::norm(v) / mean);
    CHECK(ks_exponential(std::move(samples)) < 0.01);
}

TEST_CASE("thermal ensembles are deterministic and thread-count independent") {
    const auto a = gen_thermal(gaussian_line(0.1), 12, 4096, 1.0, 5, 0.0, 1);
    const auto b = gen_thermal(gaussian_line(0.1), 12, 4096, 1.0, 5, 0.0, 3);
    REQUIRE(a.data.size() == b.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i)
        REQUIRE(a.data[i] == b.data[i]);

    const auto c = gen_thermal(gaussian_line(0.1), 12, 4096, 1.0, 6);
    CHECK(a.data != c.data);
}

TEST_CASE("periodogram reproduces the requested line width and center") {
    const double fwhm = 0.08;
    const double detuning = 0.05;
    const auto fields = gen_thermal(gaussian_line(fwhm, detuning), 256, 4096, 1.0, 21);
    const auto power = ensemble_periodogram(fields);
    CHECK(std::abs(fitted_fwhm(power, 4096, 1.0) - fwhm) < 0.05 * fwhm);

    std::size_t peak = 0;
    for (std::size_t k = 1; k < power.size(); ++k)
        if (power[k] > power[peak])
            peak = k;
    CHECK(std::abs(fft::bin_frequency(peak, 4096, 1.0) - detuning) < fwhm / 4.0);
}

TEST_CASE("lorentzian line carries heavier tails than gaussian") {
    const SpectrumSpec lor{LineShape::lorentzian, 0.0, 0.08};
    const auto fields = gen_thermal(lor, 128, 4096, 1.0, 33);
    const auto power = ensemble_periodogram(fields);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < power.size(); ++k)
        if (power[k] > power[peak])
            peak = k;
    // At four half-widths from center a Lorentzian retains 1/17 of its peak,
    // a Gaussian would be at e^{-16 ln 2} ~ 1e-5 of it.
    const double w4 = 4.0 * 0.04;
    double tail = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k)
        if (std::abs(std::abs(fft::bin_frequency(k, 4096, 1.0)) - w4) < 0.005)
            tail = std::max(tail, power[k]);
    CHECK(tail > power[peak] / 40.0);
    CHECK(tail < power[peak] / 8.0);
}

TEST_CASE("coherent fields have constant modulus and drawn phases") {
    const auto fields = gen_coherent(1.5, 0.02, 8, 4096, 1.0, 9);
    for (const auto& v : fields.data)
        REQUIRE(std::abs(std::abs(v) - 1.5) < 1e-12);

    // The detuning advances the phase by detuning * dt per sample.
    const auto* e = fields.realization(3);
    for (std::size_t n = 1; n < 64; ++n) {
        const std::complex<double> step = e[n] * std::conj(e[n - 1]);
        CHECK(std::abs(std::arg(step) - 0.02) < 1e-9);
    }

    // Global phases differ between realizations.
    CHECK(std::abs(fields.realization(0)[0] - fields.realization(1)[0]) > 1e-3);
}

TEST_CASE("mixture hits the requested mean power split") {
    const double x = 0.35;
    const auto fields = gen_mixture(x, gaussian_line(0.1), 2.0, 64, 4096, 1.0, 17);
    const auto moments = intensity_moments(fields);
    CHECK(std::abs(moments.mean - 2.0) < 0.1);
    CHECK(fields.source.thermal_fraction == x);
    CHECK(fields.mean_intensity == 2.0);
}

TEST_CASE("mixture g2 follows 1 + 2x - x^2 across the blend") {
    for (const double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto fields =
            gen_mixture(x, gaussian_line(0.1), 1.0, 64, 4096, 1.0, 50 + std::lround(x * 8));
        const double expected = 1.0 + 2.0 * x - x * x;
        CHECK(std::abs(intensity_moments(fields).g2_zero - expected) < 0.05);
    }
}

TEST_CASE("mixture edge cases collapse to the pure sources") {
    const auto thermal = gen_mixture(1.0, gaussian_line(0.1), 1.0, 4, 4096, 1.0, 3);
    CHECK(thermal.thermal_statistics());

    const auto coherent = gen_mixture(0.0, gaussian_line(0.1), 1.0, 4, 4096, 1.0, 3);
    for (const auto& v : coherent.data)
        REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-12);
}

TEST_CASE("grid and domain validation") {
    const SpectrumSpec spec = gaussian_line(0.1);
    CHECK_THROWS_AS(gen_thermal(spec, 0, 4096, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(gen_thermal(spec, 4, 4000, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(gen_thermal(spec, 4, 2048, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(gen_thermal(spec, 4, 4096, -1.0, 1), ConfigError);
    CHECK_THROWS_AS(gen_thermal(spec, 4, 4096, 1.0, 1, 4.0), ConfigError);

    // Narrower than 16 bins or wider than carrier / 4 is not resolvable.
    CHECK_THROWS_AS(gen_thermal(gaussian_line(1e-4), 4, 4096, 1.0, 1), SpectrumError);
    CHECK_THROWS_AS(gen_thermal(gaussian_line(1.0), 4, 4096, 1.0, 1), SpectrumError);

    CHECK_THROWS_AS(gen_mixture(-0.1, spec, 1.0, 4, 4096, 1.0, 1), ModelDomainError);
    CHECK_THROWS_AS(gen_mixture(1.1, spec, 1.0, 4, 4096, 1.0, 1), ModelDomainError);
    CHECK_THROWS_AS(gen_mixture(0.5, spec, 0.0, 4, 4096, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(gen_coherent(-1.0, 0.0, 4, 4096, 1.0, 1), ConfigError);
}
