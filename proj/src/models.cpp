#include "g2sim/models.hpp"

#include "g2sim/errors.hpp"
#include "g2sim/optics.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace g2sim::models {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

// Adaptive Simpson with the standard 1/15 Richardson correction. The
// integrands here are smooth truncated Gaussians, so the recursion stays
// shallow; the depth cap is a safety net, not a tuning knob.
template <typename F>
double adapt(const F& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

// Composite pre-scan plus per-panel refinement. A bare 3-point estimate can
// miss a peak much narrower than the interval and anchor the tolerance on
// nothing; 64 panels see the mass first, and each panel then refines against
// its share of an absolute budget proportional to the scanned L1 mass.
template <typename F>
double integrate(const F& f, double a, double b, double rel) {
    constexpr int kPanels = 64;
    const double h = (b - a) / kPanels;
    std::array<double, 2 * kPanels + 1> grid;
    for (int j = 0; j <= 2 * kPanels; ++j)
        grid[static_cast<std::size_t>(j)] = f(a + 0.5 * h * j);

    double mass = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const auto k = static_cast<std::size_t>(2 * p);
        mass += std::abs(h / 6.0 * (grid[k] + 4.0 * grid[k + 1] + grid[k + 2]));
    }
    const double eps = std::max(mass, 1e-300) * rel / kPanels;

    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const auto k = static_cast<std::size_t>(2 * p);
        const double pa = a + p * h;
        const double whole = h / 6.0 * (grid[k] + 4.0 * grid[k + 1] + grid[k + 2]);
        total += adapt(f, pa, grid[k], pa + h, grid[k + 2], pa + 0.5 * h, grid[k + 1],
                       whole, eps, 24);
    }
    return total;
}

struct Moments {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

// Moments of W(I) ~ exp(-(I - a)^2 / 4) on I >= 0, each up to one common
// positive constant that cancels in every ratio we expose. Two branches keep
// the integrand O(1) for any a: below threshold the exp(-a^2/4) factor is
// dropped, above it the peak is centered by the substitution u = I - a.
Moments laser_moments(double a) {
    constexpr double rel = 1e-11;
    Moments m;
    if (a < 0.0) {
        // Both factors decay; the window tracks whichever scale is shorter so
        // the pre-scan panels stay comparable to the integrand's support.
        const double hi = std::min(60.0, 8.0 + 140.0 / std::max(1.0, -a));
        const auto f = [a](double i) { return std::exp(-i * i / 4.0 + a * i / 2.0); };
        m.m0 = integrate([&](double i) { return f(i); }, 0.0, hi, rel);
        m.m1 = integrate([&](double i) { return i * f(i); }, 0.0, hi, rel);
        m.m2 = integrate([&](double i) { return i * i * f(i); }, 0.0, hi, rel);
    } else {
        const double lo = -std::min(a, 40.0);
        const auto f = [](double u) { return std::exp(-u * u / 4.0); };
        m.m0 = integrate([&](double u) { return f(u); }, lo, 40.0, rel);
        m.m1 = integrate([&](double u) { return (a + u) * f(u); }, lo, 40.0, rel);
        m.m2 = integrate([&](double u) { return (a + u) * (a + u) * f(u); }, lo, 40.0, rel);
    }
    return m;
}

double pump_parameter(double pump) {
    if (!std::isfinite(pump) || std::abs(pump) > 100.0)
        throw ModelDomainError("pump must be finite and within [-100, 100]");
    return kPumpScale * pump;
}

} // namespace

double mixture_g2(double thermal_fraction) {
    if (!(thermal_fraction >= 0.0) || !(thermal_fraction <= 1.0)) {
        std::ostringstream msg;
        msg << "thermal fraction " << thermal_fraction << " outside [0, 1]";
        throw ModelDomainError(msg.str());
    }
    return 1.0 + 2.0 * thermal_fraction - thermal_fraction * thermal_fraction;
}

double mixture_thermal_fraction(double g2_zero) {
    if (!(g2_zero >= 1.0) || !(g2_zero <= 2.0)) {
        std::ostringstream msg;
        msg << "g2(0) = " << g2_zero << " outside [1, 2] has no thermal-fraction preimage";
        throw ModelDomainError(msg.str());
    }
    return 1.0 - std::sqrt(2.0 - g2_zero);
}

double laser_g2(double pump) {
    const double a = pump_parameter(pump);
    const Moments m = laser_moments(a);
    return m.m2 * m.m0 / (m.m1 * m.m1);
}

double laser_g2_closed_form(double pump) {
    const double a = pump_parameter(pump);
    // Q and E both underflow together far below threshold; erfc keeps the
    // ratio phi = E / Q well conditioned for |a| up to ~50.
    const double q = 0.5 * kSqrtPi * std::erfc(-0.5 * a);
    const double e = std::exp(-a * a / 4.0);
    const double phi = e / q;
    return ((a * a + 2.0) + a * phi) / ((a + phi) * (a + phi));
}

double laser_relative_power(double pump) {
    const double a = pump_parameter(pump);
    const Moments at_pump = laser_moments(a);
    const Moments at_threshold = laser_moments(0.0);
    return (at_pump.m1 / at_pump.m0) / (at_threshold.m1 / at_threshold.m0);
}

double with_ase_pedestal(double base_fraction, double ase_fraction) {
    if (!(base_fraction >= 0.0) || !(base_fraction <= 1.0))
        throw ModelDomainError("base thermal fraction outside [0, 1]");
    if (!(ase_fraction >= 0.0) || !(ase_fraction <= 1.0))
        throw ModelDomainError("ase fraction outside [0, 1]");
    return base_fraction + ase_fraction * (1.0 - base_fraction);
}

double ase_g2(double base_g2, double ase_fraction) {
    return mixture_g2(with_ase_pedestal(mixture_thermal_fraction(base_g2), ase_fraction));
}

double siegert_max_residual(const FieldEnsemble& fields, double max_lag_time,
                            std::size_t threads) {
    if (!fields.thermal_statistics())
        throw ModelDomainError(
            "the Gaussian-field factorization g2 = 1 + |g1|^2 only holds for thermal sources");
    const FieldCorrelations corr = field_correlations(fields, max_lag_time, threads);
    double worst = 0.0;
    for (std::size_t k = 0; k < corr.lags.size(); ++k)
        worst = std::max(worst, std::abs(corr.g2[k] - 1.0 - std::norm(corr.g1[k])));
    return worst;
}

} // namespace g2sim::models
