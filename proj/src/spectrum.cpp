#include "g2sim/spectrum.hpp"

#include "g2sim/errors.hpp"

#include <cmath>

namespace g2sim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLn2 = 0.69314718055994530941723212145818;
} // namespace

double psd(const SpectrumSpec& spec, double omega) {
    const double x = omega - spec.center_detuning;
    switch (spec.shape) {
    case LineShape::gaussian: {
        // fwhm = 2*sqrt(2 ln 2) * sigma
        const double sigma = spec.fwhm / (2.0 * std::sqrt(2.0 * kLn2));
        const double u = x / sigma;
        return std::exp(-0.5 * u * u) / (sigma * std::sqrt(kTwoPi));
    }
    case LineShape::lorentzian: {
        const double gamma = 0.5 * spec.fwhm; // half width at half maximum
        return gamma / (M_PI * (x * x + gamma * gamma));
    }
    }
    return 0.0;
}

double coherence_hwhm(const SpectrumSpec& spec) {
    switch (spec.shape) {
    case LineShape::gaussian:
        // |g1|^2 = exp(-sigma^2 tau^2) with sigma = fwhm / (2 sqrt(2 ln 2))
        return 2.0 * std::sqrt(2.0) * kLn2 / spec.fwhm;
    case LineShape::lorentzian:
        // |g1|^2 = exp(-fwhm |tau|)
        return kLn2 / spec.fwhm;
    }
    return 0.0;
}

void validate(const SpectrumSpec& spec) {
    if (!(spec.fwhm > 0.0) || !std::isfinite(spec.fwhm))
        throw SpectrumError("spectrum fwhm must be positive and finite");
    if (!std::isfinite(spec.center_detuning))
        throw SpectrumError("spectrum center_detuning must be finite");
}

std::string to_string(LineShape shape) {
    return shape == LineShape::gaussian ? "gaussian" : "lorentzian";
}

LineShape line_shape_from_string(const std::string& name) {
    if (name == "gaussian")
        return LineShape::gaussian;
    if (name == "lorentzian")
        return LineShape::lorentzian;
    throw ConfigError("unknown line shape: " + name);
}

} // namespace g2sim
