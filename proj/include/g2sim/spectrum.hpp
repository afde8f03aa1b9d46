// Optical power spectra in baseband units (angular frequency offsets from the carrier).
#pragma once

#include <string>

namespace g2sim {

enum class LineShape { gaussian, lorentzian };

/// Power spectral density of a stationary source, normalized to unit area.
struct SpectrumSpec {
    LineShape shape = LineShape::gaussian;
    double center_detuning = 0.0; ///< line center relative to the carrier [rad/time]
    double fwhm = 0.0;            ///< full width at half maximum [rad/time], > 0
};

/// Normalized PSD value at baseband angular frequency omega.
double psd(const SpectrumSpec& spec, double omega);

/// Analytic half-width at half maximum of |g1(tau)|^2 for this line shape.
/// This is the coherence time the rest of the pipeline measures against.
double coherence_hwhm(const SpectrumSpec& spec);

/// Throws SpectrumError unless fwhm is positive and finite.
void validate(const SpectrumSpec& spec);

std::string to_string(LineShape shape);
LineShape line_shape_from_string(const std::string& name);

} // namespace g2sim
