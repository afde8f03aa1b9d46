// Ensemble of complex baseband field realizations on a common time grid.
#pragma once

#include "g2sim/spectrum.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2sim {

enum class SourceClass { thermal, coherent, mixture };

/// Provenance of an ensemble: what produced it and with which statistics.
struct SourceInfo {
    SourceClass kind = SourceClass::thermal;
    double thermal_fraction = 1.0;        ///< 1 for thermal, 0 for coherent
    std::optional<SpectrumSpec> spectrum; ///< absent for purely coherent fields
    double coherent_detuning = 0.0;       ///< [rad/time], coherent component only
    std::uint64_t seed = 0;
};

std::string to_string(SourceClass kind);
SourceClass source_class_from_string(const std::string& name);

/// Fields are stored as baseband envelopes E(t); the physical field is
/// E(t) * exp(i * carrier * t). Realizations are row-major and equal length.
struct FieldEnsemble {
    std::size_t n_realizations = 0;
    std::size_t n_samples = 0;
    double dt = 0.0;
    double carrier = 0.0;        ///< scaled carrier [rad/time], carrier * dt < pi
    double mean_intensity = 0.0; ///< target ensemble mean of |E|^2
    SourceInfo source;
    std::vector<std::complex<double>> data;

    const std::complex<double>* realization(std::size_t r) const {
        return data.data() + r * n_samples;
    }
    std::complex<double>* realization(std::size_t r) {
        return data.data() + r * n_samples;
    }

    /// True for sources obeying thermal (circular Gaussian) statistics.
    bool thermal_statistics() const {
        return source.kind == SourceClass::thermal ||
               (source.kind == SourceClass::mixture && source.thermal_fraction == 1.0);
    }

    /// Analytic half width at half maximum of g2(tau) - 1, when defined.
    std::optional<double> analytic_coherence_hwhm() const {
        if (!source.spectrum || source.thermal_fraction <= 0.0)
            return std::nullopt;
        return coherence_hwhm(*source.spectrum);
    }
};

} // namespace g2sim
