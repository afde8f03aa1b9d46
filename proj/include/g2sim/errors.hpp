// Exception hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace g2sim {

/// Base class for all errors raised by this library.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Spectrum cannot be represented on the requested grid (too narrow or too wide).
struct SpectrumError : SimError {
    using SimError::SimError;
};

/// Delay sweep incompatible with the record (overlap too short, bad grid).
struct DelayError : SimError {
    using SimError::SimError;
};

/// Baseband and fringe bands are not separable for the requested filter.
struct BandSeparationError : SimError {
    using SimError::SimError;
};

/// No flat plateau found in the filtered interferogram.
struct PlateauError : SimError {
    using SimError::SimError;
};

/// Coherence time undefined (curve too flat or never decays to half).
struct CoherenceTimeError : SimError {
    using SimError::SimError;
};

/// Argument outside a model's mathematical domain.
struct ModelDomainError : SimError {
    using SimError::SimError;
};

/// Malformed or inconsistent scenario configuration.
struct ConfigError : SimError {
    using SimError::SimError;
};

/// File could not be read, written, or parsed.
struct IoError : SimError {
    using SimError::SimError;
};

/// Report comparison impossible (label mismatch and the like).
struct CompareError : SimError {
    using SimError::SimError;
};

} // namespace g2sim
