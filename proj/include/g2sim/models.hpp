#pragma once

#include "g2sim/field_ensemble.hpp"

#include <cstddef>

namespace g2sim::models {

/// g2(0) of a thermal + coherent blend carrying thermal power fraction x:
/// g2 = 1 + 2x - x^2. Throws ModelDomainError outside x in [0, 1].
double mixture_g2(double thermal_fraction);

/// Inverse of mixture_g2 on its monotone branch: x = 1 - sqrt(2 - g2).
/// Throws ModelDomainError outside g2 in [1, 2].
double mixture_thermal_fraction(double g2_zero);

/// Maps the dimensionless pump knob to the distribution parameter of the
/// near-threshold laser intensity density W(I) ~ exp(-(I - a)^2 / 4), I >= 0.
/// The factor pushes pump = +-1 deep enough into the coherent / thermal
/// limits that g2 sits within 1e-3 of 1 and 2 there.
inline constexpr double kPumpScale = 10.0;

/// g2(0) of the near-threshold laser at the given pump, by adaptive
/// quadrature over W(I). Exactly pi/2 at pump = 0; tends to 2 far below
/// threshold and 1 far above.
double laser_g2(double pump);

/// Same quantity through the closed-form moments (erf expression). Kept as an
/// independent cross-check of the quadrature path.
double laser_g2_closed_form(double pump);

/// Mean intensity at the given pump relative to threshold (pump = 0).
double laser_relative_power(double pump);

/// Thermal fraction after stacking a broadband pedestal of relative weight
/// ase_fraction on top of a source already carrying base_fraction:
/// x' = x + eps (1 - x). Throws ModelDomainError outside [0, 1] inputs.
double with_ase_pedestal(double base_fraction, double ase_fraction);

/// g2(0) after the pedestal, i.e. mixture_g2(with_ase_pedestal(...)) with the
/// base fraction recovered from base_g2.
double ase_g2(double base_g2, double ase_fraction);

/// Largest |g2(tau) - 1 - |g1(tau)|^2| over lags up to max_lag_time. Only
/// meaningful for sources with thermal statistics; refuses anything else.
double siegert_max_residual(const FieldEnsemble& fields, double max_lag_time,
                            std::size_t threads = 0);

} // namespace g2sim::models
