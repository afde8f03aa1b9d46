// Synthesis of thermal, coherent, and mixed field ensembles.
#pragma once

#include "g2sim/field_ensemble.hpp"
#include "g2sim/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace g2sim {

/// Default scaled carrier for a grid step: 0.4 * pi / dt, comfortably under
/// Nyquist and an integer number of delay-grid samples per fringe.
double default_carrier(double dt);

/// Chaotic field with the requested PSD: independent circular Gaussian
/// spectral amplitudes weighted by sqrt(PSD), inverse FFT per realization.
/// Unit mean intensity. Throws SpectrumError when the line is not resolvable
/// on the grid (needs fwhm >= 16 frequency bins and fwhm <= carrier / 4).
FieldEnsemble gen_thermal(const SpectrumSpec& spec, std::size_t n_realizations,
                          std::size_t n_samples, double dt, std::uint64_t seed,
                          double carrier = 0.0, std::size_t threads = 0);

/// Constant-modulus field amplitude * exp(i * (detuning * t + phase)), with an
/// independent random global phase per realization.
FieldEnsemble gen_coherent(double amplitude, double detuning, std::size_t n_realizations,
                           std::size_t n_samples, double dt, std::uint64_t seed,
                           double carrier = 0.0, std::size_t threads = 0);

/// Coherent component of mean intensity (1-x)*total plus an independent
/// thermal component of mean intensity x*total, summed per sample. The
/// coherent line sits at the spectrum's center detuning.
FieldEnsemble gen_mixture(double thermal_fraction, const SpectrumSpec& spec,
                          double total_mean_intensity, std::size_t n_realizations,
                          std::size_t n_samples, double dt, std::uint64_t seed,
                          double carrier = 0.0, std::size_t threads = 0);

/// Ensemble-averaged periodogram: mean |FFT(E)|^2 per frequency bin, in FFT
/// bin order (use fft::bin_frequency for the axis).
std::vector<double> ensemble_periodogram(const FieldEnsemble& fields, std::size_t threads = 0);

struct IntensityMoments {
    double mean = 0.0;
    double mean_sq = 0.0;
    double g2_zero = 0.0; ///< mean_sq / mean^2
};

/// Sample moments of |E|^2 over the whole ensemble.
IntensityMoments intensity_moments(const FieldEnsemble& fields);

} // namespace g2sim
