// Two-photon-absorption Michelson interferometry on field ensembles.
#pragma once

#include "g2sim/field_ensemble.hpp"
#include "g2sim/g2curve.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace g2sim {

/// Delay axis for an interferogram scan.
struct DelaySweep {
    std::vector<double> delays;   ///< strictly increasing [time units]
    double fringe_sampling = 5.0; ///< samples per carrier fringe, >= 4
};

/// Symmetric sweep covering [-half_span, +half_span] with fringe_sampling
/// points per carrier fringe. The step snaps to an integer number of grid
/// samples when it lands within 1e-9 of one, which keeps delays exact.
DelaySweep make_symmetric_sweep(double carrier, double dt, double half_span,
                                double fringe_sampling = 5.0);

struct InterferogramMeta {
    SourceInfo source;
    std::size_t n_realizations = 0;
    std::size_t n_samples = 0;
    double dt = 0.0;
    double mean_intensity = 0.0; ///< measured ensemble mean of |E|^2
    double self_level = 0.0;     ///< (1 + arm_ratio^4) * mean_intensity^2
    double arm_ratio = 1.0;
};

/// Fringe-resolved TPA interferogram. `signal` is the ensemble mean;
/// `per_realization` (row-major, n_realizations x delays, may be empty when
/// loaded from disk) feeds jackknife error propagation downstream.
struct Interferogram {
    std::vector<double> delays;
    std::vector<double> signal;
    double carrier = 0.0;
    InterferogramMeta meta;
    std::vector<double> per_realization;
};

/// Simulates the detected two-photon signal of a Michelson interferometer
/// with ideal (instantaneous square-law-squared) detection:
///
///   S(tau) = <I1>^2 + <I2>^2 + 4 <I1(t) I2(t-tau)>
///          + 4 Re[ e^{i c tau} <(I1(t) + I2(t-tau)) E(t) conj(E(t-tau))> r ]
///          + 2 Re[ e^{2 i c tau} <E(t)^2 conj(E(t-tau))^2> ] r^2
///
/// with I2 terms scaled by the arm amplitude ratio r. The two arm
/// self-contributions enter at their mean level <I>^2, which makes the
/// fringe-averaged baseband proportional to 1 + 2 g2(tau); chaotic light
/// therefore reads 10/6 between zero delay and the plateau and coherent
/// light reads 8x the two-arm self level at the central fringe.
///
/// Time averages run over the overlap of the shifted and unshifted records
/// (no periodic wrap). Fractional-sample delays are realized by a
/// frequency-domain phase ramp on the envelope plus the analytic carrier
/// phase; a small guard band at the record edges is excluded for them.
Interferogram tpa_interferogram(const FieldEnsemble& fields, const DelaySweep& sweep,
                                double arm_ratio = 1.0, std::size_t threads = 0);

/// Intensity autocorrelation estimated directly from the stored fields:
/// g2(s) = <I(t) I(t-s)> / <I>^2 on integer sample lags up to max_lag_time.
/// Standard errors come from leave-one-out resampling over realizations.
G2Curve direct_g2(const FieldEnsemble& fields, double max_lag_time, std::size_t threads = 0);

/// Ensemble-averaged field correlations (no error bars): normalized g1 and
/// g2 on integer lags. Used by the Siegert validation.
struct FieldCorrelations {
    std::vector<double> lags;
    std::vector<double> g2;
    std::vector<std::complex<double>> g1;
};
FieldCorrelations field_correlations(const FieldEnsemble& fields, double max_lag_time,
                                     std::size_t threads = 0);

/// Fractional-sample delay of a record by frequency-domain phase ramp.
/// Exposed for the brute-force oracles in the test suite.
std::vector<std::complex<double>> fractional_shift(const std::complex<double>* src,
                                                   std::size_t n, double shift_samples);

} // namespace g2sim
