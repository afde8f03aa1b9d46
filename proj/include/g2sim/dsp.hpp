#pragma once

#include "g2sim/g2curve.hpp"
#include "g2sim/optics.hpp"

#include <vector>

namespace g2sim::dsp {

/// Zero-phase raised-cosine lowpass on a uniform delay grid. Passes
/// |omega| <= 7/16 carrier, rolls off to zero by 9/16 carrier, so the fringe
/// terms at carrier and 2*carrier are rejected while the intensity envelope
/// passes untouched. Throws BandSeparationError when more than 1% of the
/// non-DC energy sits inside the transition band, since the split into
/// envelope and fringes is then ambiguous.
std::vector<double> lowpass_baseband(const std::vector<double>& delays,
                                     const std::vector<double>& signal, double carrier);

/// Extract g2(tau) from a two-photon interferogram: lowpass to the fringe-free
/// envelope F, estimate the uncorrelated plateau B from the outer
/// plateau_fraction of each end of the sweep, and map g2 = (3 F / B - 1) / 2.
/// Standard errors are leave-one-realization-out when per-realization traces
/// are present, otherwise a plateau-scatter proxy. Throws PlateauError when
/// the plateau is too short, non-positive, or visibly sloped.
G2Curve g2_from_interferogram(const Interferogram& gram, double plateau_fraction = 0.2);

/// Half width at half maximum of g2 - 1, scanning outward from zero delay
/// with linear interpolation at the crossing. Throws CoherenceTimeError when
/// the zero-delay value leaves no peak to measure (g2(0) <= 1.05) or the
/// curve never decays to half height inside the sweep.
double coherence_time(const G2Curve& curve);

} // namespace g2sim::dsp
