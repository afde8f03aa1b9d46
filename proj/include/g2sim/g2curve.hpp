// Normalized second-order coherence curve with uncertainty estimates.
#pragma once

#include <string>
#include <vector>

namespace g2sim {

enum class G2Method { direct, tpa_filtered };

std::string to_string(G2Method method);
G2Method g2_method_from_string(const std::string& name);

struct G2Curve {
    std::vector<double> lags;      ///< delay values [time units]
    std::vector<double> g2;        ///< g2(tau) estimates, one per lag
    std::vector<double> std_error; ///< per-lag standard error (jackknife)
    double g2_zero = 0.0;          ///< value at the zero-delay bin
    double g2_zero_se = 0.0;
    G2Method method = G2Method::direct;
};

} // namespace g2sim
