#pragma once

#include "g2sim/field_ensemble.hpp"
#include "g2sim/g2curve.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace g2sim {

/// One source on a sweep: the light to synthesize plus optional bookkeeping
/// targets carried into the run report for later comparison.
struct ScenarioPoint {
    std::string label; ///< [A-Za-z0-9_-]+, unique within a scenario
    SourceClass kind = SourceClass::mixture;
    double thermal_fraction = 1.0; ///< thermal share of the mean power
    SpectrumSpec spectrum;         ///< thermal component; ignored when coherent
    double coherent_detuning = 0.0;
    double mean_intensity = 1.0;
    double expected_g2 = std::numeric_limits<double>::quiet_NaN();
    double expected_fraction = std::numeric_limits<double>::quiet_NaN();
};

struct SimulationParams {
    std::size_t n_realizations = 64;
    std::size_t n_samples = 16384;
    double dt = 1.0;
    double carrier = 0.0; ///< 0 picks the default grid carrier
    std::uint64_t seed = 1;
};

struct AnalysisParams {
    double delay_span_tc = 5.0;    ///< sweep half-span in coherence times
    double fringe_sampling = 5.0;  ///< delay points per carrier fringe
    double plateau_fraction = 0.2; ///< share of each sweep end used as plateau
};

struct ScenarioConfig {
    std::string name;
    SimulationParams sim;
    AnalysisParams analysis;
    std::vector<ScenarioPoint> points;
};

/// Canonical JSON (sorted keys, fixed formatting); equal configs serialize to
/// equal bytes, so the hash below is content-addressed.
std::string to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string config_hash(const ScenarioConfig& cfg); ///< 16 hex digits

struct PointResult {
    std::string label;
    G2Method method = G2Method::direct;
    double g2_zero = 0.0;
    double g2_zero_se = 0.0;
    double thermal_fraction = 0.0; ///< from g2_zero, clamped into [1, 2] first
    double coherence_time = std::numeric_limits<double>::quiet_NaN();
    double expected_g2 = std::numeric_limits<double>::quiet_NaN();
    double expected_fraction = std::numeric_limits<double>::quiet_NaN();
};

struct ScenarioReport {
    std::string config_hash;
    std::filesystem::path run_dir;
    std::vector<PointResult> rows; ///< two rows per point, one per method
};

/// Runs every point: synthesize, interfere, filter, extract, cross-check with
/// the direct estimator. Writes <out_root>/<hash>/{config.json, report.tsv,
/// points/<label>/*.tsv}; reruns of the same config rewrite identical bytes.
ScenarioReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_root,
                            std::size_t threads = 0);

void write_report(const std::filesystem::path& path, const ScenarioReport& report);
ScenarioReport read_report(const std::filesystem::path& path);

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

struct CompareRow {
    std::string label;
    std::string quantity; ///< "g2_zero" or "thermal_fraction"
    double measured = 0.0;
    double reference = 0.0;
    double deviation = 0.0; ///< measured - reference, signed
    double tolerance = 0.0;
    bool pass = false;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    bool pass = false;
};

/// Checks the tpa_filtered rows of a report against a reference table with
/// columns label, g2_zero, g2_tol, thermal_fraction, fraction_tol. Throws
/// CompareError when a reference label is missing from the report.
CompareResult compare_report(const ScenarioReport& report,
                             const std::filesystem::path& reference_table);

} // namespace g2sim
