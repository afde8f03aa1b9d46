#include "g2sim/scenarios.hpp"

#include "g2sim/dsp.hpp"
#include "g2sim/errors.hpp"
#include "g2sim/fieldgen.hpp"
#include "g2sim/io.hpp"
#include "g2sim/models.hpp"
#include "g2sim/optics.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace g2sim {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * 3.1415926535897932384626433832795;

bool valid_label(const std::string& label) {
    if (label.empty() || label.size() > 64)
        return false;
    for (const char c : label)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
            return false;
    return true;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.points.empty())
        throw ConfigError("scenario has no points");
    if (!(cfg.sim.dt > 0.0) || !std::isfinite(cfg.sim.dt))
        throw ConfigError("dt must be positive and finite");
    if (cfg.sim.carrier < 0.0)
        throw ConfigError("carrier must be non-negative (0 picks the default)");
    if (!(cfg.analysis.delay_span_tc > 0.0))
        throw ConfigError("delay_span_tc must be positive");
    if (!(cfg.analysis.fringe_sampling >= 4.0))
        throw ConfigError("fringe_sampling must be at least 4");
    if (!(cfg.analysis.plateau_fraction > 0.0) || !(cfg.analysis.plateau_fraction < 0.5))
        throw ConfigError("plateau_fraction must lie in (0, 0.5)");

    std::set<std::string> seen;
    for (const auto& pt : cfg.points) {
        if (!valid_label(pt.label))
            throw ConfigError("point label '" + pt.label +
                              "' must be non-empty [A-Za-z0-9_-] up to 64 chars");
        if (!seen.insert(pt.label).second)
            throw ConfigError("duplicate point label '" + pt.label + "'");
        if (!(pt.mean_intensity > 0.0))
            throw ConfigError("mean_intensity must be positive for '" + pt.label + "'");
        switch (pt.kind) {
        case SourceClass::thermal:
            if (pt.thermal_fraction != 1.0)
                throw ConfigError("thermal point '" + pt.label + "' must have fraction 1");
            validate(pt.spectrum);
            break;
        case SourceClass::coherent:
            if (pt.thermal_fraction != 0.0)
                throw ConfigError("coherent point '" + pt.label + "' must have fraction 0");
            break;
        case SourceClass::mixture:
            if (!(pt.thermal_fraction >= 0.0) || !(pt.thermal_fraction <= 1.0))
                throw ConfigError("thermal_fraction outside [0, 1] for '" + pt.label + "'");
            validate(pt.spectrum);
            break;
        }
    }
}

json spectrum_to_json(const SpectrumSpec& spec) {
    json j;
    j["shape"] = to_string(spec.shape);
    j["fwhm"] = spec.fwhm;
    j["center_detuning"] = spec.center_detuning;
    return j;
}

SpectrumSpec spectrum_from_json(const json& j) {
    reject_unknown_keys(j, {"shape", "fwhm", "center_detuning"}, "spectrum");
    SpectrumSpec spec;
    spec.shape = line_shape_from_string(j.value("shape", std::string("gaussian")));
    spec.fwhm = j.value("fwhm", 0.0);
    spec.center_detuning = j.value("center_detuning", 0.0);
    return spec;
}

/// Golden-ratio stride keeps per-point seeds disjoint for any base seed;
/// point 0 runs on the base seed itself.
std::uint64_t point_seed(std::uint64_t base, std::size_t index) {
    return base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index);
}

FieldEnsemble synthesize_point(const SimulationParams& sim, const ScenarioPoint& pt,
                               double carrier, std::uint64_t seed, std::size_t threads) {
    switch (pt.kind) {
    case SourceClass::thermal: {
        auto fields = gen_thermal(pt.spectrum, sim.n_realizations, sim.n_samples, sim.dt, seed,
                                  carrier, threads);
        if (pt.mean_intensity != 1.0) {
            const double scale = std::sqrt(pt.mean_intensity);
            for (auto& v : fields.data)
                v *= scale;
            fields.mean_intensity = pt.mean_intensity;
        }
        return fields;
    }
    case SourceClass::coherent:
        return gen_coherent(std::sqrt(pt.mean_intensity), pt.coherent_detuning,
                            sim.n_realizations, sim.n_samples, sim.dt, seed, carrier, threads);
    case SourceClass::mixture:
        return gen_mixture(pt.thermal_fraction, pt.spectrum, pt.mean_intensity,
                           sim.n_realizations, sim.n_samples, sim.dt, seed, carrier, threads);
    }
    throw ConfigError("unknown source kind");
}

PointResult make_row(const ScenarioPoint& pt, const G2Curve& curve) {
    PointResult row;
    row.label = pt.label;
    row.method = curve.method;
    row.g2_zero = curve.g2_zero;
    row.g2_zero_se = curve.g2_zero_se;
    // Estimator noise can land just outside the physical range; clamp before
    // inverting so every row reports a fraction.
    row.thermal_fraction = models::mixture_thermal_fraction(std::clamp(curve.g2_zero, 1.0, 2.0));
    try {
        row.coherence_time = dsp::coherence_time(curve);
    } catch (const CoherenceTimeError&) {
        row.coherence_time = std::numeric_limits<double>::quiet_NaN();
    }
    row.expected_g2 = pt.expected_g2;
    row.expected_fraction = pt.expected_fraction;
    return row;
}

std::string trimmed_line(std::istream& in, bool& ok) {
    std::string line;
    ok = static_cast<bool>(std::getline(in, line));
    if (ok && !line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

std::string to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["simulation"] = {{"n_realizations", cfg.sim.n_realizations},
                       {"n_samples", cfg.sim.n_samples},
                       {"dt", cfg.sim.dt},
                       {"carrier", cfg.sim.carrier},
                       {"seed", cfg.sim.seed}};
    j["analysis"] = {{"delay_span_tc", cfg.analysis.delay_span_tc},
                     {"fringe_sampling", cfg.analysis.fringe_sampling},
                     {"plateau_fraction", cfg.analysis.plateau_fraction}};
    j["points"] = json::array();
    for (const auto& pt : cfg.points) {
        json p;
        p["label"] = pt.label;
        p["kind"] = to_string(pt.kind);
        p["thermal_fraction"] = pt.thermal_fraction;
        if (pt.kind != SourceClass::coherent)
            p["spectrum"] = spectrum_to_json(pt.spectrum);
        p["coherent_detuning"] = pt.coherent_detuning;
        p["mean_intensity"] = pt.mean_intensity;
        if (std::isfinite(pt.expected_g2))
            p["expected_g2"] = pt.expected_g2;
        if (std::isfinite(pt.expected_fraction))
            p["expected_fraction"] = pt.expected_fraction;
        j["points"].push_back(std::move(p));
    }
    return j.dump();
}

ScenarioConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        reject_unknown_keys(j, {"name", "simulation", "analysis", "points"}, "config");
        cfg.name = j.value("name", std::string("scenario"));
        if (j.contains("simulation")) {
            const json& s = j["simulation"];
            reject_unknown_keys(s, {"n_realizations", "n_samples", "dt", "carrier", "seed"},
                                "simulation");
            cfg.sim.n_realizations = s.value("n_realizations", cfg.sim.n_realizations);
            cfg.sim.n_samples = s.value("n_samples", cfg.sim.n_samples);
            cfg.sim.dt = s.value("dt", cfg.sim.dt);
            cfg.sim.carrier = s.value("carrier", cfg.sim.carrier);
            cfg.sim.seed = s.value("seed", cfg.sim.seed);
        }
        if (j.contains("analysis")) {
            const json& a = j["analysis"];
            reject_unknown_keys(a, {"delay_span_tc", "fringe_sampling", "plateau_fraction"},
                                "analysis");
            cfg.analysis.delay_span_tc = a.value("delay_span_tc", cfg.analysis.delay_span_tc);
            cfg.analysis.fringe_sampling = a.value("fringe_sampling", cfg.analysis.fringe_sampling);
            cfg.analysis.plateau_fraction =
                a.value("plateau_fraction", cfg.analysis.plateau_fraction);
        }
        if (!j.contains("points") || !j["points"].is_array())
            throw ConfigError("config needs a points array");
        for (const json& p : j["points"]) {
            reject_unknown_keys(p,
                                {"label", "kind", "thermal_fraction", "spectrum",
                                 "coherent_detuning", "mean_intensity", "expected_g2",
                                 "expected_fraction"},
                                "point");
            ScenarioPoint pt;
            pt.label = p.value("label", std::string());
            pt.kind = source_class_from_string(p.value("kind", std::string("mixture")));
            pt.thermal_fraction =
                p.value("thermal_fraction", pt.kind == SourceClass::coherent ? 0.0 : 1.0);
            if (p.contains("spectrum"))
                pt.spectrum = spectrum_from_json(p["spectrum"]);
            pt.coherent_detuning = p.value("coherent_detuning", 0.0);
            pt.mean_intensity = p.value("mean_intensity", 1.0);
            pt.expected_g2 = p.value("expected_g2", pt.expected_g2);
            pt.expected_fraction = p.value("expected_fraction", pt.expected_fraction);
            cfg.points.push_back(std::move(pt));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string config_hash(const ScenarioConfig& cfg) {
    return io::hash_hex(io::fnv1a64(to_json(cfg)));
}

ScenarioReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_root,
                            std::size_t threads) {
    validate_config(cfg);
    const std::string hash = config_hash(cfg);
    const double carrier =
        cfg.sim.carrier > 0.0 ? cfg.sim.carrier : default_carrier(cfg.sim.dt);

    ScenarioReport report;
    report.config_hash = hash;
    report.run_dir = out_root / hash;
    std::error_code ec;
    std::filesystem::create_directories(report.run_dir, ec);
    if (ec)
        throw IoError("cannot create run directory '" + report.run_dir.string() + "'");

    {
        std::ofstream out(report.run_dir / "config.json", std::ios::binary);
        if (!out)
            throw IoError("cannot write config.json");
        out << json::parse(to_json(cfg)).dump(2) << '\n';
    }

    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        const ScenarioPoint& pt = cfg.points[i];
        const FieldEnsemble fields =
            synthesize_point(cfg.sim, pt, carrier, point_seed(cfg.sim.seed, i), threads);

        const auto hwhm = fields.analytic_coherence_hwhm();
        const double half_span = hwhm ? cfg.analysis.delay_span_tc * *hwhm
                                      : 64.0 * kTwoPi / carrier;
        const double record_limit =
            0.9 * cfg.sim.dt * static_cast<double>(cfg.sim.n_samples) / 4.0;
        if (half_span > record_limit) {
            std::ostringstream msg;
            msg << "point '" << pt.label << "' needs a sweep of +-" << half_span
                << " but the record supports +-" << record_limit
                << "; raise n_samples or widen the line";
            throw ConfigError(msg.str());
        }

        const DelaySweep sweep =
            make_symmetric_sweep(carrier, cfg.sim.dt, half_span, cfg.analysis.fringe_sampling);
        const Interferogram gram = tpa_interferogram(fields, sweep, 1.0, threads);
        const G2Curve tpa = dsp::g2_from_interferogram(gram, cfg.analysis.plateau_fraction);
        const G2Curve direct = direct_g2(fields, half_span, threads);

        const std::filesystem::path point_dir = report.run_dir / "points" / pt.label;
        io::write_interferogram(point_dir / "interferogram.tsv", gram, hash);
        io::write_g2_curve(point_dir / "g2_tpa.tsv", tpa, hash);
        io::write_g2_curve(point_dir / "g2_direct.tsv", direct, hash);

        report.rows.push_back(make_row(pt, tpa));
        report.rows.push_back(make_row(pt, direct));
    }

    write_report(report.run_dir / "report.tsv", report);
    return report;
}

void write_report(const std::filesystem::path& path, const ScenarioReport& report) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << "# config_hash\t" << report.config_hash << '\n';
    out << "label\tmethod\tg2_zero\tg2_zero_se\tthermal_fraction\tcoherence_time\t"
           "expected_g2\texpected_fraction\n";
    for (const auto& row : report.rows) {
        out << row.label << '\t' << to_string(row.method) << '\t'
            << io::format_double(row.g2_zero) << '\t' << io::format_double(row.g2_zero_se)
            << '\t' << io::format_double(row.thermal_fraction) << '\t'
            << io::format_double(row.coherence_time) << '\t'
            << io::format_double(row.expected_g2) << '\t'
            << io::format_double(row.expected_fraction) << '\n';
    }
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

ScenarioReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");

    ScenarioReport report;
    report.run_dir = path.parent_path();
    bool ok = false;
    bool have_names = false;
    for (std::string line = trimmed_line(in, ok); ok; line = trimmed_line(in, ok)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const std::vector<std::string> cells =
                split_tabs(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            if (cells.size() == 2 && cells[0] == "config_hash")
                report.config_hash = cells[1];
            continue;
        }
        const std::vector<std::string> cells = split_tabs(line);
        if (!have_names) {
            if (cells.size() != 8 || cells[0] != "label")
                throw IoError("unexpected report columns in '" + path.string() + "'");
            have_names = true;
            continue;
        }
        if (cells.size() != 8)
            throw IoError("ragged report row in '" + path.string() + "'");
        PointResult row;
        row.label = cells[0];
        row.method = g2_method_from_string(cells[1]);
        row.g2_zero = io::parse_double(cells[2]);
        row.g2_zero_se = io::parse_double(cells[3]);
        row.thermal_fraction = io::parse_double(cells[4]);
        row.coherence_time = io::parse_double(cells[5]);
        row.expected_g2 = io::parse_double(cells[6]);
        row.expected_fraction = io::parse_double(cells[7]);
        report.rows.push_back(std::move(row));
    }
    if (!have_names)
        throw IoError("no report rows in '" + path.string() + "'");
    return report;
}

std::vector<std::string> preset_names() {
    return {"demo-thermal", "free-running-sweep", "ec-laser-sweep"};
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    const double carrier0 = default_carrier(1.0);

    if (name == "demo-thermal") {
        cfg.sim.n_realizations = 16;
        cfg.sim.n_samples = 4096;
        cfg.sim.dt = 1.0;
        cfg.sim.seed = 42;
        ScenarioPoint pt;
        pt.label = "thermal";
        pt.kind = SourceClass::thermal;
        pt.thermal_fraction = 1.0;
        pt.spectrum = {LineShape::gaussian, 0.0, 0.1};
        pt.expected_g2 = 2.0;
        pt.expected_fraction = 1.0;
        cfg.points.push_back(std::move(pt));
        return cfg;
    }

    if (name == "free-running-sweep") {
        // Six operating points of a free-running diode cooling from a broad
        // multi-mode state toward single-mode emission: the line narrows from
        // a 15 nm-equivalent width at 976 nm to 3 nm at 970 nm while the
        // thermal share of the power drops from 0.80 to 0.4255.
        cfg.sim.n_realizations = 256;
        cfg.sim.n_samples = 65536;
        cfg.sim.dt = 1.0;
        cfg.sim.seed = 7;
        const double lambda_ref = 976.0;
        for (int i = 0; i < 6; ++i) {
            const double t = static_cast<double>(i) / 5.0;
            const double x = 0.80 + (0.4255 - 0.80) * t;
            const double lambda = 976.0 - 6.0 * t;
            const double fwhm_nm = 15.0 - 12.0 * t;
            ScenarioPoint pt;
            std::ostringstream label;
            label << "x" << static_cast<int>(std::lround(x * 10000.0));
            pt.label = label.str();
            pt.kind = SourceClass::mixture;
            pt.thermal_fraction = x;
            pt.spectrum.shape = LineShape::gaussian;
            pt.spectrum.fwhm = carrier0 * fwhm_nm / lambda;
            pt.spectrum.center_detuning = carrier0 * (lambda_ref - lambda) / lambda_ref;
            pt.expected_g2 = models::mixture_g2(x);
            pt.expected_fraction = x;
            cfg.points.push_back(std::move(pt));
        }
        return cfg;
    }

    if (name == "ec-laser-sweep") {
        // External-cavity laser driven through threshold: the pump sets
        // g2 through the near-threshold intensity statistics, a 2% broadband
        // pedestal rides on top, and the mean power follows the pump.
        cfg.sim.n_realizations = 128;
        cfg.sim.n_samples = 65536;
        cfg.sim.dt = 1.0;
        cfg.sim.seed = 11;
        const double pedestal_fwhm = carrier0 * 5.0 / 976.0;
        for (int i = 0; i < 6; ++i) {
            const double pump = -2.0 + static_cast<double>(i);
            const double x =
                models::with_ase_pedestal(
                    models::mixture_thermal_fraction(std::clamp(models::laser_g2(pump), 1.0, 2.0)),
                    0.02);
            ScenarioPoint pt;
            std::ostringstream label;
            label << "pump" << (pump < 0.0 ? "m" : "p")
                  << static_cast<int>(std::lround(std::abs(pump) * 10.0));
            pt.label = label.str();
            pt.kind = SourceClass::mixture;
            pt.thermal_fraction = x;
            pt.spectrum.shape = LineShape::gaussian;
            pt.spectrum.fwhm = pedestal_fwhm;
            pt.mean_intensity = models::laser_relative_power(pump);
            pt.expected_g2 = models::mixture_g2(x);
            pt.expected_fraction = x;
            cfg.points.push_back(std::move(pt));
        }
        return cfg;
    }

    throw ConfigError("unknown preset '" + name + "'; try one of: demo-thermal, "
                      "free-running-sweep, ec-laser-sweep");
}

CompareResult compare_report(const ScenarioReport& report,
                             const std::filesystem::path& reference_table) {
    std::ifstream in(reference_table, std::ios::binary);
    if (!in)
        throw IoError("cannot open reference table '" + reference_table.string() + "'");

    CompareResult result;
    result.pass = true;
    bool ok = false;
    bool have_names = false;
    for (std::string line = trimmed_line(in, ok); ok; line = trimmed_line(in, ok)) {
        if (line.empty() || line[0] == '#')
            continue;
        const std::vector<std::string> cells = split_tabs(line);
        if (!have_names) {
            const std::vector<std::string> expect = {"label", "g2_zero", "g2_tol",
                                                     "thermal_fraction", "fraction_tol"};
            if (cells != std::vector<std::string>(expect))
                throw CompareError("reference table needs columns label, g2_zero, g2_tol, "
                                   "thermal_fraction, fraction_tol");
            have_names = true;
            continue;
        }
        if (cells.size() != 5)
            throw CompareError("ragged reference row in '" + reference_table.string() + "'");

        const std::string& label = cells[0];
        const PointResult* match = nullptr;
        for (const auto& row : report.rows)
            if (row.label == label && row.method == G2Method::tpa_filtered)
                match = &row;
        if (!match)
            throw CompareError("report has no tpa_filtered row for label '" + label + "'");

        CompareRow g2_row;
        g2_row.label = label;
        g2_row.quantity = "g2_zero";
        g2_row.measured = match->g2_zero;
        g2_row.reference = io::parse_double(cells[1]);
        g2_row.tolerance = io::parse_double(cells[2]);
        g2_row.deviation = g2_row.measured - g2_row.reference;
        g2_row.pass = std::abs(g2_row.deviation) <= g2_row.tolerance;

        CompareRow frac_row;
        frac_row.label = label;
        frac_row.quantity = "thermal_fraction";
        frac_row.measured = match->thermal_fraction;
        frac_row.reference = io::parse_double(cells[3]);
        frac_row.tolerance = io::parse_double(cells[4]);
        frac_row.deviation = frac_row.measured - frac_row.reference;
        frac_row.pass = std::abs(frac_row.deviation) <= frac_row.tolerance;

        result.pass = result.pass && g2_row.pass && frac_row.pass;
        result.rows.push_back(std::move(g2_row));
        result.rows.push_back(std::move(frac_row));
    }
    if (!have_names)
        throw CompareError("reference table '" + reference_table.string() + "' is empty");
    return result;
}

} // namespace g2sim
