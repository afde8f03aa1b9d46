// Command-line front end: synthesize ensembles, run interferograms, extract
// g2, evaluate models, and drive full scenario sweeps.
#include "g2sim/dsp.hpp"
#include "g2sim/errors.hpp"
#include "g2sim/fft.hpp"
#include "g2sim/fieldgen.hpp"
#include "g2sim/io.hpp"
#include "g2sim/models.hpp"
#include "g2sim/optics.hpp"
#include "g2sim/scenarios.hpp"
#include "g2sim/version.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace g2sim;

constexpr double kTwoPi = 2.0 * 3.1415926535897932384626433832795;

// Shared synthesis flags for `synth` and `interfere`.
struct SourceArgs {
    std::string kind = "thermal";
    double fraction = 1.0;
    std::string shape = "gaussian";
    double fwhm = 0.1;
    double detuning = 0.0;
    double coherent_detuning = 0.0;
    double mean = 1.0;
    std::size_t n_realizations = 32;
    std::size_t n_samples = 16384;
    double dt = 1.0;
    double carrier = 0.0;
    std::uint64_t seed = 1;
};

void add_source_flags(CLI::App* cmd, SourceArgs& a) {
    cmd->add_option("--kind", a.kind, "Source class: thermal, coherent, or mixture")
        ->check(CLI::IsMember({"thermal", "coherent", "mixture"}));
    cmd->add_option("--fraction", a.fraction, "Thermal share of the mean power (mixture)");
    cmd->add_option("--shape", a.shape, "Line shape of the thermal component")
        ->check(CLI::IsMember({"gaussian", "lorentzian"}));
    cmd->add_option("--fwhm", a.fwhm, "Line width (fwhm) of the thermal component [rad/time]");
    cmd->add_option("--detuning", a.detuning, "Line center offset from the carrier [rad/time]");
    cmd->add_option("--coherent-detuning", a.coherent_detuning,
                    "Coherent line offset for a pure coherent source [rad/time]");
    cmd->add_option("--mean", a.mean, "Mean intensity");
    cmd->add_option("--n-realizations", a.n_realizations, "Ensemble size");
    cmd->add_option("--n-samples", a.n_samples, "Samples per realization (power of two)");
    cmd->add_option("--dt", a.dt, "Time step");
    cmd->add_option("--carrier", a.carrier, "Carrier [rad/time]; 0 picks the grid default");
    cmd->add_option("--seed", a.seed, "Random seed");
}

FieldEnsemble synthesize(const SourceArgs& a, std::size_t threads) {
    SpectrumSpec spec;
    spec.shape = line_shape_from_string(a.shape);
    spec.fwhm = a.fwhm;
    spec.center_detuning = a.detuning;
    if (a.kind == "thermal") {
        auto fields = gen_thermal(spec, a.n_realizations, a.n_samples, a.dt, a.seed, a.carrier,
                                  threads);
        if (a.mean != 1.0) {
            const double scale = std::sqrt(a.mean);
            for (auto& v : fields.data)
                v *= scale;
            fields.mean_intensity = a.mean;
        }
        return fields;
    }
    if (a.kind == "coherent")
        return gen_coherent(std::sqrt(a.mean), a.coherent_detuning, a.n_realizations,
                            a.n_samples, a.dt, a.seed, a.carrier, threads);
    return gen_mixture(a.fraction, spec, a.mean, a.n_realizations, a.n_samples, a.dt, a.seed,
                       a.carrier, threads);
}

std::string adhoc_hash(const SourceArgs& a) {
    std::string key = a.kind + "|" + a.shape;
    for (const double v : {a.fraction, a.fwhm, a.detuning, a.coherent_detuning, a.mean, a.dt,
                           a.carrier, static_cast<double>(a.n_realizations),
                           static_cast<double>(a.n_samples), static_cast<double>(a.seed)})
        key += "|" + io::format_double(v);
    return io::hash_hex(io::fnv1a64(key));
}

void print_records(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& format) {
    if (format == "records") {
        for (const auto& [k, v] : kv)
            std::cout << k << '\t' << v << '\n';
        return;
    }
    for (std::size_t i = 0; i < kv.size(); ++i)
        std::cout << (i ? "\t" : "") << kv[i].first;
    std::cout << '\n';
    for (std::size_t i = 0; i < kv.size(); ++i)
        std::cout << (i ? "\t" : "") << kv[i].second;
    std::cout << '\n';
}

void print_report_rows(const ScenarioReport& report) {
    std::cout << "label\tmethod\tg2_zero\tg2_zero_se\tthermal_fraction\tcoherence_time\t"
                 "expected_g2\texpected_fraction\n";
    for (const auto& row : report.rows)
        std::cout << row.label << '\t' << to_string(row.method) << '\t'
                  << io::format_double(row.g2_zero) << '\t'
                  << io::format_double(row.g2_zero_se) << '\t'
                  << io::format_double(row.thermal_fraction) << '\t'
                  << io::format_double(row.coherence_time) << '\t'
                  << io::format_double(row.expected_g2) << '\t'
                  << io::format_double(row.expected_fraction) << '\n';
}

double sweep_half_span(const FieldEnsemble& fields, double span_tc) {
    if (const auto hwhm = fields.analytic_coherence_hwhm())
        return span_tc * *hwhm;
    return 64.0 * kTwoPi / fields.carrier;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Statistical-optics simulator: g2(tau) from two-photon interferometry"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string format = "columns";
    app.add_option("--format", format, "Scalar output layout: columns or records")
        ->check(CLI::IsMember({"columns", "records"}));
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    // synth: generate an ensemble, report sample moments.
    auto* synth = app.add_subcommand("synth", "Synthesize a field ensemble");
    SourceArgs synth_args;
    add_source_flags(synth, synth_args);
    std::string synth_periodogram;
    synth->add_option("--periodogram", synth_periodogram,
                      "Write the ensemble periodogram to this file");

    // interfere: scan the interferometer over delay.
    auto* interfere = app.add_subcommand("interfere", "Record a two-photon interferogram");
    SourceArgs intf_args;
    add_source_flags(interfere, intf_args);
    double intf_span_tc = 5.0;
    double intf_half_span = 0.0;
    double intf_fringe_sampling = 5.0;
    double intf_arm_ratio = 1.0;
    std::string intf_out;
    interfere->add_option("--span-tc", intf_span_tc,
                          "Sweep half-span in coherence times (thermal part)");
    interfere->add_option("--half-span", intf_half_span,
                          "Sweep half-span in time units (overrides --span-tc)");
    interfere->add_option("--fringe-sampling", intf_fringe_sampling,
                          "Delay points per carrier fringe");
    interfere->add_option("--arm-ratio", intf_arm_ratio, "Amplitude ratio of the delayed arm");
    interfere->add_option("--out", intf_out, "Write the interferogram to this file");

    // analyze: extract g2 from a stored interferogram.
    auto* analyze = app.add_subcommand("analyze", "Extract g2 from an interferogram file");
    std::string ana_input;
    std::string ana_out;
    double ana_plateau_fraction = 0.2;
    analyze->add_option("--input", ana_input, "Interferogram file")->required();
    analyze->add_option("--out", ana_out, "Write the extracted g2 curve to this file");
    analyze->add_option("--plateau-fraction", ana_plateau_fraction,
                        "Share of each sweep end used as plateau");

    // model: closed-form reference values.
    auto* model = app.add_subcommand("model", "Evaluate the analytic models");
    double model_fraction = std::numeric_limits<double>::quiet_NaN();
    double model_g2 = std::numeric_limits<double>::quiet_NaN();
    double model_pump = std::numeric_limits<double>::quiet_NaN();
    double model_power_pump = std::numeric_limits<double>::quiet_NaN();
    double model_ase = std::numeric_limits<double>::quiet_NaN();
    model->add_option("--mixture-g2", model_fraction,
                      "g2(0) of a blend with this thermal fraction");
    model->add_option("--mixture-fraction", model_g2, "Thermal fraction behind this g2(0)");
    model->add_option("--laser-g2", model_pump, "g2(0) of the near-threshold laser at this pump");
    model->add_option("--laser-power", model_power_pump,
                      "Mean power relative to threshold at this pump");
    model->add_option("--ase-fraction", model_ase,
                      "Broadband pedestal share stacked on --mixture-fraction's g2");

    // run: full scenario sweep.
    auto* run = app.add_subcommand("run", "Run a scenario sweep");
    std::string run_preset;
    std::string run_config;
    std::string run_out;
    std::uint64_t run_seed = 0;
    run->add_option("--preset", run_preset, "Built-in scenario name");
    run->add_option("--config", run_config, "Scenario config JSON file");
    run->add_option("--out", run_out, "Run root (default $G2SIM_OUT_ROOT or ./runs)");
    auto* run_seed_opt = run->add_option("--seed", run_seed, "Override the scenario seed");

    // compare: measured report against a reference table.
    auto* compare = app.add_subcommand("compare", "Check a run report against references");
    std::string cmp_report;
    std::string cmp_reference;
    compare->add_option("--report", cmp_report, "report.tsv from a run")->required();
    compare->add_option("--reference", cmp_reference, "Reference expectations table")->required();

    auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (presets_cmd->parsed()) {
        for (const auto& name : preset_names())
            std::cout << name << '\t' << preset(name).points.size() << " points\n";
        return 0;
    }

    if (synth->parsed()) {
        const FieldEnsemble fields = synthesize(synth_args, threads);
        const IntensityMoments moments = intensity_moments(fields);
        if (!synth_periodogram.empty()) {
            const std::vector<double> power = ensemble_periodogram(fields, threads);
            const std::size_t n = power.size();
            io::Table table;
            table.header.emplace_back("config_hash", adhoc_hash(synth_args));
            table.header.emplace_back("source", to_string(fields.source.kind));
            table.column_names = {"omega", "power"};
            table.columns.assign(2, {});
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t k = (i + n / 2) % n; // ascending frequency order
                table.columns[0].push_back(fft::bin_frequency(k, n, fields.dt));
                table.columns[1].push_back(power[k]);
            }
            io::write_table(std::filesystem::path(synth_periodogram), table);
        }
        print_records({{"mean_intensity", io::format_double(moments.mean)},
                       {"g2_zero_sample", io::format_double(moments.g2_zero)}},
                      format);
        return 0;
    }

    if (interfere->parsed()) {
        const FieldEnsemble fields = synthesize(intf_args, threads);
        const double half_span =
            intf_half_span > 0.0 ? intf_half_span : sweep_half_span(fields, intf_span_tc);
        const DelaySweep sweep = make_symmetric_sweep(fields.carrier, fields.dt, half_span,
                                                      intf_fringe_sampling);
        const Interferogram gram = tpa_interferogram(fields, sweep, intf_arm_ratio, threads);
        if (!intf_out.empty()) {
            io::write_interferogram(std::filesystem::path(intf_out), gram,
                                    adhoc_hash(intf_args));
            print_records({{"delays", std::to_string(gram.delays.size())},
                           {"self_level", io::format_double(gram.meta.self_level)},
                           {"out", intf_out}},
                          format);
        } else {
            io::Table table;
            table.header.emplace_back("config_hash", adhoc_hash(intf_args));
            table.header.emplace_back("carrier", io::format_double(gram.carrier));
            table.column_names = {"delay", "signal"};
            table.columns = {gram.delays, gram.signal};
            io::write_table(std::cout, table);
        }
        return 0;
    }

    if (analyze->parsed()) {
        const Interferogram gram = io::read_interferogram(ana_input);
        const io::Table raw = io::read_table(ana_input);
        const std::string* hash = raw.header_value("config_hash");
        const G2Curve curve = dsp::g2_from_interferogram(gram, ana_plateau_fraction);
        double coherence = std::numeric_limits<double>::quiet_NaN();
        try {
            coherence = dsp::coherence_time(curve);
        } catch (const CoherenceTimeError&) {
        }
        const double fraction =
            models::mixture_thermal_fraction(std::clamp(curve.g2_zero, 1.0, 2.0));
        if (!ana_out.empty())
            io::write_g2_curve(std::filesystem::path(ana_out), curve,
                               hash ? *hash : "0000000000000000");
        print_records({{"g2_zero", io::format_double(curve.g2_zero)},
                       {"g2_zero_se", io::format_double(curve.g2_zero_se)},
                       {"thermal_fraction", io::format_double(fraction)},
                       {"coherence_time", io::format_double(coherence)}},
                      format);
        return 0;
    }

    if (model->parsed()) {
        std::vector<std::pair<std::string, std::string>> kv;
        if (std::isfinite(model_fraction))
            kv.emplace_back("g2_zero", io::format_double(models::mixture_g2(model_fraction)));
        if (std::isfinite(model_g2)) {
            if (std::isfinite(model_ase))
                kv.emplace_back("g2_zero_with_ase",
                                io::format_double(models::ase_g2(model_g2, model_ase)));
            kv.emplace_back("thermal_fraction",
                            io::format_double(models::mixture_thermal_fraction(model_g2)));
        }
        if (std::isfinite(model_pump))
            kv.emplace_back("laser_g2", io::format_double(models::laser_g2(model_pump)));
        if (std::isfinite(model_power_pump))
            kv.emplace_back("laser_relative_power",
                            io::format_double(models::laser_relative_power(model_power_pump)));
        if (kv.empty()) {
            std::cerr << "g2sim: error: model needs one of --mixture-g2, --mixture-fraction, "
                         "--laser-g2, --laser-power\n";
            return 2;
        }
        print_records(kv, format);
        return 0;
    }

    if (run->parsed()) {
        if (run_preset.empty() == run_config.empty()) {
            std::cerr << "g2sim: error: run needs exactly one of --preset or --config\n";
            return 2;
        }
        ScenarioConfig cfg = run_preset.empty() ? load_config(run_config) : preset(run_preset);
        if (run_seed_opt->count() > 0)
            cfg.sim.seed = run_seed;
        std::filesystem::path out_root;
        if (!run_out.empty()) {
            out_root = run_out;
        } else if (const char* env = std::getenv("G2SIM_OUT_ROOT")) {
            out_root = env;
        } else {
            out_root = "runs";
        }
        const ScenarioReport report = run_scenario(cfg, out_root, threads);
        print_report_rows(report);
        std::cout << "run_dir\t" << report.run_dir.string() << '\n';
        return 0;
    }

    if (compare->parsed()) {
        const ScenarioReport report = read_report(cmp_report);
        const CompareResult result = compare_report(report, cmp_reference);
        std::cout << "label\tquantity\tmeasured\treference\tdeviation\ttolerance\tverdict\n";
        for (const auto& row : result.rows)
            std::cout << row.label << '\t' << row.quantity << '\t'
                      << io::format_double(row.measured) << '\t'
                      << io::format_double(row.reference) << '\t'
                      << io::format_double(row.deviation) << '\t'
                      << io::format_double(row.tolerance) << '\t'
                      << (row.pass ? "PASS" : "FAIL") << '\n';
        std::cout << "verdict\t" << (result.pass ? "PASS" : "FAIL") << '\n';
        return result.pass ? 0 : 1;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "g2sim: error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "g2sim: error: " << e.what() << '\n';
        return 2;
    } catch (const SimError& e) {
        std::cerr << "g2sim: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "g2sim: error: " << e.what() << '\n';
        return 2;
    }
}
