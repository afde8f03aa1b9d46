#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "g2sim/errors.hpp"
#include "g2sim/models.hpp"
#include "g2sim/scenarios.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace g2sim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("g2sim_") + tag + "_" +
                                            std::to_string(static_cast<unsigned>(::getpid())));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("configs serialize canonically and hash on content") {
    ScenarioConfig cfg = preset("demo-thermal");
    const std::string once = to_json(cfg);
    const ScenarioConfig back = config_from_json(once);
    CHECK(to_json(back) == once);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_hash(cfg).size() == 16);

    ScenarioConfig reseeded = cfg;
    reseeded.sim.seed += 1;
    CHECK(config_hash(reseeded) != config_hash(cfg));
}

TEST_CASE("config parsing rejects malformed input") {
    const ScenarioConfig cfg = preset("demo-thermal");

    auto j = nlohmann::json::parse(to_json(cfg));
    j["sim"]["frobnicate"] = 1;
    CHECK_THROWS_AS(config_from_json(j.dump()), ConfigError);

    auto bad_label = nlohmann::json::parse(to_json(cfg));
    bad_label["points"][0]["label"] = "no spaces allowed";
    CHECK_THROWS_AS(config_from_json(bad_label.dump()), ConfigError);

    auto dupes = nlohmann::json::parse(to_json(cfg));
    dupes["points"].push_back(dupes["points"][0]);
    CHECK_THROWS_AS(config_from_json(dupes.dump()), ConfigError);

    auto coherent = nlohmann::json::parse(to_json(cfg));
    coherent["points"][0]["kind"] = "coherent";
    coherent["points"][0]["thermal_fraction"] = 0.5;
    CHECK_THROWS_AS(config_from_json(coherent.dump()), ConfigError);

    CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(preset("no-such-preset"), ConfigError);
}

TEST_CASE("preset catalogue is non-empty and well-formed") {
    const auto names = preset_names();
    REQUIRE(!names.empty());
    CHECK(std::find(names.begin(), names.end(), "demo-thermal") != names.end());
    CHECK(std::find(names.begin(), names.end(), "free-running-sweep") != names.end());
    CHECK(std::find(names.begin(), names.end(), "ec-laser-sweep") != names.end());
    for (const auto& name : names) {
        const ScenarioConfig cfg = preset(name);
        CHECK(cfg.name == name);
        CHECK(!cfg.points.empty());
    }
}

TEST_CASE("demo scenario runs end to end, deterministically") {
    TempDir tmp("scen");
    const ScenarioConfig cfg = preset("demo-thermal");

    const ScenarioReport report = run_scenario(cfg, tmp.path);
    CHECK(report.config_hash == config_hash(cfg));
    CHECK(report.run_dir == tmp.path / report.config_hash);
    CHECK(fs::exists(report.run_dir / "config.json"));
    CHECK(fs::exists(report.run_dir / "report.tsv"));
    const fs::path point_dir = report.run_dir / "points" / "thermal";
    CHECK(fs::exists(point_dir / "interferogram.tsv"));
    CHECK(fs::exists(point_dir / "g2_tpa.tsv"));
    CHECK(fs::exists(point_dir / "g2_direct.tsv"));

    REQUIRE(report.rows.size() == 2); // one row per method
    const auto tpa = std::find_if(report.rows.begin(), report.rows.end(),
                                  [](const PointResult& r) { return r.method == G2Method::tpa_filtered; });
    const auto direct = std::find_if(report.rows.begin(), report.rows.end(),
                                     [](const PointResult& r) { return r.method == G2Method::direct; });
    REQUIRE(tpa != report.rows.end());
    REQUIRE(direct != report.rows.end());

    CHECK(std::abs(tpa->g2_zero - 2.0) < 0.15); // 16 realizations, loose
    CHECK(std::abs(tpa->g2_zero - direct->g2_zero) < 0.05);
    CHECK(tpa->g2_zero_se > 0.0);
    CHECK(std::isfinite(tpa->coherence_time));
    for (const auto& row : report.rows) {
        const double clamped = std::clamp(row.g2_zero, 1.0, 2.0);
        CHECK(row.thermal_fraction == models::mixture_thermal_fraction(clamped));
        CHECK(row.expected_g2 == 2.0);
    }

    // Reports round-trip through their TSV form.
    const ScenarioReport back = read_report(report.run_dir / "report.tsv");
    CHECK(back.config_hash == report.config_hash);
    REQUIRE(back.rows.size() == report.rows.size());
    for (std::size_t j = 0; j < back.rows.size(); ++j) {
        CHECK(back.rows[j].label == report.rows[j].label);
        CHECK(back.rows[j].method == report.rows[j].method);
        CHECK(back.rows[j].g2_zero == report.rows[j].g2_zero);
        CHECK(back.rows[j].thermal_fraction == report.rows[j].thermal_fraction);
    }

    // A rerun of the same config rewrites byte-identical artifacts.
    const std::string config_bytes = slurp(report.run_dir / "config.json");
    const std::string report_bytes = slurp(report.run_dir / "report.tsv");
    const std::string curve_bytes = slurp(point_dir / "g2_tpa.tsv");
    const ScenarioReport again = run_scenario(cfg, tmp.path, 2);
    CHECK(again.run_dir == report.run_dir);
    CHECK(slurp(report.run_dir / "config.json") == config_bytes);
    CHECK(slurp(report.run_dir / "report.tsv") == report_bytes);
    CHECK(slurp(point_dir / "g2_tpa.tsv") == curve_bytes);

    // Comparison against a reference table: loose tolerances pass, tight fail.
    const fs::path loose = tmp.path / "loose.tsv";
    {
        std::ofstream out(loose);
        out << "label\tg2_zero\tg2_tol\tthermal_fraction\tfraction_tol\n";
        out << "thermal\t2.0\t0.2\t1.0\t0.2\n";
    }
    const CompareResult ok = compare_report(report, loose);
    CHECK(ok.pass);
    REQUIRE(ok.rows.size() == 2);
    for (const auto& row : ok.rows) {
        CHECK(row.pass);
        CHECK(std::abs(row.deviation - (row.measured - row.reference)) < 1e-15);
    }

    const fs::path tight = tmp.path / "tight.tsv";
    {
        std::ofstream out(tight);
        out << "label\tg2_zero\tg2_tol\tthermal_fraction\tfraction_tol\n";
        out << "thermal\t2.0\t1e-9\t1.0\t1e-9\n";
    }
    CHECK(!compare_report(report, tight).pass);

    const fs::path missing = tmp.path / "missing.tsv";
    {
        std::ofstream out(missing);
        out << "label\tg2_zero\tg2_tol\tthermal_fraction\tfraction_tol\n";
        out << "absent\t2.0\t0.2\t1.0\t0.2\n";
    }
    CHECK_THROWS_AS(compare_report(report, missing), CompareError);

    const fs::path wrong = tmp.path / "wrong.tsv";
    {
        std::ofstream out(wrong);
        out << "label\tg2_zero\n";
        out << "thermal\t2.0\n";
    }
    CHECK_THROWS_AS(compare_report(report, wrong), CompareError);
}
