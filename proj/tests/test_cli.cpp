#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

// shipped by the build system as the path to the g2sim binary
const std::string kCli = G2SIM_CLI_PATH;

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("g2sim_cli_") + tag + "_" +
                                            std::to_string(static_cast<unsigned>(::getpid())));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() /
                         ("g2sim_cli_out_" + std::to_string(::getpid()) + "_" + std::to_string(counter));
    const fs::path err = fs::temp_directory_path() /
                         ("g2sim_cli_err_" + std::to_string(::getpid()) + "_" + std::to_string(counter));
    ++counter;
    const std::string cmd = kCli + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return res;
}

// key -> value for "key\tvalue" records output
std::map<std::string, std::string> parse_records(const std::string& text) {
    std::map<std::string, std::string> fields;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab != std::string::npos)
            fields[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return fields;
}

} // namespace

TEST_CASE("usage errors exit with 2, domain errors with 1") {
    CHECK(run_cli("--no-such-flag").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);                      // a subcommand is required
    CHECK(run_cli("model").exit_code == 2);                 // model needs a quantity flag
    CHECK(run_cli("model --mixture-fraction 3.0").exit_code == 1); // outside [1, 2]
    CHECK(run_cli("analyze --input /no/such/file.tsv").exit_code == 2);
    CHECK(run_cli("run --preset no-such-preset --out /tmp").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("--version").exit_code == 0);
}

TEST_CASE("model queries print the analytic values") {
    const RunResult inv = run_cli("--format records model --mixture-fraction 1.67");
    REQUIRE(inv.exit_code == 0);
    const auto fields = parse_records(inv.out);
    REQUIRE(fields.count("thermal_fraction") == 1);
    CHECK(std::abs(std::stod(fields.at("thermal_fraction")) - 0.4255437) < 1e-4);

    const RunResult fwd = run_cli("--format records model --mixture-g2 0.5");
    REQUIRE(fwd.exit_code == 0);
    CHECK(std::abs(std::stod(parse_records(fwd.out).at("g2_zero")) - 1.75) < 1e-12);

    const RunResult laser = run_cli("--format records model --laser-g2 0");
    REQUIRE(laser.exit_code == 0);
    CHECK(std::abs(std::stod(parse_records(laser.out).at("laser_g2")) - 1.5707963268) < 1e-6);
}

TEST_CASE("synth reports ensemble statistics as records") {
    const RunResult res = run_cli("--format records synth --kind thermal --fwhm 0.1 "
                                  "--n-realizations 8 --n-samples 4096 --seed 5");
    REQUIRE(res.exit_code == 0);
    const auto fields = parse_records(res.out);
    REQUIRE(fields.count("mean_intensity") == 1);
    CHECK(std::abs(std::stod(fields.at("mean_intensity")) - 1.0) < 0.2);
}

TEST_CASE("interfere and analyze round-trip through a file") {
    TempDir tmp("flow");
    const fs::path gram = tmp.path / "gram.tsv";
    const RunResult rec = run_cli("interfere --kind thermal --fwhm 0.1 --n-realizations 24 "
                                  "--n-samples 4096 --seed 9 --span-tc 5 --out " + gram.string());
    REQUIRE(rec.exit_code == 0);
    REQUIRE(fs::exists(gram));

    const RunResult ana = run_cli("--format records analyze --input " + gram.string());
    REQUIRE(ana.exit_code == 0);
    const auto fields = parse_records(ana.out);
    REQUIRE(fields.count("g2_zero") == 1);
    CHECK(std::abs(std::stod(fields.at("g2_zero")) - 2.0) < 0.2);
    REQUIRE(fields.count("thermal_fraction") == 1);
    REQUIRE(fields.count("coherence_time") == 1);
}

TEST_CASE("runs are reproducible across invocations and thread counts") {
    TempDir tmp("run");
    const fs::path root_a = tmp.path / "a";
    const fs::path root_b = tmp.path / "b";

    const RunResult first = run_cli("run --preset demo-thermal --out " + root_a.string());
    REQUIRE(first.exit_code == 0);
    const RunResult second = run_cli("--threads 2 run --preset demo-thermal --out " + root_b.string());
    REQUIRE(second.exit_code == 0);

    // Same hash directory appears under both roots with identical bytes.
    fs::path run_a;
    for (const auto& entry : fs::directory_iterator(root_a))
        run_a = entry.path();
    REQUIRE(!run_a.empty());
    const fs::path run_b = root_b / run_a.filename();
    REQUIRE(fs::exists(run_b));
    CHECK(slurp(run_a / "report.tsv") == slurp(run_b / "report.tsv"));
    CHECK(slurp(run_a / "points" / "thermal" / "g2_tpa.tsv") ==
          slurp(run_b / "points" / "thermal" / "g2_tpa.tsv"));

    // The report names its run directory for scripting.
    const auto fields = parse_records(first.out);
    REQUIRE(fields.count("run_dir") == 1);
    CHECK(fields.at("run_dir") == run_a.string());

    // compare: a loose reference passes, a tight one fails with exit 1.
    const fs::path loose = tmp.path / "loose.tsv";
    {
        std::ofstream out(loose);
        out << "label\tg2_zero\tg2_tol\tthermal_fraction\tfraction_tol\n";
        out << "thermal\t2.0\t0.2\t1.0\t0.2\n";
    }
    const RunResult ok = run_cli("compare --report " + (run_a / "report.tsv").string() +
                                 " --reference " + loose.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);

    const fs::path tight = tmp.path / "tight.tsv";
    {
        std::ofstream out(tight);
        out << "label\tg2_zero\tg2_tol\tthermal_fraction\tfraction_tol\n";
        out << "thermal\t2.0\t1e-9\t1.0\t1e-9\n";
    }
    const RunResult bad = run_cli("compare --report " + (run_a / "report.tsv").string() +
                                  " --reference " + tight.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("presets lists the built-in scenarios") {
    const RunResult res = run_cli("presets");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("demo-thermal") != std::string::npos);
    CHECK(res.out.find("free-running-sweep") != std::string::npos);
    CHECK(res.out.find("ec-laser-sweep") != std::string::npos);
}
