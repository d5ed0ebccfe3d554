#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const fs::path& tmpdir() {
    static const fs::path dir = [] {
        fs::path d(LINDYN_TEST_TMPDIR);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// exit code of the tool, with stdout captured into a file
int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd = std::string(LINDYN_CLI_PATH) + " " + args + " > " +
                            stdout_file.string() + " 2> " + (tmpdir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

int run_cli(const std::string& args) { return run_cli(args, tmpdir() / "stdout.json"); }

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return Json::parse(in);
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = tmpdir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

fs::path two_tail_config() {
    static const fs::path p = write_file("two_tail.json", R"({
        "kind": "shift",
        "label": "two_tail_alpha_2",
        "space": {"kind": "lp", "p": 2.0},
        "weights": {"support": "bilateral", "family": "theorem_d", "params": [2.0]}
    })");
    return p;
}

fs::path doubling_config() {
    static const fs::path p = write_file("doubling_backward.json", R"({
        "kind": "shift",
        "direction": "backward",
        "weights": {"support": "bilateral", "family": "doubling_blocks", "params": [2.0]}
    })");
    return p;
}

fs::path rotation_config() {
    static const fs::path p = write_file("rotation.json", R"({
        "kind": "matrix",
        "label": "plane_rotation",
        "matrix": [[[0.5403023058681398, 0.0], [-0.8414709848078965, 0.0]],
                   [[0.8414709848078965, 0.0], [0.5403023058681398, 0.0]]]
    })");
    return p;
}

fs::path jordan_config() {
    static const fs::path p = write_file("jordan_one.json", R"({
        "kind": "matrix",
        "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [1.0, 0.0]]]
    })");
    return p;
}

} // namespace

TEST_CASE("classify reports the two-tail family verdicts with criterion codes") {
    const fs::path out = tmpdir() / "classify_two_tail.json";
    CHECK(run_cli("classify --config " + two_tail_config().string(), out) == 0);

    const Json r = read_json(out);
    CHECK(r.at("schema").get<int>() == 1);
    CHECK(r.at("label").get<std::string>() == "two_tail_alpha_2");
    CHECK(r.at("tool_version").get<std::string>() == "0.1.0");
    CHECK(r.at("seed").get<int>() == 1);

    const Json& v = r.at("verdicts");
    CHECK(v.at("hyperbolic").at("value") == "False");
    CHECK(v.at("hyperbolic").at("provenance") == "exact");
    CHECK(v.at("hyperbolic").at("criterion") == "HyperbolicShifts");
    CHECK(v.at("expansive").at("value") == "False");
    CHECK(v.at("expansive").at("criterion") == "ThmB-a");
    CHECK(v.at("uniformly_expansive").at("criterion") == "ThmB-b");
    CHECK(v.at("pos_expansive").at("criterion") == "BWFS-a");
    CHECK(v.at("unif_pos_expansive").at("criterion") == "BWFS-b");
    CHECK(v.at("fhc").at("value") == "WitnessedTrue");
    CHECK(v.at("fhc").at("provenance") == "witnessed");
    CHECK(v.at("fhc").at("criterion") == "ThmD");
    CHECK(v.at("hypercyclic").at("criterion") == "PEHC");
    CHECK(v.at("supercyclic").at("criterion") == "UPESC");
}

TEST_CASE("classify finds the block family's backward expansivity and hypercyclicity") {
    const fs::path out = tmpdir() / "classify_doubling.json";
    CHECK(run_cli("classify --config " + doubling_config().string(), out) == 0);

    const Json r = read_json(out);
    const Json& v = r.at("verdicts");
    CHECK(v.at("pos_expansive").at("value") == "WitnessedTrue");
    CHECK(v.at("pos_expansive").at("criterion") == "BWBS-a");
    CHECK(v.at("unif_pos_expansive").at("criterion") == "BWBS-b");
    CHECK(v.at("hypercyclic").at("value") == "WitnessedTrue");
    CHECK(v.at("hypercyclic").at("witness").at("pairs").size() >= 1);
    CHECK(v.at("uniformly_expansive").at("value") == "Undetermined");
}

TEST_CASE("identity weights fail every expansivity test") {
    const fs::path cfg = write_file("identity.json", R"({
        "kind": "shift",
        "weights": "identity_weights"
    })");
    const fs::path out = tmpdir() / "classify_identity.json";
    CHECK(run_cli("classify --config " + cfg.string(), out) == 0);

    const Json r = read_json(out);
    CHECK(r.at("label") == "identity_weights"); // registry name becomes the label
    const Json& v = r.at("verdicts");
    for (const char* tag : {"expansive", "uniformly_expansive", "pos_expansive",
                            "unif_pos_expansive", "hyperbolic"})
        CHECK(v.at(tag).at("value") == "False");
}

TEST_CASE("shadow certifies a generated pseudotrajectory and writes both artifacts") {
    const fs::path out = tmpdir() / "shadow_report.json";
    CHECK(run_cli("shadow --config " + two_tail_config().string() +
                      " --delta 0.01 --window 50 --seed 7 --out " + out.string(),
                  tmpdir() / "shadow_stdout.json") == 0);

    const Json r = read_json(out);
    CHECK(r.at("verdicts").at("shadowing").at("value") == "WitnessedTrue");
    REQUIRE(r.at("artifacts").size() == 2);

    const Json run = read_json(tmpdir() / "shadow_report.result.json");
    CHECK(run.at("certified").get<bool>());
    CHECK(run.at("bound_k").get<double>() == 4.0);
    CHECK(run.at("sup_error").get<double>() <= 0.04);
    CHECK(run.at("window") == Json::array({-50, 50}));

    const std::string csv = read_text(tmpdir() / "shadow_report.result.csv");
    CHECK(csv.rfind("n,defect_norm,correction_norm,error\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 102); // header + 101 points
    CHECK(csv.find("\n-50,") != std::string::npos);
}

TEST_CASE("zero defects shadow exactly") {
    const fs::path out = tmpdir() / "zero_defect.json";
    CHECK(run_cli("shadow --config " + two_tail_config().string() +
                      " --delta 0 --window 20 --out " + out.string(),
                  tmpdir() / "zero_stdout.json") == 0);
    const Json run = read_json(tmpdir() / "zero_defect.result.json");
    CHECK(run.at("sup_error").get<double>() == 0.0);
    for (const auto& [n, err] : run.at("errors").items()) {
        (void)n;
        CHECK(err.get<double>() == 0.0);
    }
}

TEST_CASE("a supplied pseudotrajectory file drives the solver") {
    const fs::path pt = write_file("tiny_pt.json", R"({
        "window": [0, 2],
        "delta": 0.01,
        "points": {
            "0": {"0": [1.0, 0.0]},
            "1": {"0": [0.01, 0.0], "1": [0.5, 0.0]},
            "2": {"1": [0.005, 0.0], "2": [0.25, 0.0]}
        },
        "defects": {
            "0": {"0": [0.01, 0.0]},
            "1": {}
        }
    })");
    const fs::path out = tmpdir() / "pseudo_file.json";
    CHECK(run_cli("shadow --config " + two_tail_config().string() + " --pseudo " + pt.string() +
                      " --out " + out.string(),
                  tmpdir() / "pseudo_stdout.json") == 0);
    const Json run = read_json(tmpdir() / "pseudo_file.result.json");
    // the single kick propagates through dyadic weights, so sup is exact
    CHECK(run.at("sup_error").get<double>() == 0.01);
    CHECK(run.at("certified").get<bool>());
}

TEST_CASE("refutation exits three and certifies the lower bound") {
    const fs::path out = tmpdir() / "refute.json";
    CHECK(run_cli("shadow --config " + rotation_config().string() +
                      " --refute --window 100 --out " + out.string(),
                  tmpdir() / "refute_stdout.json") == 3);

    const Json r = read_json(out);
    CHECK(r.at("verdicts").at("shadowing").at("value") == "False");
    CHECK(r.at("verdicts").at("shadowing").at("witness").at("tag") == "unbounded_correction");

    const Json cert = read_json(tmpdir() / "refute.refutation.json");
    CHECK(cert.at("lower_bound").get<double>() >= 50.0);
    CHECK(cert.at("two_sided").get<bool>());
    CHECK(cert.at("defect_sup").get<double>() == 1.0);
    const Json lambda = cert.at("lambda");
    const double mod = std::hypot(lambda[0].get<double>(), lambda[1].get<double>());
    CHECK(mod == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inapplicable operations exit four") {
    // spectrum on the unit circle, no --refute
    CHECK(run_cli("shadow --config " + rotation_config().string() + " --window 50") == 4);
    // shifts carry no eigendirection refutation
    CHECK(run_cli("shadow --config " + two_tail_config().string() + " --refute") == 4);
    // probes bound to the other operator kind
    CHECK(run_cli("probe fd1 --config " + two_tail_config().string()) == 4);
    CHECK(run_cli("probe orbit --config " + rotation_config().string()) == 4);
}

TEST_CASE("malformed configs exit two") {
    const fs::path bad = write_file("bad.json", "{\"kind\": \"shift\", \"weights\": {\"supp");
    CHECK(run_cli("classify --config " + bad.string()) == 2);

    const fs::path unknown = write_file("unknown_registry.json",
                                        R"({"kind": "shift", "weights": "no_such_entry"})");
    CHECK(run_cli("classify --config " + unknown.string()) == 2);

    CHECK(run_cli("classify --config " + (tmpdir() / "does_not_exist.json").string()) == 2);

    const fs::path wrong_kind =
        write_file("wrong_kind.json", R"({"kind": "tensor", "weights": "identity_weights"})");
    CHECK(run_cli("classify --config " + wrong_kind.string()) == 2);
}

TEST_CASE("reports are byte-stable for fixed config, flags, and seed") {
    // identical invocations, snapshots taken between the two runs
    const std::string shadow_args = "shadow --config " + two_tail_config().string() +
                                    " --delta 0.01 --window 30 --seed 11 --out " +
                                    (tmpdir() / "stable.json").string();
    CHECK(run_cli(shadow_args, tmpdir() / "sa_stdout.json") == 0);
    const std::string report1 = read_text(tmpdir() / "stable.json");
    const std::string result1 = read_text(tmpdir() / "stable.result.json");
    const std::string csv1 = read_text(tmpdir() / "stable.result.csv");
    CHECK(run_cli(shadow_args, tmpdir() / "sb_stdout.json") == 0);
    CHECK(read_text(tmpdir() / "stable.json") == report1);
    CHECK(read_text(tmpdir() / "stable.result.json") == result1);
    CHECK(read_text(tmpdir() / "stable.result.csv") == csv1);
    CHECK(read_text(tmpdir() / "sa_stdout.json") == read_text(tmpdir() / "sb_stdout.json"));

    const std::string classify_args = "classify --config " + doubling_config().string() +
                                      " --horizon 150 --out " +
                                      (tmpdir() / "stable_c.json").string();
    CHECK(run_cli(classify_args, tmpdir() / "sc_stdout.json") == 0);
    const std::string classify1 = read_text(tmpdir() / "stable_c.json");
    CHECK(run_cli(classify_args, tmpdir() / "sd_stdout.json") == 0);
    CHECK(read_text(tmpdir() / "stable_c.json") == classify1);
}

TEST_CASE("the orbit probe exports the closed-form norms") {
    const fs::path out = tmpdir() / "orbit.json";
    CHECK(run_cli("probe orbit --config " + two_tail_config().string() +
                      " --window 10 --out " + out.string(),
                  tmpdir() / "orbit_stdout.json") == 0);

    std::istringstream csv(read_text(tmpdir() / "orbit.orbit.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "n,norm,log_norm");
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const long long n = std::stoll(line.substr(0, c1));
        const double norm = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(norm == doctest::Approx(std::pow(2.0, -std::llabs(n))).epsilon(1e-12));
        ++rows;
    }
    CHECK(rows == 21);
}

TEST_CASE("the irregular probe witnesses the block family's first basis vector") {
    const fs::path out = tmpdir() / "irregular.json";
    CHECK(run_cli("probe irregular --config " + doubling_config().string() + " --out " +
                      out.string(),
                  tmpdir() / "irregular_stdout.json") == 0);
    const Json v = read_json(out).at("verdicts").at("irregular");
    CHECK(v.at("value") == "WitnessedTrue");
    CHECK(v.at("witness").at("start").get<int>() == 0); // candidate e_0
    CHECK(v.at("witness").at("pairs").size() == 1);
}

TEST_CASE("the counterexample probe exports both certificate flavors") {
    const fs::path out = tmpdir() / "cx.json";
    CHECK(run_cli("probe fd1 --config " + jordan_config().string() +
                      " --window 1000 --mode lp --out " + out.string(),
                  tmpdir() / "cx_stdout.json") == 0);
    const Json lp = read_json(tmpdir() / "cx.counterexample.json");
    CHECK(lp.at("defect_power_sum").get<double>() < 1.6449340668482264); // sum 1/(n+1)^2
    CHECK(lp.at("divergence_minimax").get<double>() > 3.7); // half the harmonic sum H_1000
    const std::string csv = read_text(tmpdir() / "cx.counterexample.csv");
    CHECK(csv.rfind("n,defect_norm,pivot_drift\n", 0) == 0);

    CHECK(run_cli("probe fd1 --config " + jordan_config().string() +
                      " --window 100 --mode positive --delta 0.1 --out " + out.string(),
                  tmpdir() / "cx2_stdout.json") == 0);
    const Json pos = read_json(tmpdir() / "cx.counterexample.json");
    CHECK(pos.at("defect_sup").get<double>() == 0.1);          // ramp steps are exact
    CHECK(pos.at("divergence_minimax").get<double>() == 5.0);  // half of N * delta
}
