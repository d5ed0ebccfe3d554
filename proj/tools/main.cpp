#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lindyn/classifier.hpp"
#include "lindyn/json_io.hpp"
#include "lindyn/matrix.hpp"
#include "lindyn/pseudo.hpp"
#include "lindyn/registry.hpp"
#include "lindyn/shadow.hpp"
#include "lindyn/splitting.hpp"

namespace {

using namespace lindyn;

constexpr const char* kToolVersion = "0.1.0";

// exit-code contract: 0 success/certified, 2 config error, 3 certified
// refutation, 4 operation inapplicable to the configured operator
constexpr int kExitOk = 0;
constexpr int kExitUncertified = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitInapplicable = 4;

struct Flags {
    std::string config_path;
    std::string pseudo_path;
    std::string probe_name;
    std::string mode = "lp";
    std::string out_path;
    std::int64_t horizon = 200;
    std::int64_t window = 50;
    double threshold = 2.0;
    double tol = 0.0; // 0 = per-command default
    double delta = 0.01;
    double p = 2.0;
    std::uint64_t seed = 1;
    bool refute = false;
};

// shortest representation that round-trips, same as the JSON artifacts use
std::string fmt17(double x) { return Json(x).dump(); }

ClassifierConfig classifier_config(const Flags& f) {
    ClassifierConfig cfg;
    cfg.horizon = f.horizon;
    cfg.threshold_c = f.threshold;
    if (f.tol > 0.0) cfg.gm_tolerance = f.tol;
    return cfg;
}

Json make_report(const OperatorConfig& c, const std::string& command, Json verdicts,
                 Json artifacts, std::uint64_t seed) {
    Json r = Json::object();
    r["schema"] = 1;
    r["label"] = c.label;
    r["command"] = command;
    r["verdicts"] = std::move(verdicts);
    r["artifacts"] = std::move(artifacts);
    r["seed"] = seed;
    r["tool_version"] = kToolVersion;
    return r;
}

void emit_report(const Json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write report to " + out_path);
        out << text;
    }
}

/// Artifact files share the report's basename; without --out they land in
/// the working directory under the subcommand's name.
std::string artifact_base(const Flags& f, const char* fallback) {
    std::string base = f.out_path.empty() ? std::string(fallback) : f.out_path;
    if (base.size() > 5 && base.compare(base.size() - 5, 5, ".json") == 0)
        base.resize(base.size() - 5);
    return base;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write artifact " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// classify

int run_classify(const OperatorConfig& c, const Flags& f) {
    const ClassifierConfig cfg = classifier_config(f);
    Json verdicts = Json::object();

    // every applicable classifier reports under its tag; classifiers that
    // reject the operator's shape (unilateral, non-invertible, non-normal)
    // simply do not appear
    auto put = [&](const char* tag, const char* criterion, auto&& fn) {
        try {
            Json jv = verdict_to_json(fn());
            if (criterion) jv["criterion"] = criterion;
            verdicts[tag] = std::move(jv);
        } catch (const std::invalid_argument&) {
        }
    };

    if (c.kind == "shift") {
        const WeightSequence& w = *c.weights;
        const bool fwd = c.direction == Direction::forward;
        put("expansive", "ThmB-a", [&] { return classify_expansive_forward(w, cfg); });
        put("uniformly_expansive", "ThmB-b",
            [&] { return classify_uniformly_expansive_forward(w, cfg); });
        put("pos_expansive", fwd ? "BWFS-a" : "BWBS-a",
            [&] { return classify_positively_expansive(w, cfg, c.direction); });
        put("unif_pos_expansive", fwd ? "BWFS-b" : "BWBS-b",
            [&] { return classify_uniformly_positively_expansive(w, cfg, c.direction); });
        put("hyperbolic", "HyperbolicShifts", [&] { return is_hyperbolic_shift(w, cfg); });
        put("hypercyclic", "PEHC", [&] { return hypercyclicity_check(w, cfg); });
        put("supercyclic", "UPESC", [&] { return supercyclicity_check(w, cfg); });
        put("fhc", "ThmD", [&] { return frequent_hc_check(w, cfg); });
    } else {
        const MatrixOp& a = *c.matrix;
        if (a.is_normal()) {
            const NormalExpansivityReport rep = normal_expansive(a);
            verdicts["expansive"] = verdict_to_json(rep.expansive);
            verdicts["uniformly_expansive"] = verdict_to_json(rep.uniformly_expansive);
            verdicts["pos_expansive"] = verdict_to_json(rep.positively_expansive);
            verdicts["unif_pos_expansive"] = verdict_to_json(rep.uniformly_positively_expansive);
        }
        put("hyperbolic", "Def3", [&] { return is_hyperbolic_matrix(a); });
    }

    const std::string command = "classify --config " + f.config_path + " --horizon " +
                                std::to_string(f.horizon) + " --threshold " + fmt17(f.threshold) +
                                " --tol " + fmt17(cfg.gm_tolerance);
    emit_report(make_report(c, command, std::move(verdicts), Json::array(), f.seed), f.out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// shadow

Eigen::VectorXcd seeded_unit_vector(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto draw = [&] { return double(rng() >> 11) * 0x1p-53 * 2.0 - 1.0; };
    Eigen::VectorXcd x0(dim);
    for (int i = 0; i < dim; ++i) x0[i] = Complex(draw(), draw());
    const double norm = x0.norm();
    if (norm > 0.0) x0 /= norm;
    return x0;
}

Verdict shadow_verdict(bool certified, double sup_error, double bound, double delta,
                       std::int64_t window) {
    Verdict v;
    v.value = certified ? Truth::WitnessedTrue : Truth::Undetermined;
    v.provenance = Provenance::witnessed;
    v.horizon = window;
    v.detail = "sup correction " + fmt17(sup_error) + " against bound " + fmt17(bound) + " * " +
               fmt17(delta);
    return v;
}

int run_refute(const OperatorConfig& c, const Flags& f, const std::string& command) {
    if (c.kind != "matrix") {
        std::cerr << "lindyn shadow: --refute needs a matrix operator; shifts carry no "
                     "eigendirection refutation\n";
        return kExitInapplicable;
    }
    const RefutationCertificate cert = refute_shadowing(*c.matrix, f.window, /*two_sided=*/true);

    Json jc = Json::object();
    jc["lambda"] = complex_to_json(cert.lambda);
    Json dir = Json::array();
    for (Eigen::Index i = 0; i < cert.direction.size(); ++i)
        dir.push_back(complex_to_json(cert.direction[i]));
    jc["direction"] = std::move(dir);
    jc["residual"] = cert.residual;
    jc["window"] = cert.window;
    jc["two_sided"] = cert.two_sided;
    jc["defect_sup"] = cert.defect_sup;
    jc["lower_bound"] = cert.lower_bound;
    jc["detail"] = cert.detail;

    const std::string cert_path = artifact_base(f, "shadow") + ".refutation.json";
    write_text_file(cert_path, jc.dump(2) + "\n");

    Verdict v;
    v.value = Truth::False;
    v.provenance = Provenance::witnessed;
    v.horizon = f.window;
    Witness wit;
    wit.tag = "unbounded_correction";
    wit.note = "corrections exceed " + fmt17(cert.lower_bound) +
               " for every base point on the window";
    v.witness = std::move(wit);
    v.detail = cert.detail;

    Json verdicts = Json::object();
    verdicts["shadowing"] = verdict_to_json(v);
    emit_report(make_report(c, command, std::move(verdicts), Json::array({cert_path}), f.seed),
                f.out_path);
    return kExitRefuted;
}

int run_shadow(const OperatorConfig& c, const Flags& f) {
    const double tol = f.tol > 0.0 ? f.tol : 1e-9;
    std::string command = "shadow --config " + f.config_path + " --window " +
                          std::to_string(f.window) + " --delta " + fmt17(f.delta) + " --seed " +
                          std::to_string(f.seed) + " --tol " + fmt17(tol);
    if (!f.pseudo_path.empty()) command += " --pseudo " + f.pseudo_path;
    if (f.refute) command += " --refute";

    if (f.refute) return run_refute(c, f, command);

    const std::string base = artifact_base(f, "shadow");
    const std::string json_path = base + ".result.json";
    const std::string csv_path = base + ".result.csv";

    Json verdicts = Json::object();
    bool certified = false;

    if (c.kind == "shift") {
        const ShiftOperator op = c.shift_op();
        const Splitting s = build_splitting(op, classifier_config(f));
        PseudoTrajectory pt;
        if (!f.pseudo_path.empty()) {
            std::ifstream in(f.pseudo_path);
            if (!in) throw std::runtime_error("cannot open pseudotrajectory " + f.pseudo_path);
            pt = shift_pseudotrajectory_from_json(Json::parse(in), c.space);
        } else {
            const std::int64_t n_min = op.invertible() ? -f.window : 0;
            const BiVector x0 =
                BiVector::basis(op.weights.support() == Support::bilateral ? 0 : 1);
            pt = generate_pseudotrajectory(op, x0, f.delta, n_min, f.window, f.seed);
        }
        const ShiftShadowResult run = shadow(op, s, pt, tol);
        write_text_file(json_path, shadow_result_to_json(run).dump(2) + "\n");
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write artifact " + csv_path);
        write_shadow_csv(csv, c.space, pt, run);
        verdicts["shadowing"] =
            verdict_to_json(shadow_verdict(run.certified, run.sup_error, run.bound_k, pt.delta,
                                           f.window));
        certified = run.certified;
    } else {
        const MatrixOp& a = *c.matrix;
        const Splitting s = build_splitting(a);
        MatrixPseudoTrajectory pt;
        if (!f.pseudo_path.empty()) {
            std::ifstream in(f.pseudo_path);
            if (!in) throw std::runtime_error("cannot open pseudotrajectory " + f.pseudo_path);
            pt = matrix_pseudotrajectory_from_json(Json::parse(in), a.dim());
        } else {
            const bool invertible = a.min_singular_value() > 0.0;
            const std::int64_t n_min = invertible ? -f.window : 0;
            pt = generate_pseudotrajectory(a, seeded_unit_vector(a.dim(), f.seed), f.delta, n_min,
                                           f.window, f.seed);
        }
        const MatrixShadowResult run = shadow(a, s, pt, tol);
        write_text_file(json_path, shadow_result_to_json(run).dump(2) + "\n");
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write artifact " + csv_path);
        write_shadow_csv(csv, pt, run);
        verdicts["shadowing"] =
            verdict_to_json(shadow_verdict(run.certified, run.sup_error, run.bound_k, pt.delta,
                                           f.window));
        certified = run.certified;
    }

    emit_report(
        make_report(c, command, std::move(verdicts), Json::array({json_path, csv_path}), f.seed),
        f.out_path);
    return certified ? kExitOk : kExitUncertified;
}

// ---------------------------------------------------------------------------
// probe

std::vector<BiVector> shift_candidates(const WeightSequence& w) {
    std::vector<BiVector> out;
    if (w.support() == Support::bilateral) {
        out.push_back(BiVector::basis(0));
        for (std::int64_t j = 1; j <= 4; ++j) {
            out.push_back(BiVector::basis(j));
            out.push_back(BiVector::basis(-j));
        }
    } else {
        for (std::int64_t j = 1; j <= 5; ++j) out.push_back(BiVector::basis(j));
    }
    return out;
}

int run_probe_orbit(const OperatorConfig& c, const Flags& f, const std::string& command) {
    if (c.kind != "shift") {
        std::cerr << "lindyn probe orbit: shift operators only\n";
        return kExitInapplicable;
    }
    const ShiftOperator op = c.shift_op();
    const std::int64_t n_min = op.invertible() ? -f.window : 0;
    const BiVector x0 = BiVector::basis(op.weights.support() == Support::bilateral ? 0 : 1);
    const auto norms = orbit_norms(op.weights, x0, c.space, n_min, f.window, op.direction);

    std::string csv = "n,norm,log_norm\n";
    for (const auto& [n, mag] : norms)
        csv += std::to_string(n) + ',' + fmt17(mag.value()) + ',' + fmt17(mag.log_abs()) + '\n';
    const std::string csv_path = artifact_base(f, "probe") + ".orbit.csv";
    write_text_file(csv_path, csv);

    emit_report(make_report(c, command, Json::object(), Json::array({csv_path}), f.seed),
                f.out_path);
    return kExitOk;
}

int run_probe_irregular(const OperatorConfig& c, const Flags& f, const std::string& command) {
    const ClassifierConfig cfg = classifier_config(f);
    std::optional<IrregularWitness> found;
    if (c.kind == "shift") {
        found = irregular_vector_probe(*c.weights, c.direction, shift_candidates(*c.weights),
                                       c.space, cfg);
    } else {
        std::vector<Eigen::VectorXcd> candidates;
        for (int i = 0; i < c.matrix->dim(); ++i)
            candidates.push_back(Eigen::VectorXcd::Unit(c.matrix->dim(), i));
        found = irregular_vector_probe(*c.matrix, candidates, cfg);
    }

    Verdict v;
    if (found) {
        Witness wit;
        wit.tag = "orbit_dip_rise";
        wit.start = static_cast<std::int64_t>(found->candidate);
        wit.pairs.emplace_back(found->n_low, found->n_high);
        wit.note = "log norms " + fmt17(found->log_norm_low) + " at n = " +
                   std::to_string(found->n_low) + " and " + fmt17(found->log_norm_high) +
                   " at n = " + std::to_string(found->n_high);
        v = Verdict::witnessed_true(std::move(wit), cfg.probe_horizon,
                                    "candidate " + std::to_string(found->candidate) +
                                        " dips below the floor and clears the ceiling");
    } else {
        v = Verdict::undetermined(cfg.probe_horizon, "no candidate's orbit both dips and rises");
    }
    Json verdicts = Json::object();
    verdicts["irregular"] = verdict_to_json(v);
    emit_report(make_report(c, command, std::move(verdicts), Json::array(), f.seed), f.out_path);
    return kExitOk;
}

int run_probe_ne0(const OperatorConfig& c, const Flags& f, const std::string& command) {
    if (c.kind != "shift") {
        std::cerr << "lindyn probe ne0: shift operators only\n";
        return kExitInapplicable;
    }
    Json verdicts = Json::object();
    verdicts["ne0"] = verdict_to_json(ne0_growth_probe(*c.weights, classifier_config(f)));
    emit_report(make_report(c, command, std::move(verdicts), Json::array(), f.seed), f.out_path);
    return kExitOk;
}

int run_probe_linear_growth(const OperatorConfig& c, const Flags& f, const std::string& command) {
    if (c.kind != "shift") {
        std::cerr << "lindyn probe linear-growth: shift operators only\n";
        return kExitInapplicable;
    }
    const ShiftOperator op = c.shift_op();
    const Splitting s = build_splitting(op, classifier_config(f));
    const double tol = f.tol > 0.0 ? f.tol : 1e-9;

    // y_k = 2 |w-product 0..k|, so every translate of the support keeps the
    // orbit norm pinned near 2; operators whose products leave (1, 3) on the
    // padded support make the orbit precheck throw, which is the honest
    // "inapplicable" answer
    BiVector y;
    const std::int64_t pad = 20;
    for (std::int64_t k = -f.window - pad; k <= f.window + pad; ++k) {
        if (!op.weights.in_domain(k)) continue;
        const Magnitude pk = k >= 0 ? window_product(op.weights, 0, k)
                                    : window_product(op.weights, k, -k);
        const double scale = k >= 0 ? pk.value() : 1.0 / pk.value();
        if (scale > 0.0 && std::isfinite(scale)) y.set(k, Complex(2.0 * scale, 0.0));
    }

    const LinearGrowthResult r =
        linear_growth_orbit(op, s, y, f.delta, -f.window, f.window, tol);

    Verdict v;
    v.value = r.bounds_hold ? Truth::WitnessedTrue : Truth::Undetermined;
    v.provenance = Provenance::witnessed;
    v.horizon = f.window;
    v.detail = r.detail;
    Json verdicts = Json::object();
    verdicts["linear_growth"] = verdict_to_json(v);
    emit_report(make_report(c, command, std::move(verdicts), Json::array(), f.seed), f.out_path);
    return r.bounds_hold ? kExitOk : kExitUncertified;
}

int run_probe_fd1(const OperatorConfig& c, const Flags& f, const std::string& command) {
    if (c.kind != "matrix") {
        std::cerr << "lindyn probe fd1: matrix operators only\n";
        return kExitInapplicable;
    }
    CounterexampleMode mode;
    if (f.mode == "lp")
        mode = CounterexampleMode::lp;
    else if (f.mode == "l1")
        mode = CounterexampleMode::l1;
    else if (f.mode == "positive")
        mode = CounterexampleMode::positive;
    else {
        std::cerr << "lindyn probe fd1: --mode must be lp, l1, or positive\n";
        return kExitConfig;
    }

    const CounterexampleCertificate cert =
        fd1_counterexample(*c.matrix, mode, f.window, f.p, f.delta);

    Json jc = Json::object();
    jc["mode"] = f.mode;
    jc["p"] = cert.p;
    jc["delta"] = cert.delta;
    jc["pivot"] = cert.pivot;
    jc["lambda"] = complex_to_json(cert.lambda);
    jc["window"] = f.window;
    jc["defect_power_sum"] = cert.defect_power_sum;
    jc["defect_sup"] = cert.defect_sup;
    jc["divergence_minimax"] = cert.divergence_minimax;
    jc["detail"] = cert.detail;
    const std::string base = artifact_base(f, "probe");
    const std::string cert_path = base + ".counterexample.json";
    write_text_file(cert_path, jc.dump(2) + "\n");

    std::string csv = "n,defect_norm,pivot_drift\n";
    for (std::size_t i = 0; i < cert.pivot_drift.size(); ++i) {
        csv += std::to_string(i) + ',';
        if (i < cert.defect_norms.size()) csv += fmt17(cert.defect_norms[i]);
        csv += ',' + fmt17(cert.pivot_drift[i]) + '\n';
    }
    const std::string csv_path = base + ".counterexample.csv";
    write_text_file(csv_path, csv);

    Verdict v;
    Witness wit;
    wit.tag = "window_divergence";
    wit.note = "minimax error " + fmt17(cert.divergence_minimax) + " with defect sup " +
               fmt17(cert.defect_sup);
    v = Verdict::witnessed_true(std::move(wit), f.window, cert.detail);
    Json verdicts = Json::object();
    verdicts["fd1"] = verdict_to_json(v);
    emit_report(
        make_report(c, command, std::move(verdicts), Json::array({cert_path, csv_path}), f.seed),
        f.out_path);
    return kExitOk;
}

int run_probe(const OperatorConfig& c, const Flags& f) {
    std::string command = "probe " + f.probe_name + " --config " + f.config_path + " --window " +
                          std::to_string(f.window) + " --horizon " + std::to_string(f.horizon) +
                          " --delta " + fmt17(f.delta) + " --seed " + std::to_string(f.seed);
    if (f.probe_name == "fd1")
        command += " --mode " + f.mode + " --p " + fmt17(f.p);

    if (f.probe_name == "orbit") return run_probe_orbit(c, f, command);
    if (f.probe_name == "irregular") return run_probe_irregular(c, f, command);
    if (f.probe_name == "ne0") return run_probe_ne0(c, f, command);
    if (f.probe_name == "linear-growth") return run_probe_linear_growth(c, f, command);
    if (f.probe_name == "fd1") return run_probe_fd1(c, f, command);
    std::cerr << "lindyn probe: unknown probe \"" << f.probe_name
              << "\" (orbit, irregular, ne0, linear-growth, fd1)\n";
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-shift and matrix dynamics toolkit"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", f.config_path, "operator config JSON")->required();
        cmd->add_option("--horizon", f.horizon, "search horizon for witnessed classifiers");
        cmd->add_option("--threshold", f.threshold, "expansivity constant c > 1");
        cmd->add_option("--tol", f.tol, "tolerance (gm dead band / certification slack)");
        cmd->add_option("--window", f.window, "window half-width N");
        cmd->add_option("--delta", f.delta, "defect size for generated pseudotrajectories");
        cmd->add_option("--seed", f.seed, "RNG seed, echoed into the report");
        cmd->add_option("--out", f.out_path, "report path (artifacts share its basename)");
    };

    CLI::App* cls = app.add_subcommand("classify", "run every applicable classifier");
    add_common(cls);

    CLI::App* shd = app.add_subcommand("shadow", "solve or refute shadowing on a finite window");
    add_common(shd);
    shd->add_option("--pseudo", f.pseudo_path, "pseudotrajectory JSON (instead of generating)");
    shd->add_flag("--refute", f.refute, "emit an unbounded-correction refutation certificate");

    CLI::App* prb = app.add_subcommand("probe", "orbit and counterexample probes");
    prb->add_option("name", f.probe_name, "orbit | irregular | ne0 | linear-growth | fd1")
        ->required();
    add_common(prb);
    prb->add_option("--mode", f.mode, "fd1 mode: lp | l1 | positive");
    prb->add_option("--p", f.p, "defect-sum exponent for fd1 lp mode");

    CLI11_PARSE(app, argc, argv);

    OperatorConfig config;
    try {
        config = load_config(f.config_path);
    } catch (const std::exception& e) {
        std::cerr << "lindyn: bad config: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (cls->parsed()) return run_classify(config, f);
        if (shd->parsed()) return run_shadow(config, f);
        return run_probe(config, f);
    } catch (const NotSplittable& e) {
        std::cerr << "lindyn: not splittable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const std::domain_error& e) {
        std::cerr << "lindyn: inapplicable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const std::invalid_argument& e) {
        std::cerr << "lindyn: inapplicable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const std::exception& e) {
        std::cerr << "lindyn: error: " << e.what() << "\n";
        return kExitConfig;
    }
}
