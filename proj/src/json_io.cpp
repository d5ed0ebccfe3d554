#include "lindyn/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "lindyn/registry.hpp"

namespace lindyn {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::int64_t parse_index(const std::string& key) {
    std::size_t pos = 0;
    std::int64_t n = 0;
    try {
        n = std::stoll(key, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("index key is not an integer: \"" + key + "\"");
    }
    if (pos != key.size())
        throw std::invalid_argument("index key is not an integer: \"" + key + "\"");
    return n;
}

Json complex_list(const std::vector<Complex>& v) {
    Json a = Json::array();
    for (const Complex& z : v) a.push_back(complex_to_json(z));
    return a;
}

std::vector<Complex> complex_list_from(const Json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    std::vector<Complex> v;
    v.reserve(j.size());
    for (const Json& e : j) v.push_back(complex_from_json(e));
    return v;
}

Json vec_to_json(const BiVector& v) {
    Json m = Json::object();
    for (const auto& [i, z] : v.entries()) m[std::to_string(i)] = complex_to_json(z);
    return m;
}

Json vec_to_json(const Eigen::VectorXcd& v) {
    Json m = Json::object();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != Complex(0.0, 0.0)) m[std::to_string(i)] = complex_to_json(v[i]);
    return m;
}

BiVector bivector_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("a vector must be an {index: [re, im]} map");
    BiVector v;
    for (const auto& [key, val] : j.items()) v.set(parse_index(key), complex_from_json(val));
    return v;
}

Eigen::VectorXcd dense_from_json(const Json& j, int dim) {
    if (!j.is_object()) throw std::invalid_argument("a vector must be an {index: [re, im]} map");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (const auto& [key, val] : j.items()) {
        std::int64_t i = parse_index(key);
        if (i < 0 || i >= dim)
            throw std::invalid_argument("vector coordinate " + key + " is outside dimension " +
                                        std::to_string(dim));
        v[static_cast<Eigen::Index>(i)] = complex_from_json(val);
    }
    return v;
}

const char* family_name(WeightFamily f) {
    switch (f) {
        case WeightFamily::doubling_blocks: return "doubling_blocks";
        case WeightFamily::theorem_d: return "theorem_d";
        case WeightFamily::uniform_expansive_pair: return "uniform_expansive_pair";
        default: return "none";
    }
}

WeightSequence family_from_json(const Json& j) {
    const std::string name = j.at("family").get<std::string>();
    std::vector<double> params;
    if (j.contains("params")) {
        for (const Json& e : j.at("params")) params.push_back(e.get<double>());
    }
    auto want = [&](std::size_t k) {
        if (params.size() != k)
            throw std::invalid_argument("family \"" + name + "\" takes " + std::to_string(k) +
                                        " parameter(s), got " + std::to_string(params.size()));
    };
    if (name == "doubling_blocks") {
        want(1);
        return WeightSequence::doubling_blocks(params[0]);
    }
    if (name == "theorem_d") {
        want(1);
        return WeightSequence::theorem_d(params[0]);
    }
    if (name == "uniform_expansive_pair") {
        want(2);
        return WeightSequence::uniform_expansive_pair(params[0], params[1]);
    }
    throw std::invalid_argument("unknown weight family \"" + name + "\"");
}

template <class Vec>
Json pt_to_json(const PseudoTrajectoryT<Vec>& pt) {
    Json j = Json::object();
    j["window"] = Json::array({pt.n_min, pt.n_max});
    j["delta"] = pt.delta;
    Json points = Json::object();
    for (std::size_t i = 0; i < pt.points.size(); ++i)
        points[std::to_string(pt.n_min + static_cast<std::int64_t>(i))] = vec_to_json(pt.points[i]);
    j["points"] = std::move(points);
    Json defects = Json::object();
    for (std::size_t i = 0; i < pt.defects.size(); ++i)
        defects[std::to_string(pt.n_min + static_cast<std::int64_t>(i))] =
            vec_to_json(pt.defects[i]);
    j["defects"] = std::move(defects);
    return j;
}

/// Shared window/shape parsing; the caller fills points and defects from the
/// returned maps (vector decoding differs between the two trajectory kinds).
struct PtShape {
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    const Json* points = nullptr;
    const Json* defects = nullptr;
};

PtShape pt_shape_from_json(const Json& j) {
    const Json& win = j.at("window");
    if (!win.is_array() || win.size() != 2)
        throw std::invalid_argument("\"window\" must be [n_min, n_max]");
    PtShape s;
    s.n_min = win[0].get<std::int64_t>();
    s.n_max = win[1].get<std::int64_t>();
    if (s.n_max < s.n_min) throw std::invalid_argument("window has n_max < n_min");
    s.points = &j.at("points");
    s.defects = &j.at("defects");
    if (!s.points->is_object() || !s.defects->is_object())
        throw std::invalid_argument("\"points\" and \"defects\" must be {n: vector} maps");
    return s;
}

std::size_t slot_of(const std::string& key, std::int64_t n_min, std::int64_t n_max, bool is_defect) {
    std::int64_t n = parse_index(key);
    std::int64_t hi = is_defect ? n_max - 1 : n_max;
    if (n < n_min || n > hi)
        throw std::invalid_argument("trajectory index " + key + " is outside the window");
    return static_cast<std::size_t>(n - n_min);
}

template <class Vec>
Json result_to_json(const ShadowResultT<Vec>& r) {
    Json j = Json::object();
    j["window"] = Json::array({r.n_min, r.n_max});
    j["bound_k"] = r.bound_k;
    j["truncation_tol"] = r.truncation_tol;
    j["sup_error"] = r.sup_error;
    j["recurrence_residual"] = r.recurrence_residual;
    j["certified"] = r.certified;
    j["base_point"] = vec_to_json(r.base_point);
    Json corrections = Json::object();
    Json errors = Json::object();
    for (std::size_t i = 0; i < r.corrections.size(); ++i) {
        std::string key = std::to_string(r.n_min + static_cast<std::int64_t>(i));
        corrections[key] = vec_to_json(r.corrections[i]);
        errors[key] = r.errors[i];
    }
    j["corrections"] = std::move(corrections);
    j["errors"] = std::move(errors);
    return j;
}

template <class Pt, class Res, class NormFn>
void csv_rows(std::ostream& os, const Pt& pt, const Res& r, NormFn&& correction_norm) {
    os << "n,defect_norm,correction_norm,error\n";
    if (pt.n_min != r.n_min || pt.n_max != r.n_max)
        throw std::invalid_argument("trajectory and shadow result cover different windows");
    for (std::size_t i = 0; i < r.corrections.size(); ++i) {
        os << (r.n_min + static_cast<std::int64_t>(i)) << ',';
        if (i < pt.defect_norms.size()) os << fmt17(pt.defect_norms[i]);
        os << ',' << fmt17(correction_norm(r.corrections[i])) << ',' << fmt17(r.errors[i])
           << '\n';
    }
}

} // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("a complex scalar must be [re, im] (or a bare real number)");
}

Json space_to_json(const SpaceSpec& s) {
    Json j = Json::object();
    if (s.is_lp()) {
        j["kind"] = "lp";
        j["p"] = s.p;
    } else {
        j["kind"] = "c0";
    }
    return j;
}

SpaceSpec space_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "c0") return SpaceSpec::c0();
    if (kind == "lp") return SpaceSpec::lp(j.value("p", 2.0));
    throw std::invalid_argument("space kind must be \"lp\" or \"c0\", got \"" + kind + "\"");
}

Json weights_to_json(const WeightSequence& w) {
    Json j = Json::object();
    j["support"] = w.support() == Support::bilateral ? "bilateral" : "unilateral";
    if (w.family() != WeightFamily::none) {
        j["family"] = family_name(w.family());
        j["params"] = w.family_params();
    } else {
        if (w.has_left_tail()) j["left_period"] = complex_list(w.left_period());
        Json core = Json::object();
        core["start_index"] = w.core().start_index;
        core["values"] = complex_list(w.core().values);
        j["core"] = std::move(core);
        j["right_period"] = complex_list(w.right_period());
    }
    if (!w.annotations().empty()) {
        Json ann = Json::object();
        for (const auto& [key, value] : w.annotations()) ann[key] = value;
        j["annotations"] = std::move(ann);
    }
    return j;
}

WeightSequence weights_from_json(const Json& j) {
    if (j.is_string()) return registry_weights(j.get<std::string>());
    if (!j.is_object()) throw std::invalid_argument("weights must be an object or a registry name");

    WeightSequence w = [&] {
        if (j.contains("family")) {
            if (j.value("support", "bilateral") != std::string("bilateral"))
                throw std::invalid_argument("family weight sequences are bilateral");
            return family_from_json(j);
        }
        const std::string support = j.at("support").get<std::string>();
        bool bilateral = support == "bilateral";
        if (!bilateral && support != "unilateral")
            throw std::invalid_argument("support must be \"bilateral\" or \"unilateral\"");

        WeightCore core;
        core.start_index = bilateral ? 0 : 1;
        if (j.contains("core")) {
            const Json& c = j.at("core");
            core.start_index = c.value("start_index", core.start_index);
            if (c.contains("values")) core.values = complex_list_from(c.at("values"), "core.values");
        }
        std::vector<Complex> right;
        if (j.contains("right_period")) right = complex_list_from(j.at("right_period"), "right_period");
        if (!bilateral) return WeightSequence::unilateral(std::move(core), std::move(right));
        std::vector<Complex> left;
        if (j.contains("left_period")) left = complex_list_from(j.at("left_period"), "left_period");
        return WeightSequence::bilateral(std::move(left), std::move(core), std::move(right));
    }();

    if (j.contains("annotations")) {
        const Json& ann = j.at("annotations");
        if (!ann.is_object()) throw std::invalid_argument("annotations must be a {key: bool} map");
        for (const auto& [key, value] : ann.items()) w.annotate(key, value.get<bool>());
    }
    return w;
}

Json matrix_to_json(const MatrixOp& a) {
    Json rows = Json::array();
    const Eigen::MatrixXcd& m = a.entries();
    for (int i = 0; i < a.dim(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < a.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixOp matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("a matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw std::invalid_argument("matrix rows must all have the matrix dimension");
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return MatrixOp(std::move(m));
}

Json witness_to_json(const Witness& w) {
    Json j = Json::object();
    j["tag"] = w.tag;
    if (w.start) j["start"] = *w.start;
    if (w.exponent) j["exponent"] = *w.exponent;
    if (w.log_product) j["log_product"] = *w.log_product;
    if (!w.pairs.empty()) {
        Json pairs = Json::array();
        for (const auto& [q, n] : w.pairs) pairs.push_back(Json::array({q, n}));
        j["pairs"] = std::move(pairs);
    }
    if (!w.note.empty()) j["note"] = w.note;
    return j;
}

Json verdict_to_json(const Verdict& v) {
    Json j = Json::object();
    j["value"] = to_string(v.value);
    j["provenance"] = to_string(v.provenance);
    if (v.witness) j["witness"] = witness_to_json(*v.witness);
    if (v.horizon) j["horizon"] = *v.horizon;
    if (!v.branch.empty()) j["branch"] = v.branch;
    if (!v.branches.empty()) j["branches"] = v.branches;
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

ShiftOperator OperatorConfig::shift_op() const {
    if (kind != "shift" || !weights)
        throw std::invalid_argument("the config does not describe a shift operator");
    return ShiftOperator{*weights, direction, space};
}

OperatorConfig config_from_json(const Json& j) {
    OperatorConfig c;
    c.kind = j.at("kind").get<std::string>();
    if (c.kind != "shift" && c.kind != "matrix")
        throw std::invalid_argument("config kind must be \"shift\" or \"matrix\", got \"" +
                                    c.kind + "\"");
    c.label = j.value("label", std::string{});
    if (j.contains("space")) c.space = space_from_json(j.at("space"));

    if (c.kind == "shift") {
        const Json& w = j.at("weights");
        c.weights = weights_from_json(w);
        if (c.label.empty() && w.is_string()) c.label = w.get<std::string>();
        const std::string dir = j.value("direction", "forward");
        if (dir == "forward")
            c.direction = Direction::forward;
        else if (dir == "backward")
            c.direction = Direction::backward;
        else
            throw std::invalid_argument("direction must be \"forward\" or \"backward\", got \"" +
                                        dir + "\"");
    } else {
        c.matrix = matrix_from_json(j.at("matrix"));
    }
    if (c.label.empty()) c.label = c.kind;
    return c;
}

OperatorConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return config_from_json(Json::parse(in));
}

Json pseudotrajectory_to_json(const PseudoTrajectory& pt) { return pt_to_json(pt); }
Json pseudotrajectory_to_json(const MatrixPseudoTrajectory& pt) { return pt_to_json(pt); }

PseudoTrajectory shift_pseudotrajectory_from_json(const Json& j, const SpaceSpec& space) {
    PtShape s = pt_shape_from_json(j);
    PseudoTrajectory pt;
    pt.n_min = s.n_min;
    pt.n_max = s.n_max;
    pt.points.resize(static_cast<std::size_t>(s.n_max - s.n_min + 1));
    pt.defects.resize(pt.points.size() - 1);
    for (const auto& [key, val] : s.points->items())
        pt.points[slot_of(key, s.n_min, s.n_max, false)] = bivector_from_json(val);
    for (const auto& [key, val] : s.defects->items())
        pt.defects[slot_of(key, s.n_min, s.n_max, true)] = bivector_from_json(val);
    // norms and delta are derived data; recompute rather than trust the file
    pt.defect_norms.reserve(pt.defects.size());
    for (const BiVector& z : pt.defects) {
        pt.defect_norms.push_back(vector_norm(z, space));
        pt.delta = std::max(pt.delta, pt.defect_norms.back());
    }
    return pt;
}

MatrixPseudoTrajectory matrix_pseudotrajectory_from_json(const Json& j, int dim) {
    PtShape s = pt_shape_from_json(j);
    MatrixPseudoTrajectory pt;
    pt.n_min = s.n_min;
    pt.n_max = s.n_max;
    pt.points.assign(static_cast<std::size_t>(s.n_max - s.n_min + 1),
                     Eigen::VectorXcd::Zero(dim));
    pt.defects.assign(pt.points.size() - 1, Eigen::VectorXcd::Zero(dim));
    for (const auto& [key, val] : s.points->items())
        pt.points[slot_of(key, s.n_min, s.n_max, false)] = dense_from_json(val, dim);
    for (const auto& [key, val] : s.defects->items())
        pt.defects[slot_of(key, s.n_min, s.n_max, true)] = dense_from_json(val, dim);
    pt.defect_norms.reserve(pt.defects.size());
    for (const Eigen::VectorXcd& z : pt.defects) {
        pt.defect_norms.push_back(z.norm());
        pt.delta = std::max(pt.delta, pt.defect_norms.back());
    }
    return pt;
}

Json shadow_result_to_json(const ShiftShadowResult& r) { return result_to_json(r); }
Json shadow_result_to_json(const MatrixShadowResult& r) { return result_to_json(r); }

void write_shadow_csv(std::ostream& os, const SpaceSpec& space, const PseudoTrajectory& pt,
                      const ShiftShadowResult& r) {
    csv_rows(os, pt, r, [&](const BiVector& y) { return vector_norm(y, space); });
}

void write_shadow_csv(std::ostream& os, const MatrixPseudoTrajectory& pt,
                      const MatrixShadowResult& r) {
    csv_rows(os, pt, r, [](const Eigen::VectorXcd& y) { return y.norm(); });
}

} // namespace lindyn
