// Python bindings for the operator toolkit: weight sequences, classifiers,
// splittings, the shadow solver, and the matrix lab. Verdict truth values
// and provenance cross the boundary as the same strings the CLI reports.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lindyn/classifier.hpp"
#include "lindyn/matrix.hpp"
#include "lindyn/pseudo.hpp"
#include "lindyn/registry.hpp"
#include "lindyn/shadow.hpp"
#include "lindyn/splitting.hpp"

namespace py = pybind11;
using namespace lindyn;

namespace {

CounterexampleMode mode_from_string(const std::string& s) {
    if (s == "lp") return CounterexampleMode::lp;
    if (s == "l1") return CounterexampleMode::l1;
    if (s == "positive") return CounterexampleMode::positive;
    throw std::invalid_argument("mode must be one of lp, l1, positive");
}

const char* mode_name(CounterexampleMode m) {
    switch (m) {
        case CounterexampleMode::lp: return "lp";
        case CounterexampleMode::l1: return "l1";
        default: return "positive";
    }
}

template <class PT>
void bind_pseudotrajectory(py::module_& m, const char* name) {
    py::class_<PT>(m, name)
        .def_readonly("n_min", &PT::n_min)
        .def_readonly("n_max", &PT::n_max)
        .def_readonly("delta", &PT::delta)
        .def_readonly("defect_norms", &PT::defect_norms)
        .def("point", &PT::point, py::arg("n"), py::return_value_policy::reference_internal)
        .def("defect", &PT::defect, py::arg("n"), py::return_value_policy::reference_internal)
        .def("__len__", [](const PT& pt) { return pt.points.size(); });
}

template <class R>
void bind_shadow_result(py::module_& m, const char* name) {
    py::class_<R>(m, name)
        .def_readonly("n_min", &R::n_min)
        .def_readonly("n_max", &R::n_max)
        .def_readonly("bound_k", &R::bound_k)
        .def_readonly("truncation_tol", &R::truncation_tol)
        .def_readonly("sup_error", &R::sup_error)
        .def_readonly("recurrence_residual", &R::recurrence_residual)
        .def_readonly("certified", &R::certified)
        .def_readonly("errors", &R::errors)
        .def_readonly("base_point", &R::base_point)
        .def("correction", &R::correction, py::arg("n"),
             py::return_value_policy::reference_internal)
        .def("error", &R::error, py::arg("n"));
}

} // namespace

PYBIND11_MODULE(_lindyn, m) {
    m.doc() = "Expansivity classifiers and shadowing certificates for weighted "
              "shifts and matrices";

    py::enum_<Direction>(m, "Direction")
        .value("forward", Direction::forward)
        .value("backward", Direction::backward);

    py::class_<SpaceSpec>(m, "SpaceSpec")
        .def_static("lp", &SpaceSpec::lp, py::arg("p"))
        .def_static("c0", &SpaceSpec::c0)
        .def("is_lp", &SpaceSpec::is_lp)
        .def_readonly("p", &SpaceSpec::p)
        .def("__repr__", [](const SpaceSpec& s) {
            return s.is_lp() ? "SpaceSpec.lp(" + std::to_string(s.p) + ")" : "SpaceSpec.c0()";
        });

    py::class_<Witness>(m, "Witness")
        .def_readonly("tag", &Witness::tag)
        .def_readonly("exponent", &Witness::exponent)
        .def_readonly("log_product", &Witness::log_product)
        .def_readonly("pairs", &Witness::pairs)
        .def_readonly("start", &Witness::start)
        .def_readonly("note", &Witness::note);

    py::class_<Verdict>(m, "Verdict")
        .def_property_readonly("value",
                               [](const Verdict& v) { return std::string(to_string(v.value)); })
        .def_property_readonly(
            "provenance", [](const Verdict& v) { return std::string(to_string(v.provenance)); })
        .def_readonly("branch", &Verdict::branch)
        .def_readonly("branches", &Verdict::branches)
        .def_readonly("detail", &Verdict::detail)
        .def_readonly("horizon", &Verdict::horizon)
        .def_readonly("witness", &Verdict::witness)
        .def("truthy", &Verdict::truthy)
        .def("__bool__", &Verdict::truthy)
        .def("__repr__", [](const Verdict& v) {
            std::string r = std::string("Verdict(") + to_string(v.value) + ", " +
                            to_string(v.provenance);
            if (!v.branch.empty()) r += ", branch=" + v.branch;
            return r + ")";
        });

    py::class_<WeightSequence>(m, "WeightSequence")
        .def_static("theorem_d", &WeightSequence::theorem_d, py::arg("alpha"))
        .def_static("doubling_blocks", &WeightSequence::doubling_blocks, py::arg("t"))
        .def_static("uniform_expansive_pair", &WeightSequence::uniform_expansive_pair,
                    py::arg("mu_left"), py::arg("mu_right"))
        .def("weight_at", &WeightSequence::weight_at, py::arg("n"))
        .def("invertible", &WeightSequence::invertible)
        .def("has_periodic_tails", &WeightSequence::has_periodic_tails)
        .def("annotated", &WeightSequence::annotated, py::arg("tag"));

    m.def("registry_weights", &registry_weights, py::arg("name"),
          "Named weight sequence; raises KeyError semantics via ValueError listing valid names");
    m.def("registry_names", [] {
        std::vector<std::string> names;
        for (const auto& e : operator_registry()) names.push_back(e.name);
        return names;
    });

    py::class_<BiVector>(m, "BiVector")
        .def(py::init<>())
        .def_static("basis", &BiVector::basis, py::arg("j"))
        .def("set", &BiVector::set, py::arg("j"), py::arg("value"))
        .def("at", &BiVector::at, py::arg("j"))
        .def("entries",
             [](const BiVector& x) {
                 std::map<std::int64_t, Complex> out;
                 for (const auto& [j, v] : x.entries()) out[j] = v;
                 return out;
             })
        .def("__len__", [](const BiVector& x) { return x.entries().size(); });
    m.def("vector_norm", &vector_norm, py::arg("x"), py::arg("space"));

    py::class_<ShiftOperator>(m, "ShiftOperator")
        .def(py::init([](WeightSequence w, Direction d, SpaceSpec s) {
                 return ShiftOperator{std::move(w), d, s};
             }),
             py::arg("weights"), py::arg("direction") = Direction::forward,
             py::arg("space") = SpaceSpec::lp(2.0))
        .def_readonly("weights", &ShiftOperator::weights)
        .def_readonly("direction", &ShiftOperator::direction)
        .def_readonly("space", &ShiftOperator::space);

    m.def(
        "orbit_norms",
        [](const WeightSequence& w, const BiVector& x, const SpaceSpec& space, std::int64_t n_min,
           std::int64_t n_max, Direction dir) {
            std::vector<std::pair<std::int64_t, double>> out;
            for (const auto& [n, mag] : orbit_norms(w, x, space, n_min, n_max, dir))
                out.emplace_back(n, mag.value());
            return out;
        },
        py::arg("weights"), py::arg("x"), py::arg("space"), py::arg("n_min"), py::arg("n_max"),
        py::arg("direction") = Direction::forward);

    py::class_<ClassifierConfig>(m, "ClassifierConfig")
        .def(py::init<>())
        .def_readwrite("horizon", &ClassifierConfig::horizon)
        .def_readwrite("threshold_c", &ClassifierConfig::threshold_c)
        .def_readwrite("gm_tolerance", &ClassifierConfig::gm_tolerance)
        .def_readwrite("q_max", &ClassifierConfig::q_max)
        .def_readwrite("eta", &ClassifierConfig::eta)
        .def_readwrite("probe_floor", &ClassifierConfig::probe_floor)
        .def_readwrite("probe_ceiling", &ClassifierConfig::probe_ceiling)
        .def_readwrite("probe_horizon", &ClassifierConfig::probe_horizon)
        .def_readwrite("fhc_j_max", &ClassifierConfig::fhc_j_max);

    m.def("classify_expansive_forward", &classify_expansive_forward, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});
    m.def("classify_uniformly_expansive_forward", &classify_uniformly_expansive_forward,
          py::arg("weights"), py::arg("config") = ClassifierConfig{});
    m.def("classify_positively_expansive", &classify_positively_expansive, py::arg("weights"),
          py::arg("config") = ClassifierConfig{}, py::arg("direction") = Direction::forward,
          py::arg("inverse") = false);
    m.def("classify_uniformly_positively_expansive", &classify_uniformly_positively_expansive,
          py::arg("weights"), py::arg("config") = ClassifierConfig{},
          py::arg("direction") = Direction::forward, py::arg("inverse") = false);
    m.def("is_hyperbolic_shift", &is_hyperbolic_shift, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});
    m.def("hypercyclicity_check", &hypercyclicity_check, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});
    m.def("supercyclicity_check", &supercyclicity_check, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});
    m.def(
        "supercyclicity_ratio",
        [](const WeightSequence& w, std::int64_t n, std::int64_t q) {
            return supercyclicity_ratio(w, n, q).value();
        },
        py::arg("weights"), py::arg("n"), py::arg("q"));
    m.def("frequent_hc_check", &frequent_hc_check, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});
    m.def("ne0_growth_probe", &ne0_growth_probe, py::arg("weights"),
          py::arg("config") = ClassifierConfig{});

    py::class_<IrregularWitness>(m, "IrregularWitness")
        .def_readonly("candidate", &IrregularWitness::candidate)
        .def_readonly("n_low", &IrregularWitness::n_low)
        .def_readonly("log_norm_low", &IrregularWitness::log_norm_low)
        .def_readonly("n_high", &IrregularWitness::n_high)
        .def_readonly("log_norm_high", &IrregularWitness::log_norm_high);
    m.def("irregular_vector_probe",
          py::overload_cast<const WeightSequence&, Direction, const std::vector<BiVector>&,
                            const SpaceSpec&, const ClassifierConfig&>(&irregular_vector_probe),
          py::arg("weights"), py::arg("direction"), py::arg("candidates"), py::arg("space"),
          py::arg("config") = ClassifierConfig{});
    m.def("irregular_vector_probe",
          py::overload_cast<const MatrixOp&, const std::vector<Eigen::VectorXcd>&,
                            const ClassifierConfig&>(&irregular_vector_probe),
          py::arg("matrix"), py::arg("candidates"), py::arg("config") = ClassifierConfig{});

    py::class_<Splitting>(m, "Splitting")
        .def_readonly("cut", &Splitting::cut)
        .def_readonly("stable_upper", &Splitting::stable_upper)
        .def_readonly("beta", &Splitting::beta)
        .def_readonly("big_c", &Splitting::big_c)
        .def_readonly("t", &Splitting::t)
        .def_readonly("detail", &Splitting::detail)
        .def("stable_is_everything", &Splitting::stable_is_everything)
        .def("stable_is_nothing", &Splitting::stable_is_nothing);
    m.def("build_splitting",
          py::overload_cast<const ShiftOperator&, const ClassifierConfig&>(&build_splitting),
          py::arg("op"), py::arg("config") = ClassifierConfig{});
    m.def("build_splitting", py::overload_cast<const MatrixOp&>(&build_splitting), py::arg("a"));
    m.def("shadow_constant", &shadow_constant, py::arg("splitting"));

    bind_pseudotrajectory<PseudoTrajectory>(m, "PseudoTrajectory");
    bind_pseudotrajectory<MatrixPseudoTrajectory>(m, "MatrixPseudoTrajectory");
    m.def("generate_pseudotrajectory",
          py::overload_cast<const ShiftOperator&, const BiVector&, double, std::int64_t,
                            std::int64_t, std::uint64_t, std::int64_t>(&generate_pseudotrajectory),
          py::arg("op"), py::arg("x0"), py::arg("delta"), py::arg("n_min"), py::arg("n_max"),
          py::arg("seed"), py::arg("band") = 4);
    m.def("generate_pseudotrajectory",
          py::overload_cast<const MatrixOp&, const Eigen::VectorXcd&, double, std::int64_t,
                            std::int64_t, std::uint64_t>(&generate_pseudotrajectory),
          py::arg("a"), py::arg("x0"), py::arg("delta"), py::arg("n_min"), py::arg("n_max"),
          py::arg("seed"));
    m.def("rescale_defects",
          py::overload_cast<const ShiftOperator&, const PseudoTrajectory&, double>(
              &rescale_defects),
          py::arg("op"), py::arg("pt"), py::arg("s"));
    m.def("rescale_defects",
          py::overload_cast<const MatrixOp&, const MatrixPseudoTrajectory&, double>(
              &rescale_defects),
          py::arg("a"), py::arg("pt"), py::arg("s"));

    bind_shadow_result<ShiftShadowResult>(m, "ShiftShadowResult");
    bind_shadow_result<MatrixShadowResult>(m, "MatrixShadowResult");
    m.def("shadow",
          py::overload_cast<const ShiftOperator&, const Splitting&, const PseudoTrajectory&,
                            double>(&shadow),
          py::arg("op"), py::arg("splitting"), py::arg("pt"), py::arg("tol"));
    m.def("shadow",
          py::overload_cast<const MatrixOp&, const Splitting&, const MatrixPseudoTrajectory&,
                            double>(&shadow),
          py::arg("a"), py::arg("splitting"), py::arg("pt"), py::arg("tol"));

    py::class_<MatrixOp>(m, "MatrixOp")
        .def(py::init([](const Eigen::MatrixXcd& entries) { return MatrixOp(entries); }),
             py::arg("entries"))
        .def_static(
            "diagonal",
            [](const std::vector<Complex>& d) { return MatrixOp::diagonal(d); },
            py::arg("diag"))
        .def_static(
            "jordan_block",
            [](Complex lambda, int dim) { return MatrixOp::jordan_block(lambda, dim); },
            py::arg("eigenvalue"), py::arg("dim"))
        .def_static(
            "rotation", [](double theta) { return MatrixOp::rotation(theta); }, py::arg("theta"))
        .def_static(
            "identity", [](int dim) { return MatrixOp::identity(dim); }, py::arg("dim"))
        .def_property_readonly("entries", &MatrixOp::entries)
        .def("is_normal", &MatrixOp::is_normal);

    py::class_<NormalExpansivityReport>(m, "NormalExpansivityReport")
        .def_readonly("expansive", &NormalExpansivityReport::expansive)
        .def_readonly("positively_expansive", &NormalExpansivityReport::positively_expansive)
        .def_readonly("uniformly_positively_expansive",
                      &NormalExpansivityReport::uniformly_positively_expansive)
        .def_readonly("uniformly_expansive", &NormalExpansivityReport::uniformly_expansive);
    m.def("normal_expansive", &normal_expansive, py::arg("a"));
    m.def("is_hyperbolic_matrix", py::overload_cast<const MatrixOp&>(&is_hyperbolic_matrix),
          py::arg("a"));

    py::class_<RefutationCertificate>(m, "RefutationCertificate")
        .def_property_readonly("eigenvalue",
                               [](const RefutationCertificate& r) { return r.lambda; })
        .def_readonly("direction", &RefutationCertificate::direction)
        .def_readonly("residual", &RefutationCertificate::residual)
        .def_readonly("window", &RefutationCertificate::window)
        .def_readonly("two_sided", &RefutationCertificate::two_sided)
        .def_readonly("defect_sup", &RefutationCertificate::defect_sup)
        .def_readonly("lower_bound", &RefutationCertificate::lower_bound)
        .def_readonly("detail", &RefutationCertificate::detail);
    m.def("refute_shadowing", &refute_shadowing, py::arg("a"), py::arg("window"),
          py::arg("two_sided") = true);

    py::class_<CounterexampleCertificate>(m, "CounterexampleCertificate")
        .def_property_readonly(
            "mode", [](const CounterexampleCertificate& c) { return std::string(mode_name(c.mode)); })
        .def_readonly("p", &CounterexampleCertificate::p)
        .def_readonly("delta", &CounterexampleCertificate::delta)
        .def_readonly("pivot", &CounterexampleCertificate::pivot)
        .def_property_readonly("eigenvalue",
                               [](const CounterexampleCertificate& c) { return c.lambda; })
        .def_readonly("defect_norms", &CounterexampleCertificate::defect_norms)
        .def_readonly("pivot_drift", &CounterexampleCertificate::pivot_drift)
        .def_readonly("defect_power_sum", &CounterexampleCertificate::defect_power_sum)
        .def_readonly("defect_sup", &CounterexampleCertificate::defect_sup)
        .def_readonly("divergence_minimax", &CounterexampleCertificate::divergence_minimax)
        .def_readonly("detail", &CounterexampleCertificate::detail);
    m.def(
        "fd1_counterexample",
        [](const MatrixOp& a, const std::string& mode, std::int64_t window, double p,
           double delta) { return fd1_counterexample(a, mode_from_string(mode), window, p, delta); },
        py::arg("a"), py::arg("mode"), py::arg("window"), py::arg("p") = 2.0,
        py::arg("delta") = 0.1);

    py::class_<ShadowRunSummary>(m, "ShadowRunSummary")
        .def_readonly("bound_k", &ShadowRunSummary::bound_k)
        .def_readonly("delta", &ShadowRunSummary::delta)
        .def_readonly("sup_error", &ShadowRunSummary::sup_error)
        .def_readonly("tol", &ShadowRunSummary::tol)
        .def_readonly("certified", &ShadowRunSummary::certified)
        .def_readonly("window", &ShadowRunSummary::window)
        .def_readonly("seed", &ShadowRunSummary::seed);
    py::class_<NormalShadowingDecision>(m, "NormalShadowingDecision")
        .def_readonly("verdict", &NormalShadowingDecision::verdict)
        .def_readonly("certificate", &NormalShadowingDecision::certificate)
        .def_readonly("refutation", &NormalShadowingDecision::refutation);
    m.def("positive_shadowing_decision_normal", &positive_shadowing_decision_normal, py::arg("a"),
          py::arg("window") = 100, py::arg("seed") = 1);

#ifdef LINDYN_VERSION_INFO
    m.attr("__version__") = LINDYN_VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
