#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "lindyn/pseudo.hpp"
#include "lindyn/shadow.hpp"
#include "lindyn/verdict.hpp"

namespace lindyn {

/// Ordered documents keep field order stable, so identical inputs serialize
/// byte-identically.
using Json = nlohmann::ordered_json;

// complex scalars travel as [re, im] pairs
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json space_to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const Json& j);

/// Family-backed sequences serialize as {support, family, params} (the family
/// rule overrides everything else); explicit ones carry their periods and
/// core. Annotations round-trip in both forms.
Json weights_to_json(const WeightSequence& w);
WeightSequence weights_from_json(const Json& j);

/// Row-major nested arrays: matrix[i][j] = [re, im].
Json matrix_to_json(const MatrixOp& a);
MatrixOp matrix_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Json verdict_to_json(const Verdict& v);

/// One operator as read from a config file. "weights" may be a full
/// description object or a registry entry name; "direction" defaults to
/// forward; "space" defaults to l2.
struct OperatorConfig {
    std::string kind; // "shift" | "matrix"
    std::string label;
    SpaceSpec space = SpaceSpec::lp(2.0);
    Direction direction = Direction::forward;
    std::optional<WeightSequence> weights;
    std::optional<MatrixOp> matrix;

    ShiftOperator shift_op() const; // throws unless kind == "shift"
};

OperatorConfig config_from_json(const Json& j);
OperatorConfig load_config(const std::string& path);

/// Vectors serialize as sparse {"index": [re, im]} maps (exact zeros are
/// dropped); point/defect collections as maps keyed by the window index n.
Json pseudotrajectory_to_json(const PseudoTrajectory& pt);
Json pseudotrajectory_to_json(const MatrixPseudoTrajectory& pt);
PseudoTrajectory shift_pseudotrajectory_from_json(const Json& j, const SpaceSpec& space);
MatrixPseudoTrajectory matrix_pseudotrajectory_from_json(const Json& j, int dim);

Json shadow_result_to_json(const ShiftShadowResult& r);
Json shadow_result_to_json(const MatrixShadowResult& r);

/// Columns: n, defect_norm, correction_norm, error. The final row has no
/// defect (defects pair steps, not points); its cell stays empty. Numbers
/// print with %.17g so the file round-trips doubles. correction_norm is
/// recomputed from the correction vector, error is the solver's figure; the
/// two agreeing is a consistency check on the artifact.
void write_shadow_csv(std::ostream& os, const SpaceSpec& space, const PseudoTrajectory& pt,
                      const ShiftShadowResult& r);
void write_shadow_csv(std::ostream& os, const MatrixPseudoTrajectory& pt,
                      const MatrixShadowResult& r);

} // namespace lindyn
