#include "lindyn/registry.hpp"

#include <sstream>
#include <stdexcept>

namespace lindyn {

namespace {

std::vector<RegistryEntry> build_registry() {
    std::vector<RegistryEntry> reg;

    reg.push_back({"theorem_d_2", WeightSequence::theorem_d(2.0),
                   "expanding left tail, contracting right tail; splits at the cut "
                   "although the annulus spectrum covers the circle"});

    {
        // sup-product searches diverge on this one, but only along block
        // subsequences; the bounded-side facts are analytic, not searchable
        WeightSequence w = WeightSequence::doubling_blocks(2.0);
        w.annotate("not_uniformly_expansive", true);
        w.annotate("not_hyperbolic", true);
        w.annotate("not_uniformly_positively_expansive", true);
        reg.push_back({"doubling_2", std::move(w),
                       "geometric blocks of alternating growth; witnessed verdicts only, "
                       "bounded-side facts carried as annotations"});
    }

    reg.push_back({"expansive_pair_half_2", WeightSequence::uniform_expansive_pair(0.5, 2.0),
                   "contracting left tail, expanding right tail; uniformly expansive "
                   "through the split-product branch, yet no invariant splitting"});

    reg.push_back({"expansive_pair_2_3", WeightSequence::uniform_expansive_pair(2.0, 3.0),
                   "both tails expand at different rates; the backward shift built on it "
                   "is supercyclic via the tail-ratio criterion"});

    reg.push_back({"identity_weights", WeightSequence::uniform_expansive_pair(1.0, 1.0),
                   "unweighted shift; every expansivity verdict is exactly False"});

    reg.push_back({"const_2", WeightSequence::uniform_expansive_pair(2.0, 2.0),
                   "uniform expansion; hyperbolic with the whole space unstable"});

    reg.push_back({"const_half", WeightSequence::uniform_expansive_pair(0.5, 0.5),
                   "uniform contraction; hyperbolic with the whole space stable"});

    {
        WeightCore core{0, {Complex(1.0, 0.0)}};
        auto w = WeightSequence::bilateral({Complex(0.5, 0.0)}, core, {Complex(2.0, 0.0)});
        reg.push_back({"hyponormal_step", std::move(w),
                       "weights rise through a unit step; hyponormal and uniformly "
                       "expansive while a unit-modulus weight sits in the core"});
    }

    return reg;
}

} // namespace

const std::vector<RegistryEntry>& operator_registry() {
    static const std::vector<RegistryEntry> reg = build_registry();
    return reg;
}

const WeightSequence& registry_weights(std::string_view name) {
    for (const auto& e : operator_registry())
        if (e.name == name) return e.weights;
    std::ostringstream msg;
    msg << "unknown registry entry '" << name << "'; known:";
    for (const auto& e : operator_registry()) msg << ' ' << e.name;
    throw std::out_of_range(msg.str());
}

} // namespace lindyn
