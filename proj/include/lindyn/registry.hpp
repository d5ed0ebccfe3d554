#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lindyn/weights.hpp"

namespace lindyn {

/// Named weight sequence with a one-line behavioral note. The registry is the
/// shared fixture set: consistency suites sweep it, and configs can name an
/// entry instead of spelling out the description.
struct RegistryEntry {
    std::string name;
    WeightSequence weights;
    std::string note;
};

/// Built once, in a fixed order (suites and reports iterate it).
const std::vector<RegistryEntry>& operator_registry();

/// Lookup by name; throws std::out_of_range listing the valid names.
const WeightSequence& registry_weights(std::string_view name);

} // namespace lindyn
