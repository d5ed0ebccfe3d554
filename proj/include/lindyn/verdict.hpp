#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lindyn {

/// Four-valued classification outcome. "sup = inf" style conditions are only
/// semi-decidable by search, so witnessed and undetermined outcomes are first
/// class; True/False without a search come from closed forms or annotations.
enum class Truth { True, False, WitnessedTrue, Undetermined };

enum class Provenance { exact, witnessed, annotated };

constexpr const char* to_string(Truth v) {
    switch (v) {
        case Truth::True: return "True";
        case Truth::False: return "False";
        case Truth::WitnessedTrue: return "WitnessedTrue";
        default: return "Undetermined";
    }
}

constexpr const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::exact: return "exact";
        case Provenance::witnessed: return "witnessed";
        default: return "annotated";
    }
}

/// Structured evidence: a window product, a side/branch tag, or (q, n) pairs.
/// Window witnesses are reproducible through window_product(w, start, exponent).
struct Witness {
    std::string tag;
    std::optional<std::int64_t> start;
    std::optional<std::int64_t> exponent;
    std::optional<double> log_product;
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    std::string note;
};

struct Verdict {
    Truth value = Truth::Undetermined;
    Provenance provenance = Provenance::witnessed;
    std::optional<Witness> witness;
    std::optional<std::int64_t> horizon;
    std::string detail;
    std::string branch;                // primary branch tag, when meaningful
    std::vector<std::string> branches; // all satisfied branches

    bool truthy() const { return value == Truth::True || value == Truth::WitnessedTrue; }

    static Verdict exact(bool v, std::string detail = "") {
        Verdict r;
        r.value = v ? Truth::True : Truth::False;
        r.provenance = Provenance::exact;
        r.detail = std::move(detail);
        return r;
    }
    static Verdict witnessed_true(Witness w, std::int64_t horizon, std::string detail = "") {
        Verdict r;
        r.value = Truth::WitnessedTrue;
        r.provenance = Provenance::witnessed;
        r.witness = std::move(w);
        r.horizon = horizon;
        r.detail = std::move(detail);
        return r;
    }
    static Verdict undetermined(std::int64_t horizon, std::string detail = "") {
        Verdict r;
        r.value = Truth::Undetermined;
        r.provenance = Provenance::witnessed;
        r.horizon = horizon;
        r.detail = std::move(detail);
        return r;
    }
    static Verdict annotated(bool v, std::string detail = "") {
        Verdict r;
        r.value = v ? Truth::True : Truth::False;
        r.provenance = Provenance::annotated;
        r.detail = std::move(detail);
        return r;
    }
};

} // namespace lindyn
