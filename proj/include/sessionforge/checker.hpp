#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sessionforge/derivation.hpp"

namespace sf {

// Side condition of the cycle rules: premise judgment and the two connected names.
using CyclePredicate = std::function<bool(const Judgment&, const Name&, const Name&)>;

struct CheckerConfig {
    Extension extension = Extension::None;
    CyclePredicate cycle_phi = [](const Judgment&, const Name&, const Name&) { return false; };
};

CheckerConfig set_extension(Extension mode);

struct CheckResult {
    bool ok = true;
    NodePath path;
    std::string rule;
    std::string explanation;

    explicit operator bool() const { return ok; }
    std::string message() const;
};

CheckResult check_derivation(const Derivation& d, const CheckerConfig& cfg = {});

struct InferenceBudget {
    int max_depth = 64;
    long max_steps = 200000;        // search nodes visited before giving up
    std::vector<Type> universe;     // cut types for unannotated restrictions
};

struct NotFound {
    std::string reason;
    std::string frontier;  // deepest failing goal
    bool budget_exhausted = false;
};

struct AnnotationRequired {
    Name restriction;
};

using InferResult = std::variant<Derivation, NotFound, AnnotationRequired>;

InferResult infer(const Judgment& goal, const InferenceBudget& budget = {},
                  const CheckerConfig& cfg = {});

// Every derivation of the goal, distinct as trees, up to `limit`.
std::vector<Derivation> infer_every(const Judgment& goal, const InferenceBudget& budget,
                                    const CheckerConfig& cfg = {}, std::size_t limit = 64);

// Every judgment for `process` with gamma empty whose linear regions assign each
// free name a universe type on one side, together with its derivations. For ILL
// the right region is a single free name. Results are distinct derivation trees.
std::vector<std::pair<Judgment, Derivation>> infer_all(const Process& process, System system,
                                                       const InferenceBudget& budget,
                                                       const CheckerConfig& cfg = {});

// Harvests annotation types and their subterms and duals.
std::vector<Type> harvest_types(const Process& p);

}  // namespace sf
