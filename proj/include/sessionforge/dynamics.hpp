#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessionforge/checker.hpp"

namespace sf {

enum class CongAxiom { CutSymm, CutAssocL, CutAssocR };
std::string axiom_name(CongAxiom a);  // "cutSymm", "cutAssocL", "cutAssocR"

enum class StepRule {
    BetaId,
    BetaClose,
    BetaSend,
    BetaSel,
    BetaServ,
    BetaWeaken,
    KappaClose,
    KappaSendR,
    KappaSendL,
    KappaRecv,
    KappaSel,
    KappaBra,
    KappaCopy,      // client request on an unrestricted name other than the cut channel
    KappaSendBoth,  // bound send whose both continuations use the server's channel
};
std::string step_rule_name(StepRule r);  // "betaId", ..., "kappaSendBoth"

struct StepLabel {
    StepRule rule;
    NodePath position;                 // child indices from the root to the restriction
    std::vector<std::string> preamble; // congruence axioms applied before the rule
};

struct Step {
    StepLabel label;
    Process result;
};

// Single-axiom rewrites at every subterm position, both directions of cutAssocR.
std::vector<std::pair<CongAxiom, Process>> congruence_axioms(const Process& p);

// Axiom sequence from p to a term alpha-equal to q, searching at most `budget`
// rewrites deep.
std::optional<std::vector<CongAxiom>> congruent(const Process& p, const Process& q, int budget);

// All one-step reducts, deduplicated up to alpha-equivalence. `mix` lets a
// bare top-level parallel composition reduce on both sides.
std::vector<Step> step(const Process& p, bool mix = false);

// The reduct chosen by following the progress argument on a derivation whose
// root is a cut (possibly below silent !L/?R or moves).
Step find_redex(const Derivation& d);

class FuelExhausted : public std::runtime_error {
public:
    FuelExhausted(const std::string& m, std::vector<Step> trace)
        : std::runtime_error(m), trace(std::move(trace)) {}
    std::vector<Step> trace;
};

class TypePreservationFailure : public std::runtime_error {
public:
    TypePreservationFailure(const std::string& m, std::vector<Step> trace)
        : std::runtime_error(m), trace(std::move(trace)) {}
    std::vector<Step> trace;
};

struct RunResult {
    Process terminal;
    std::vector<Step> trace;
    std::vector<Process> states;  // states[i] is the term before trace[i]
};

// Repeats find_redex until the root is no longer a restriction, re-deriving
// the judgment after every step.
RunResult run_closed(const Derivation& d, int fuel, const InferenceBudget& budget = {});

// One JSON object per step: rule, position, before, after.
std::string trace_jsonl(const RunResult& r);

// Canonical text of p with bound names replaced positionally; equal keys
// iff alpha-equal.
std::string alpha_key(const Process& p);

}  // namespace sf
