#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sessionforge/checker.hpp"

namespace sf {

// A move that cannot be pushed into vanilla ULL: it would need a forwarder
// with both endpoints on the right.
class MoveNotEliminable : public std::runtime_error {
public:
    MoveNotEliminable(const std::string& m, NameSet endpoints)
        : std::runtime_error(m), endpoints(std::move(endpoints)) {}
    NameSet endpoints;
};

// Per-rule rewrites from ULL into the starred rules plus moves.
Derivation eliminate_nonstar(const Derivation& d);

// Pushes every move up to the node introducing the moved assignment and
// replaces it there by the rule for the other side.
Derivation eliminate_moves(const Derivation& d);

// G; D |- P :: L  becomes  P |-c ~G; ~D, L.
Derivation to_classical(const Derivation& d);

// P |-c G; D  becomes  ~G; . |- P :: D, in vanilla ULL.
Derivation to_united(const Derivation& d);
// The intermediate ULLM derivation, before moves are eliminated.
Derivation to_united_moves(const Derivation& d);

struct FragmentReport {
    std::size_t max_r_degree = 0;
    std::map<NodePath, std::size_t> r_degree;  // per node
    bool ill_member = false;
    std::optional<NodePath> witness;           // first node outside the fragment
    std::string reason;
};

FragmentReport fragment_report(const Derivation& d);
std::string report_json(const FragmentReport& r);

struct NotInFragment {
    FragmentReport report;
};

std::variant<Derivation, NotInFragment> to_intuitionistic(const Derivation& d);

// Renames ILL rules to their ULL counterparts; the judgments are unchanged.
Derivation from_intuitionistic(const Derivation& d);

enum class DiagnosticKind { NonLocalServer, NonLocalEmptySend };

struct Diagnostic {
    DiagnosticKind kind;
    Name name;
    std::string message;
};

std::string diagnostic_kind_name(DiagnosticKind k);

// Servers and empty sends on a name received by an enclosing input.
std::vector<Diagnostic> locality_diagnose(const Process& p);

}  // namespace sf
