#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessionforge/judgment.hpp"

namespace sf {

struct Derivation {
    std::string rule;
    Judgment conclusion;
    std::vector<Derivation> premises;

    System system() const { return conclusion.system; }
    std::size_t node_count() const;
    std::size_t height() const;
};

// Raised when an operation requires a valid derivation of a particular shape.
class MalformedDerivation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Same rules and same judgments at every node.
bool same_tree(const Derivation& a, const Derivation& b);

// Fixed arity, or one premise per branch label of the principal type.
constexpr int kPerBranch = -1;

struct RuleSchema {
    std::string name;
    int arity;
    bool star;  // belongs to the rules kept in the system with moves
};

// MixCycle additionally exposes the cycle rules, whose side condition is a
// pluggable predicate that rejects everything by default.
enum class Extension { None, Mix, MixCycle };

// Rule tables. ULL: 30 rules. ULLM: the 18 starred rules plus moveL/moveR.
// ILL: 18. CLL: 13. Mix adds "mix" and "empty" to ULL and CLL.
const std::vector<RuleSchema>& rule_table(System s, Extension ext = Extension::None);
const RuleSchema* find_rule(System s, const std::string& name, Extension ext = Extension::None);
bool is_star_rule(const std::string& ull_name);
bool is_cut_rule(const std::string& name);

// The ULL rule with the same shape as an ILL rule ("id" -> "idR", "copy" -> "copyL").
std::string ill_to_ull_rule(const std::string& ill_name);
std::optional<std::string> ull_to_ill_rule(const std::string& ull_name);

// Path of premise indices from the root.
using NodePath = std::vector<int>;
std::string print_path(const NodePath& p);
const Derivation* node_at(const Derivation& d, const NodePath& p);

// Every rule name used, with its path.
void visit(const Derivation& d, const std::function<void(const Derivation&, const NodePath&)>& f);

}  // namespace sf
