#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sessionforge/process.hpp"
#include "sessionforge/types.hpp"

namespace sf {

enum class System { ULL, ULLM, ILL, CLL };

std::string system_name(System s);               // "ull", "ullm", "ill", "cll"
std::optional<System> parse_system(const std::string& s);

// Ordered assignment list. Equality ignores order.
class Context {
public:
    using Entry = std::pair<Name, Type>;

    Context() = default;
    Context(std::initializer_list<Entry> es);

    const std::vector<Entry>& entries() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    bool has(const Name& n) const;
    const Type* find(const Name& n) const;

    // Appends; returns false on a duplicate name.
    bool add(const Name& n, const Type& t);
    Context with(const Name& n, const Type& t) const;
    Context without(const Name& n) const;
    Context dualized() const;
    NameSet names() const;

    friend bool operator==(const Context& a, const Context& b);
    friend bool operator!=(const Context& a, const Context& b) { return !(a == b); }

private:
    std::vector<Entry> items_;
};

// Disjoint union; nullopt if a name occurs in both.
std::optional<Context> merge(const Context& a, const Context& b);

// Two-sided for ULL/ULLM/ILL (gamma; delta |- P :: lambda), one-sided for
// CLL (P |-c gamma; delta) where lambda stays empty.
struct Judgment {
    System system = System::ULL;
    Context gamma, delta, lambda;
    Process process;

    static Judgment ull(Context g, Context d, Process p, Context l, System s = System::ULL);
    static Judgment cll(Process p, Context g, Context d);

    std::size_t r_degree() const { return lambda.size(); }
};

// Same system, same contexts as sets, alpha-equal processes.
bool same_judgment(const Judgment& a, const Judgment& b);

// Contexts equal as sets and processes alpha-equal, ignoring the system tag.
bool same_sequent(const Judgment& a, const Judgment& b);

// Empty string when well formed; otherwise the first problem found.
std::string judgment_problem(const Judgment& j);

}  // namespace sf
