#include "sessionforge/judgment.hpp"

#include <algorithm>

namespace sf {

std::string system_name(System s) {
    switch (s) {
        case System::ULL: return "ull";
        case System::ULLM: return "ullm";
        case System::ILL: return "ill";
        case System::CLL: return "cll";
    }
    return "ull";
}

std::optional<System> parse_system(const std::string& s) {
    if (s == "ull") return System::ULL;
    if (s == "ullm") return System::ULLM;
    if (s == "ill") return System::ILL;
    if (s == "cll") return System::CLL;
    return std::nullopt;
}

Context::Context(std::initializer_list<Entry> es) {
    for (const auto& e : es) add(e.first, e.second);
}

bool Context::has(const Name& n) const { return find(n) != nullptr; }

const Type* Context::find(const Name& n) const {
    for (const auto& e : items_)
        if (e.first == n) return &e.second;
    return nullptr;
}

bool Context::add(const Name& n, const Type& t) {
    if (has(n)) return false;
    items_.emplace_back(n, t);
    return true;
}

Context Context::with(const Name& n, const Type& t) const {
    Context c = without(n);
    c.items_.emplace_back(n, t);
    return c;
}

Context Context::without(const Name& n) const {
    Context c;
    for (const auto& e : items_)
        if (e.first != n) c.items_.push_back(e);
    return c;
}

Context Context::dualized() const {
    Context c;
    for (const auto& e : items_) c.items_.emplace_back(e.first, dual(e.second));
    return c;
}

NameSet Context::names() const {
    NameSet s;
    for (const auto& e : items_) s.insert(e.first);
    return s;
}

bool operator==(const Context& a, const Context& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [n, t] : a.items_) {
        const Type* u = b.find(n);
        if (!u || *u != t) return false;
    }
    return true;
}

std::optional<Context> merge(const Context& a, const Context& b) {
    Context c = a;
    for (const auto& [n, t] : b.entries())
        if (!c.add(n, t)) return std::nullopt;
    return c;
}

Judgment Judgment::ull(Context g, Context d, Process p, Context l, System s) {
    Judgment j;
    j.system = s;
    j.gamma = std::move(g);
    j.delta = std::move(d);
    j.process = std::move(p);
    j.lambda = std::move(l);
    return j;
}

Judgment Judgment::cll(Process p, Context g, Context d) {
    Judgment j;
    j.system = System::CLL;
    j.gamma = std::move(g);
    j.delta = std::move(d);
    j.process = std::move(p);
    return j;
}

bool same_sequent(const Judgment& a, const Judgment& b) {
    return a.gamma == b.gamma && a.delta == b.delta && a.lambda == b.lambda &&
           alpha_eq(a.process, b.process);
}

bool same_judgment(const Judgment& a, const Judgment& b) {
    return a.system == b.system && same_sequent(a, b);
}

std::string judgment_problem(const Judgment& j) {
    NameSet seen;
    auto scan = [&](const Context& c, const char* region) -> std::string {
        for (const auto& [n, t] : c.entries()) {
            if (!seen.insert(n).second) return "name '" + n + "' occurs twice (" + region + ")";
        }
        return {};
    };
    for (auto [c, r] : {std::pair{&j.gamma, "unrestricted region"},
                        std::pair{&j.delta, "linear region"},
                        std::pair{&j.lambda, "right region"}}) {
        if (auto e = scan(*c, r); !e.empty()) return e;
    }
    if (j.system == System::CLL && !j.lambda.empty()) return "one-sided judgment with a right region";
    if (j.system == System::ILL) {
        if (j.lambda.size() != 1) return "intuitionistic judgment needs exactly one right assignment";
        for (const Context* c : {&j.gamma, &j.delta, &j.lambda})
            for (const auto& [n, t] : c->entries())
                if (!in_ill_grammar(t)) return "type of '" + n + "' uses bot or ?";
    }
    return {};
}

}  // namespace sf
