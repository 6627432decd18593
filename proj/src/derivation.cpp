#include "sessionforge/derivation.hpp"

#include <algorithm>

namespace sf {

std::size_t Derivation::node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.node_count();
    return n;
}

std::size_t Derivation::height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p.height());
    return h + 1;
}

bool same_tree(const Derivation& a, const Derivation& b) {
    if (a.rule != b.rule || a.premises.size() != b.premises.size()) return false;
    if (!same_judgment(a.conclusion, b.conclusion)) return false;
    for (std::size_t i = 0; i < a.premises.size(); ++i)
        if (!same_tree(a.premises[i], b.premises[i])) return false;
    return true;
}

namespace {

const std::vector<RuleSchema> kUll = {
    {"idR", 0, true},    {"idL", 0, false},   {"1R", 0, true},     {"1L", 1, true},
    {"botR", 1, false},  {"botL", 0, false},  {"*R", 2, true},     {"*L", 1, true},
    {"parR", 1, false},  {"parL", 2, false},  {"-oR", 1, true},    {"-oL", 2, true},
    {"+R", 1, true},     {"+L", kPerBranch, true},                 {"&R", kPerBranch, true},
    {"&L", 1, true},     {"copyR", 1, false}, {"copyL", 1, true},  {"!R", 1, true},
    {"!L", 1, true},     {"?R", 1, false},    {"?L", 1, false},    {"cutRL", 2, true},
    {"cutLR", 2, true},  {"cutRR", 2, false}, {"cutLL", 2, false}, {"cut!R", 2, true},
    {"cut!L", 2, true},  {"cut?R", 2, false}, {"cut?L", 2, false},
};

const std::vector<RuleSchema> kIll = {
    {"id", 0, true},    {"1R", 0, true},  {"1L", 1, true},   {"*R", 2, true},
    {"*L", 1, true},    {"-oR", 1, true}, {"-oL", 2, true},  {"+R", 1, true},
    {"+L", kPerBranch, true},             {"&R", kPerBranch, true},
    {"&L", 1, true},    {"copy", 1, true}, {"!R", 1, true},  {"!L", 1, true},
    {"cutRL", 2, true}, {"cutLR", 2, true}, {"cut!R", 2, true}, {"cut!L", 2, true},
};

const std::vector<RuleSchema> kCll = {
    {"id", 0, false},  {"bot", 1, false}, {"1", 0, false},    {"*", 2, false},
    {"par", 1, false}, {"+", 1, false},   {"&", kPerBranch, false},
    {"copy", 1, false}, {"?", 1, false},  {"!", 1, false},    {"cut", 2, false},
    {"cut?R", 2, false}, {"cut?L", 2, false},
};

const std::vector<RuleSchema> kMix = {{"mix", 2, false}, {"empty", 0, false}};
const std::vector<RuleSchema> kMoves = {{"moveL", 1, false}, {"moveR", 1, false}};
const std::vector<RuleSchema> kCycle = {{"cycleRL", 1, false}, {"cycleLR", 1, false},
                                        {"cycleRR", 1, false}, {"cycleLL", 1, false}};
const std::vector<RuleSchema> kCycleC = {{"cycle", 1, false}};

std::vector<RuleSchema> build(System s, Extension ext) {
    std::vector<RuleSchema> out;
    switch (s) {
        case System::ULL:
            out = kUll;
            break;
        case System::ULLM:
            for (const auto& r : kUll)
                if (r.star) out.push_back(r);
            out.insert(out.end(), kMoves.begin(), kMoves.end());
            break;
        case System::ILL:
            out = kIll;
            break;
        case System::CLL:
            out = kCll;
            break;
    }
    if (ext != Extension::None && s != System::ILL)
        out.insert(out.end(), kMix.begin(), kMix.end());
    if (ext == Extension::MixCycle && s == System::ULL)
        out.insert(out.end(), kCycle.begin(), kCycle.end());
    if (ext == Extension::MixCycle && s == System::CLL)
        out.insert(out.end(), kCycleC.begin(), kCycleC.end());
    return out;
}

}  // namespace

const std::vector<RuleSchema>& rule_table(System s, Extension ext) {
    static const auto tables = [] {
        std::vector<std::vector<RuleSchema>> t;
        for (System sys : {System::ULL, System::ULLM, System::ILL, System::CLL})
            for (Extension e : {Extension::None, Extension::Mix, Extension::MixCycle})
                t.push_back(build(sys, e));
        return t;
    }();
    return tables[static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(ext)];
}

const RuleSchema* find_rule(System s, const std::string& name, Extension ext) {
    for (const auto& r : rule_table(s, ext))
        if (r.name == name) return &r;
    return nullptr;
}

bool is_star_rule(const std::string& n) {
    for (const auto& r : kUll)
        if (r.name == n) return r.star;
    return false;
}

bool is_cut_rule(const std::string& n) { return n.rfind("cut", 0) == 0; }

std::string ill_to_ull_rule(const std::string& n) {
    if (n == "id") return "idR";
    if (n == "copy") return "copyL";
    return n;
}

std::optional<std::string> ull_to_ill_rule(const std::string& n) {
    if (n == "idR") return "id";
    if (n == "copyL") return "copy";
    if (!is_star_rule(n)) return std::nullopt;
    return n;
}

std::string print_path(const NodePath& p) {
    if (p.empty()) return "root";
    std::string s = "root";
    for (int i : p) s += "." + std::to_string(i);
    return s;
}

const Derivation* node_at(const Derivation& d, const NodePath& p) {
    const Derivation* cur = &d;
    for (int i : p) {
        if (i < 0 || static_cast<std::size_t>(i) >= cur->premises.size()) return nullptr;
        cur = &cur->premises[static_cast<std::size_t>(i)];
    }
    return cur;
}

namespace {
void visit_rec(const Derivation& d, NodePath& path,
               const std::function<void(const Derivation&, const NodePath&)>& f) {
    f(d, path);
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        visit_rec(d.premises[i], path, f);
        path.pop_back();
    }
}
}  // namespace

void visit(const Derivation& d, const std::function<void(const Derivation&, const NodePath&)>& f) {
    NodePath p;
    visit_rec(d, p, f);
}

}  // namespace sf
