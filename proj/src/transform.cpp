#include "sessionforge/transform.hpp"

#include <functional>
#include <set>

#include <json.hpp>

namespace sf {

namespace {

enum Side : char { None = 0, Left = 'L', Right = 'R' };

Side side_of(const Judgment& j, const Name& n) {
    if (j.delta.has(n)) return Left;
    if (j.lambda.has(n)) return Right;
    return None;
}

Side other(Side s) { return s == Left ? Right : Left; }

NameSet linear_names(const Judgment& j) {
    NameSet s = j.delta.names();
    for (const auto& n : j.lambda.names()) s.insert(n);
    return s;
}

// Moves every name in `names` across the turnstile, dualizing its type.
Judgment flipped(const Judgment& j, const NameSet& names, System sys) {
    Judgment out = j;
    out.system = sys;
    for (const auto& n : names) {
        if (const Type* t = out.delta.find(n)) {
            Type d = dual(*t);
            out.delta = out.delta.without(n);
            out.lambda.add(n, d);
        } else if (const Type* t = out.lambda.find(n)) {
            Type d = dual(*t);
            out.lambda = out.lambda.without(n);
            out.delta.add(n, d);
        }
    }
    return out;
}

Judgment retag(Judgment j, System sys) {
    j.system = sys;
    return j;
}

// Linear names of a premise that the conclusion does not mention.
NameSet new_linear(const Judgment& prem, const Judgment& concl) {
    NameSet out;
    NameSet c = linear_names(concl);
    for (const auto& n : linear_names(prem))
        if (!c.count(n)) out.insert(n);
    return out;
}

Name the_new(const Judgment& prem, const Judgment& concl, const std::string& rule) {
    NameSet s = new_linear(prem, concl);
    if (s.size() != 1) throw MalformedDerivation(rule + ": cannot identify the premise binder");
    return *s.begin();
}

// The linear name that a silent !L / ?R node removes.
Name promoted(const Derivation& d) {
    NameSet gone;
    NameSet p = linear_names(d.premises.at(0).conclusion);
    for (const auto& n : linear_names(d.conclusion))
        if (!p.count(n)) gone.insert(n);
    if (gone.size() != 1) throw MalformedDerivation(d.rule + ": cannot identify the promoted name");
    return *gone.begin();
}

Name moved_name(const Derivation& d) {
    const Judgment& p = d.premises.at(0).conclusion;
    for (const auto& n : linear_names(d.conclusion))
        if (side_of(p, n) != side_of(d.conclusion, n)) return n;
    throw MalformedDerivation(d.rule + ": no assignment changes side");
}

Derivation move(const Derivation& prem, const Name& n) {
    std::string r = side_of(prem.conclusion, n) == Right ? "moveL" : "moveR";
    return Derivation{r, flipped(prem.conclusion, {n}, System::ULLM), {prem}};
}

void require_valid(const Derivation& d, const char* what) {
    CheckResult r = check_derivation(d, set_extension(Extension::Mix));
    if (!r) throw MalformedDerivation(std::string(what) + ": input is not a valid derivation: " + r.message());
}

// ---------------------------------------------------------------------------
// Move elimination. elim(d, F) rebuilds d without moves so that every name in
// F ends up on the other side of its conclusion. Forwarders that would need
// both endpoints on the right raise Gap; nodes binding one of the endpoints
// with a choice of side retry with that binder flipped.

struct Gap {
    NameSet endpoints;
};

using Want = std::map<Name, Side>;

struct Plan {
    std::vector<Want> want;                       // required premise sides of local names
    std::vector<std::pair<std::size_t, Name>> flex;  // binders that may take either side
};

Derivation elim(const Derivation& d, const NameSet& F);

Side new_side(const Judgment& j, const NameSet& F, const Name& n) {
    Side s = side_of(j, n);
    return F.count(n) ? other(s) : s;
}

Derivation elim_node(const Derivation& d, const NameSet& F, Plan plan,
                     const std::function<std::string(const std::vector<Derivation>&, const Judgment&)>& rule) {
    const Judgment& J = d.conclusion;
    Judgment NJ = flipped(J, F, System::ULL);
    std::set<std::pair<std::size_t, Name>> toggled;
    for (;;) {
        try {
            std::vector<Derivation> ps;
            for (std::size_t i = 0; i < d.premises.size(); ++i) {
                const Judgment& pj = d.premises[i].conclusion;
                NameSet Fi;
                const Want& w = i < plan.want.size() ? plan.want[i] : Want{};
                for (const auto& n : linear_names(pj)) {
                    if (w.count(n)) {
                        Side target = w.at(n);
                        if (toggled.count({i, n})) target = other(target);
                        if (target != side_of(pj, n)) Fi.insert(n);
                    } else if (F.count(n)) {
                        Fi.insert(n);
                    }
                }
                ps.push_back(elim(d.premises[i], Fi));
            }
            std::string r = rule(ps, NJ);
            return Derivation{r, NJ, std::move(ps)};
        } catch (const Gap& g) {
            bool retried = false;
            for (const auto& f : plan.flex) {
                if (g.endpoints.count(f.second) && !toggled.count(f)) {
                    toggled.insert(f);
                    retried = true;
                    break;
                }
            }
            if (!retried) throw;
        }
    }
}

Derivation elim(const Derivation& d, const NameSet& F) {
    const std::string& R = d.rule;
    const Judgment& J = d.conclusion;
    const Process& P = J.process;
    Judgment NJ = flipped(J, F, System::ULL);
    auto leaf = [&](std::string r) { return Derivation{std::move(r), NJ, {}}; };
    auto side = [&](const Name& n) { return new_side(J, F, n); };

    if (R == "moveL" || R == "moveR") {
        NameSet G = F;
        Name m = moved_name(d);
        if (G.count(m)) G.erase(m);
        else G.insert(m);
        return elim(d.premises.at(0), G);
    }
    if (R == "idR" || R == "idL") {
        Side a = side(P.chan()), b = side(P.name2());
        if (a == Right && b == Right) throw Gap{{P.chan(), P.name2()}};
        return leaf(a == Left && b == Left ? "idL" : "idR");
    }
    if (R == "1R" || R == "botL") return leaf(side(P.chan()) == Right ? "1R" : "botL");
    if (R == "empty") return leaf("empty");
    if (R.rfind("cycle", 0) == 0) throw MalformedDerivation("move elimination does not support " + R);

    Plan plan;
    plan.want.resize(d.premises.size());
    auto prem = [&](std::size_t i) -> const Judgment& { return d.premises.at(i).conclusion; };
    auto out_side = [](const std::vector<Derivation>& ps, std::size_t i, const Name& n) {
        return side_of(ps.at(i).conclusion, n);
    };

    if (R == "!L" || R == "?R") {
        Name x = promoted(d);
        Side sx = side(x);
        return elim_node(d, F, plan, [sx](const auto&, const Judgment&) {
            return std::string(sx == Left ? "!L" : "?R");
        });
    }
    if (R == "1L" || R == "botR") {
        Side sx = side(P.chan());
        return elim_node(d, F, plan, [sx](const auto&, const Judgment&) {
            return std::string(sx == Left ? "1L" : "botR");
        });
    }
    if (R == "*L" || R == "parR" || R == "-oR") {
        const Name& x = P.chan();
        Name y = the_new(prem(0), J, R);
        Side sx = side(x);
        plan.want[0][x] = sx;
        plan.want[0][y] = sx == Left ? Left : side_of(prem(0), y);
        if (sx == Right) plan.flex.push_back({0, y});
        return elim_node(d, F, plan, [=](const auto& ps, const Judgment&) {
            if (sx == Left) return std::string("*L");
            return std::string(out_side(ps, 0, y) == Right ? "parR" : "-oR");
        });
    }
    if (R == "*R" || R == "parL" || R == "-oL") {
        const Name& x = P.chan();
        Name y = the_new(prem(0), J, R);
        Side sx = side(x);
        plan.want[1][x] = sx;
        plan.want[0][y] = sx == Right ? Right : side_of(prem(0), y);
        if (sx == Left) plan.flex.push_back({0, y});
        return elim_node(d, F, plan, [=](const auto& ps, const Judgment&) {
            if (sx == Right) return std::string("*R");
            return std::string(out_side(ps, 0, y) == Left ? "parL" : "-oL");
        });
    }
    if (R == "+R" || R == "&L" || R == "+L" || R == "&R") {
        const Name& x = P.chan();
        Side sx = side(x);
        for (auto& w : plan.want) w[x] = sx;
        bool select = R == "+R" || R == "&L";
        return elim_node(d, F, plan, [=](const auto&, const Judgment&) {
            if (select) return std::string(sx == Right ? "+R" : "&L");
            return std::string(sx == Right ? "&R" : "+L");
        });
    }
    if (R == "!R" || R == "?L") {
        Name y = the_new(prem(0), J, R);
        Side sx = side(P.chan());
        plan.want[0][y] = sx;
        return elim_node(d, F, plan, [=](const auto&, const Judgment&) {
            return std::string(sx == Right ? "!R" : "?L");
        });
    }
    if (R == "copyL" || R == "copyR") {
        Name y = the_new(prem(0), J, R);
        plan.want[0][y] = side_of(prem(0), y);
        plan.flex.push_back({0, y});
        return elim_node(d, F, plan, [=](const auto& ps, const Judgment&) {
            return std::string(out_side(ps, 0, y) == Left ? "copyL" : "copyR");
        });
    }
    if (R == "cutRL" || R == "cutLR" || R == "cutRR" || R == "cutLL") {
        Name c = the_new(prem(0), J, R);
        plan.want[0][c] = side_of(prem(0), c);
        plan.want[1][c] = side_of(prem(1), c);
        plan.flex.push_back({0, c});
        plan.flex.push_back({1, c});
        return elim_node(d, F, plan, [=](const auto& ps, const Judgment&) {
            return std::string("cut") + static_cast<char>(out_side(ps, 0, c)) +
                   static_cast<char>(out_side(ps, 1, c));
        });
    }
    if (R == "cut!R" || R == "cut?R" || R == "cut!L" || R == "cut?L") {
        bool server_right = R.back() == 'R';
        std::size_t s = server_right ? 1 : 0;
        Name y = the_new(prem(s), J, R);
        plan.want[s][y] = side_of(prem(s), y);
        plan.flex.push_back({s, y});
        return elim_node(d, F, plan, [=](const auto& ps, const Judgment&) {
            std::string r = out_side(ps, s, y) == Right ? "cut!" : "cut?";
            return r + (server_right ? "R" : "L");
        });
    }
    if (R == "mix") {
        return elim_node(d, F, plan, [](const auto&, const Judgment&) { return std::string("mix"); });
    }
    throw MalformedDerivation("move elimination: unknown rule " + R);
}

// ---------------------------------------------------------------------------

Derivation nonstar(const Derivation& d) {
    const std::string& R = d.rule;
    const Judgment& J = d.conclusion;
    const Process& P = J.process;
    Judgment MJ = retag(J, System::ULLM);
    std::vector<Derivation> ps;
    for (const auto& p : d.premises) ps.push_back(nonstar(p));
    auto here = [&](const std::string& r, std::vector<Derivation> prems, const NameSet& flips) {
        return Derivation{r, flipped(MJ, flips, System::ULLM), std::move(prems)};
    };
    auto finish = [&](Derivation inner, const Name& n) {
        Derivation m = move(inner, n);
        m.conclusion = MJ;
        return m;
    };

    if (R == "idL") return finish(here("idR", {}, {P.name2()}), P.name2());
    if (R == "botR") return finish(here("1L", ps, {P.chan()}), P.chan());
    if (R == "botL") return finish(here("1R", {}, {P.chan()}), P.chan());
    if (R == "parR") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        Derivation p = move(move(ps[0], y), P.chan());
        return finish(here("*L", {p}, {P.chan()}), P.chan());
    }
    if (R == "parL") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        Derivation p1 = move(ps[0], y);
        Derivation p2 = move(ps[1], P.chan());
        return finish(here("*R", {p1, p2}, {P.chan()}), P.chan());
    }
    if (R == "copyR") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        return here("copyL", {move(ps[0], y)}, {});
    }
    if (R == "?R") {
        Name x = promoted(d);
        return finish(here("!L", ps, {x}), x);
    }
    if (R == "?L") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        return finish(here("!R", {move(ps[0], y)}, {P.chan()}), P.chan());
    }
    if (R == "cutRR") {
        Name c = the_new(d.premises[0].conclusion, J, R);
        return here("cutRL", {ps[0], move(ps[1], c)}, {});
    }
    if (R == "cutLL") {
        Name c = the_new(d.premises[0].conclusion, J, R);
        return here("cutRL", {move(ps[0], c), ps[1]}, {});
    }
    if (R == "cut?R" || R == "cut?L") {
        std::size_t s = R == "cut?R" ? 1 : 0;
        Name y = the_new(d.premises[s].conclusion, J, R);
        ps[s] = move(ps[s], y);
        return here(R == "cut?R" ? "cut!R" : "cut!L", ps, {});
    }
    if (R.rfind("cycle", 0) == 0 || R == "moveL" || R == "moveR")
        throw MalformedDerivation("eliminate_nonstar: unexpected rule " + R);
    return here(R, ps, {});
}

// ---------------------------------------------------------------------------

std::string classical_rule(const std::string& R) {
    static const std::map<std::string, std::string> m = {
        {"idR", "id"},      {"idL", "id"},      {"1R", "1"},         {"botL", "1"},
        {"1L", "bot"},      {"botR", "bot"},    {"*R", "*"},         {"parL", "*"},
        {"-oL", "*"},       {"*L", "par"},      {"parR", "par"},     {"-oR", "par"},
        {"+R", "+"},        {"&L", "+"},        {"+L", "&"},         {"&R", "&"},
        {"copyL", "copy"},  {"copyR", "copy"},  {"!R", "!"},         {"?L", "!"},
        {"!L", "?"},        {"?R", "?"},        {"cutRL", "cut"},    {"cutLR", "cut"},
        {"cutRR", "cut"},   {"cutLL", "cut"},   {"cut!R", "cut?R"},  {"cut?R", "cut?R"},
        {"cut!L", "cut?L"}, {"cut?L", "cut?L"}, {"mix", "mix"},      {"empty", "empty"},
        {"cycleRL", "cycle"}, {"cycleLR", "cycle"}, {"cycleRR", "cycle"}, {"cycleLL", "cycle"},
    };
    auto it = m.find(R);
    if (it == m.end()) throw MalformedDerivation("to_classical: unexpected rule " + R);
    return it->second;
}

Judgment classical_judgment(const Judgment& j) {
    Context lin = j.delta.dualized();
    for (const auto& [n, t] : j.lambda.entries()) lin.add(n, t);
    return Judgment::cll(j.process, j.gamma.dualized(), lin);
}

Derivation classical(const Derivation& d) {
    if (d.rule == "moveL" || d.rule == "moveR") return classical(d.premises.at(0));
    Derivation out{classical_rule(d.rule), classical_judgment(d.conclusion), {}};
    for (const auto& p : d.premises) out.premises.push_back(classical(p));
    return out;
}

// ---------------------------------------------------------------------------

Derivation united(const Derivation& d) {
    const std::string& R = d.rule;
    const Judgment& J = d.conclusion;
    const Process& P = J.process;
    Judgment UJ = Judgment::ull(J.gamma.dualized(), Context{}, P, J.delta, System::ULLM);
    std::vector<Derivation> ps;
    for (const auto& p : d.premises) ps.push_back(united(p));
    auto here = [&](const std::string& r, std::vector<Derivation> prems, const NameSet& flips) {
        return Derivation{r, flipped(UJ, flips, System::ULLM), std::move(prems)};
    };
    auto finish = [&](Derivation inner, const Name& n) {
        Derivation m = move(inner, n);
        m.conclusion = UJ;
        return m;
    };

    if (R == "id") return finish(here("idR", {}, {P.chan()}), P.chan());
    if (R == "1") return here("1R", {}, {});
    if (R == "empty") return here("empty", {}, {});
    if (R == "bot") return finish(here("1L", ps, {P.chan()}), P.chan());
    if (R == "*") return here("*R", ps, {});
    if (R == "par") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        return here("-oR", {move(ps[0], y)}, {});
    }
    if (R == "+") return here("+R", ps, {});
    if (R == "&") return here("&R", ps, {});
    if (R == "copy") {
        Name y = the_new(d.premises[0].conclusion, J, R);
        return here("copyL", {move(ps[0], y)}, {});
    }
    if (R == "!") return here("!R", ps, {});
    if (R == "?") {
        Name x = promoted(d);
        return finish(here("!L", ps, {x}), x);
    }
    if (R == "cut") {
        Name c = the_new(d.premises[0].conclusion, J, R);
        return here("cutRL", {ps[0], move(ps[1], c)}, {});
    }
    if (R == "cut?R") return here("cut!R", ps, {});
    if (R == "cut?L") return here("cut!L", ps, {});
    if (R == "mix") return here("mix", ps, {});
    throw MalformedDerivation("to_united: unexpected rule " + R);
}

}  // namespace

Derivation eliminate_nonstar(const Derivation& d) {
    if (d.system() != System::ULL) throw MalformedDerivation("eliminate_nonstar expects a ULL derivation");
    require_valid(d, "eliminate_nonstar");
    return nonstar(d);
}

Derivation eliminate_moves(const Derivation& d) {
    if (d.system() != System::ULL && d.system() != System::ULLM)
        throw MalformedDerivation("eliminate_moves expects a ULLM derivation");
    require_valid(d, "eliminate_moves");
    try {
        Derivation out = elim(d, {});
        out.conclusion = retag(d.conclusion, System::ULL);
        return out;
    } catch (const Gap& g) {
        std::string names;
        for (const auto& n : g.endpoints) names += (names.empty() ? "" : ", ") + n;
        throw MoveNotEliminable(
            "no vanilla ULL rule types a forwarder with both endpoints on the right (" + names + ")",
            g.endpoints);
    }
}

Derivation to_classical(const Derivation& d) {
    if (d.system() != System::ULL && d.system() != System::ULLM)
        throw MalformedDerivation("to_classical expects a ULL derivation");
    require_valid(d, "to_classical");
    return classical(d);
}

Derivation to_united_moves(const Derivation& d) {
    if (d.system() != System::CLL) throw MalformedDerivation("to_united expects a CLL derivation");
    require_valid(d, "to_united");
    return united(d);
}

Derivation to_united(const Derivation& d) { return eliminate_moves(to_united_moves(d)); }

FragmentReport fragment_report(const Derivation& d) {
    FragmentReport r;
    bool all_ok = true;
    visit(d, [&](const Derivation& n, const NodePath& path) {
        std::size_t k = n.conclusion.lambda.size();
        r.r_degree[path] = k;
        r.max_r_degree = std::max(r.max_r_degree, k);
        if (!all_ok) return;
        std::string why;
        if (n.system() == System::CLL) why = "one-sided judgment";
        else if (n.system() != System::ILL && !ull_to_ill_rule(n.rule)) why = "rule " + n.rule + " has no intuitionistic counterpart";
        else if (k != 1) why = "r-degree " + std::to_string(k);
        else
            for (const Context* c : {&n.conclusion.gamma, &n.conclusion.delta, &n.conclusion.lambda})
                for (const auto& [x, t] : c->entries())
                    if (why.empty() && !in_ill_grammar(t)) why = "type of " + x + " uses bot or ?";
        if (!why.empty()) {
            all_ok = false;
            r.witness = path;
            r.reason = why;
        }
    });
    r.ill_member = all_ok;
    return r;
}

std::string report_json(const FragmentReport& r) {
    nlohmann::ordered_json j;
    j["max_r_degree"] = r.max_r_degree;
    j["ill_member"] = r.ill_member;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& [path, k] : r.r_degree) per[print_path(path)] = k;
    j["r_degree_per_node"] = per;
    if (r.witness) {
        j["witness"] = print_path(*r.witness);
        j["reason"] = r.reason;
    } else {
        j["witness"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::variant<Derivation, NotInFragment> to_intuitionistic(const Derivation& d) {
    FragmentReport r = fragment_report(d);
    if (!r.ill_member) return NotInFragment{r};
    std::function<Derivation(const Derivation&)> go = [&](const Derivation& n) {
        Derivation out{n.system() == System::ILL ? n.rule : *ull_to_ill_rule(n.rule),
                       retag(n.conclusion, System::ILL), {}};
        for (const auto& p : n.premises) out.premises.push_back(go(p));
        return out;
    };
    return go(d);
}

Derivation from_intuitionistic(const Derivation& d) {
    Derivation out{d.system() == System::ILL ? ill_to_ull_rule(d.rule) : d.rule, retag(d.conclusion, System::ULL), {}};
    for (const auto& p : d.premises) out.premises.push_back(from_intuitionistic(p));
    return out;
}

std::string diagnostic_kind_name(DiagnosticKind k) {
    return k == DiagnosticKind::NonLocalServer ? "NonLocalServer" : "NonLocalEmptySend";
}

std::vector<Diagnostic> locality_diagnose(const Process& p) {
    std::vector<Diagnostic> out;
    // received: names currently in scope that were bound by an input.
    std::function<void(const Process&, const NameSet&)> go = [&](const Process& q, const NameSet& received) {
        auto bind = [&](const Name& n, bool by_input) {
            NameSet s = received;
            if (by_input) s.insert(n);
            else s.erase(n);
            return s;
        };
        switch (q.kind()) {
            case ProcKind::Inact:
            case ProcKind::Forward:
                return;
            case ProcKind::Close:
                if (received.count(q.chan()))
                    out.push_back({DiagnosticKind::NonLocalEmptySend, q.chan(),
                                   "empty send on '" + q.chan() + "', which was received by an enclosing input"});
                return;
            case ProcKind::Server:
                if (received.count(q.chan()))
                    out.push_back({DiagnosticKind::NonLocalServer, q.chan(),
                                   "server on '" + q.chan() + "', which was received by an enclosing input"});
                go(q.first(), bind(q.binder(), false));
                return;
            case ProcKind::Restrict:
                go(q.first(), bind(q.chan(), false));
                return;
            case ProcKind::Par:
                go(q.first(), received);
                go(q.second(), received);
                return;
            case ProcKind::Send: {
                NameSet s = bind(q.binder(), false);
                go(q.first(), s);
                if (q.bound_send()) go(q.second(), s);
                return;
            }
            case ProcKind::Recv:
                go(q.first(), bind(q.binder(), true));
                return;
            case ProcKind::Select:
            case ProcKind::Wait:
                go(q.first(), received);
                return;
            case ProcKind::Branch:
                for (const auto& [l, a] : q.arms()) go(a, received);
                return;
        }
    };
    go(p, {});
    return out;
}

}  // namespace sf
