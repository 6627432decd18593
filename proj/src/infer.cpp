#include <algorithm>
#include <set>

#include "sessionforge/checker.hpp"
#include "sessionforge/syntax.hpp"

namespace sf {

std::vector<Type> harvest_types(const Process& p) {
    std::set<Type> acc;
    std::function<void(const Process&)> go = [&](const Process& q) {
        switch (q.kind()) {
            case ProcKind::Inact:
            case ProcKind::Forward:
            case ProcKind::Close:
                return;
            case ProcKind::Restrict:
                if (q.ann())
                    for (const auto& t : subterms(*q.ann())) {
                        acc.insert(t);
                        acc.insert(dual(t));
                    }
                go(q.first());
                return;
            case ProcKind::Par:
                go(q.first());
                go(q.second());
                return;
            case ProcKind::Send:
                go(q.first());
                if (q.bound_send()) go(q.second());
                return;
            case ProcKind::Branch:
                for (const auto& [l, a] : q.arms()) go(a);
                return;
            default:
                go(q.first());
                return;
        }
    };
    go(p);
    return {acc.begin(), acc.end()};
}

namespace {

struct OutOfBudget {};

NameSet region_names(const Judgment& j) {
    NameSet s = j.gamma.names();
    for (const auto& n : j.delta.names()) s.insert(n);
    for (const auto& n : j.lambda.names()) s.insert(n);
    return s;
}

// Splits a linear context between components by free names. A name free in
// no component or in several cannot be placed.
std::optional<std::vector<Context>> split(const Context& c, const std::vector<NameSet>& fns) {
    std::vector<Context> out(fns.size());
    for (const auto& [n, t] : c.entries()) {
        int at = -1;
        for (std::size_t i = 0; i < fns.size(); ++i) {
            if (!fns[i].count(n)) continue;
            if (at >= 0) return std::nullopt;
            at = static_cast<int>(i);
        }
        if (at < 0) return std::nullopt;
        out[at].add(n, t);
    }
    return out;
}

NameSet minus(NameSet s, const Name& n) {
    s.erase(n);
    return s;
}

class Engine {
public:
    using K = std::function<bool(Derivation)>;

    Engine(System s, const InferenceBudget& b, const CheckerConfig& c, std::vector<Type> universe)
        : sys_(s), budget_(b), cfg_(c), universe_(std::move(universe)) {}

    bool solve(const Judgment& g, int depth, const K& k, bool no_move = false) {
        if (++steps_ > budget_.max_steps) {
            exhausted = true;
            throw OutOfBudget{};
        }
        if (depth > budget_.max_depth) {
            exhausted = true;
            return false;
        }
        if (!admissible(g)) return false;
        bool any = false;
        K counted = [&](Derivation d) {
            any = true;
            return k(std::move(d));
        };
        bool stop = sys_ == System::CLL ? solve_cll(g, depth, counted) : solve_two(g, depth, counted, no_move);
        if (!any && depth >= frontier_depth) {
            frontier_depth = depth;
            frontier = print_judgment(g);
        }
        return stop;
    }

    bool exhausted = false;
    int frontier_depth = -1;
    std::string frontier;
    std::optional<Name> need_annotation;

private:
    System sys_;
    InferenceBudget budget_;
    CheckerConfig cfg_;
    std::vector<Type> universe_;
    long steps_ = 0;

    bool admissible(const Judgment& g) const {
        NameSet have = region_names(g);
        for (const auto& n : free_names(g.process))
            if (!have.count(n)) return false;
        if (sys_ == System::ILL) {
            if (g.lambda.size() != 1) return false;
            for (const Context* c : {&g.gamma, &g.delta, &g.lambda})
                for (const auto& [n, t] : c->entries())
                    if (!in_ill_grammar(t)) return false;
        }
        return true;
    }

    bool has(const std::string& ull_rule) const {
        std::string n = rule_name(ull_rule);
        return !n.empty() && find_rule(sys_, n, cfg_.extension) != nullptr;
    }

    std::string rule_name(const std::string& ull_rule) const {
        if (sys_ == System::ILL) return ull_to_ill_rule(ull_rule).value_or("");
        return ull_rule;
    }

    Judgment make(const Judgment& like, Context g, Context d, Process p, Context l = {}) const {
        Judgment j;
        j.system = like.system;
        j.gamma = std::move(g);
        j.delta = std::move(d);
        j.lambda = std::move(l);
        j.process = std::move(p);
        return j;
    }

    Derivation node(const std::string& rule, const Judgment& c, std::vector<Derivation> ps) const {
        return Derivation{rule_name(rule).empty() ? rule : rule_name(rule), c, std::move(ps)};
    }

    // A name for a binder that is fresh for the goal's regions.
    static Name pick(const Name& y, const Judgment& g) {
        NameSet regions = region_names(g);
        NameSet fn = free_names(g.process);
        if (!regions.count(y) && !fn.count(y)) return y;
        NameSet avoid = all_names(g.process);
        avoid.insert(regions.begin(), regions.end());
        return fresh_name(y, avoid);
    }

    static Process rename(const Process& p, const Name& to, const Name& from) {
        return to == from ? p : substitute(p, to, from);
    }

    bool axiom(const std::string& rule, const Judgment& g, const K& k) {
        if (!has(rule)) return false;
        return k(node(rule, g, {}));
    }

    bool unary(const std::string& rule, const Judgment& g, const Judgment& p, int depth, const K& k,
               bool no_move = false) {
        if (!has(rule)) return false;
        return solve(p, depth + 1, [&](Derivation d) {
            std::vector<Derivation> ps;
            ps.push_back(std::move(d));
            return k(node(rule, g, std::move(ps)));
        }, no_move);
    }

    bool nary(const std::string& rule, const Judgment& g, const std::vector<Judgment>& goals,
              int depth, const K& k) {
        if (!has(rule)) return false;
        std::vector<Derivation> acc;
        std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
            if (i == goals.size()) return k(node(rule, g, acc));
            return solve(goals[i], depth + 1, [&](Derivation d) {
                acc.push_back(std::move(d));
                bool stop = go(i + 1);
                acc.pop_back();
                return stop;
            });
        };
        return go(0);
    }

    // Linear names that must be moved into the unrestricted region before the
    // principal rule applies: those with no linear use left in the process.
    std::optional<Name> forced_promotion(const Judgment& g) const {
        const Process& P = g.process;
        auto forced = [&](const Name& x) {
            NameSet fn = free_names(P);
            if (P.is(ProcKind::Forward)) return P.chan() != x && P.name2() != x;
            if (!fn.count(x)) return true;
            if (P.copy_send() && P.chan() == x) return true;
            if (P.is(ProcKind::Server)) return P.chan() != x;
            std::vector<NameSet> parts;
            if (P.bound_send()) {
                parts = {minus(free_names(P.first()), P.binder()), minus(free_names(P.second()), P.binder())};
            } else if (P.is_cut()) {
                parts = {minus(free_names(P.first().first()), P.chan()),
                         minus(free_names(P.first().second()), P.chan())};
            } else if (P.is(ProcKind::Par)) {
                parts = {free_names(P.first()), free_names(P.second())};
            }
            return parts.size() == 2 && parts[0].count(x) && parts[1].count(x);
        };
        if (sys_ == System::CLL) {
            for (const auto& [n, t] : g.delta.entries())
                if (t.is(TypeKind::Query) && forced(n)) return n;
            return std::nullopt;
        }
        for (const auto& [n, t] : g.delta.entries())
            if (t.is(TypeKind::Bang) && forced(n)) return n;
        if (sys_ != System::ILL)
            for (const auto& [n, t] : g.lambda.entries())
                if (t.is(TypeKind::Query) && forced(n)) return n;
        return std::nullopt;
    }

    bool promote(const Judgment& g, const Name& x, int depth, const K& k) {
        if (sys_ == System::CLL) {
            const Type& t = *g.delta.find(x);
            return unary("?", g, make(g, g.gamma.with(x, t.body()), g.delta.without(x), g.process), depth, k);
        }
        if (const Type* t = g.delta.find(x)) {
            return unary("!L", g, make(g, g.gamma.with(x, t->body()), g.delta.without(x), g.process, g.lambda),
                         depth, k);
        }
        const Type& t = *g.lambda.find(x);
        Judgment up = make(g, g.gamma.with(x, dual(t.body())), g.delta, g.process, g.lambda.without(x));
        if (sys_ == System::ULLM) {
            Judgment moved = make(g, g.gamma, g.delta.with(x, dual(t)), g.process, g.lambda.without(x));
            return unary("moveR", g, moved, depth, k);
        }
        return unary("?R", g, up, depth, k);
    }

    // ---- two-sided systems ----

    bool solve_two(const Judgment& g, int depth, const K& k, bool no_move) {
        if (auto x = forced_promotion(g)) return promote(g, *x, depth, k);
        if (dispatch_two(g, depth, k)) return true;
        if (sys_ != System::ULLM || no_move) return false;
        // One move on a principal channel, then the structural rule.
        const Process& P = g.process;
        std::vector<Name> principal;
        switch (P.kind()) {
            case ProcKind::Forward:
                principal = {P.chan(), P.name2()};
                break;
            case ProcKind::Inact:
            case ProcKind::Par:
            case ProcKind::Restrict:
                break;
            default:
                if (!(P.copy_send())) principal = {P.chan()};
        }
        for (const auto& x : principal) {
            if (const Type* t = g.delta.find(x)) {
                if (unary("moveL", g, make(g, g.gamma, g.delta.without(x), P, g.lambda.with(x, dual(*t))),
                          depth, k, true))
                    return true;
            } else if (const Type* t = g.lambda.find(x)) {
                if (unary("moveR", g, make(g, g.gamma, g.delta.with(x, dual(*t)), P, g.lambda.without(x)),
                          depth, k, true))
                    return true;
            }
        }
        return false;
    }

    bool dispatch_two(const Judgment& g, int depth, const K& k) {
        const Process& P = g.process;
        const Context &G = g.gamma, &D = g.delta, &L = g.lambda;
        switch (P.kind()) {
            case ProcKind::Inact:
                if (D.empty() && L.empty()) return axiom("empty", g, k);
                return false;
            case ProcKind::Forward: {
                const Name &a = P.chan(), &b = P.name2();
                if (a == b) return false;
                if (D.size() == 1 && L.size() == 1) {
                    const auto& [l, lt] = D.entries()[0];
                    const auto& [r, rt] = L.entries()[0];
                    if (((l == a && r == b) || (l == b && r == a)) && lt == rt) return axiom("idR", g, k);
                }
                if (L.empty() && D.size() == 2 && D.find(a) && D.find(b) && *D.find(b) == dual(*D.find(a)))
                    return axiom("idL", g, k);
                return false;
            }
            case ProcKind::Close: {
                const Name& x = P.chan();
                if (D.empty() && L.size() == 1 && L.find(x) && L.find(x)->is(TypeKind::One))
                    return axiom("1R", g, k);
                if (L.empty() && D.size() == 1 && D.find(x) && D.find(x)->is(TypeKind::Bot))
                    return axiom("botL", g, k);
                return false;
            }
            case ProcKind::Wait: {
                const Name& x = P.chan();
                if (const Type* t = D.find(x); t && t->is(TypeKind::One))
                    return unary("1L", g, make(g, G, D.without(x), P.first(), L), depth, k);
                if (const Type* t = L.find(x); t && t->is(TypeKind::Bot))
                    return unary("botR", g, make(g, G, D, P.first(), L.without(x)), depth, k);
                return false;
            }
            case ProcKind::Recv: {
                const Name& x = P.chan();
                Name y = pick(P.binder(), g);
                Process body = rename(P.first(), y, P.binder());
                if (const Type* t = D.find(x); t && t->is(TypeKind::Tensor))
                    return unary("*L", g, make(g, G, D.without(x).with(y, t->left()).with(x, t->right()), body, L),
                                 depth, k);
                if (const Type* t = L.find(x); t && t->is(TypeKind::Lolli)) {
                    if (unary("parR", g,
                              make(g, G, D, body, L.without(x).with(y, dual(t->left())).with(x, t->right())),
                              depth, k))
                        return true;
                    return unary("-oR", g, make(g, G, D.with(y, t->left()), body, L.without(x).with(x, t->right())),
                                 depth, k);
                }
                return false;
            }
            case ProcKind::Send:
                if (P.bound_send()) return send_two(g, depth, k);
                return copy_two(g, depth, k);
            case ProcKind::Select: {
                const Name& x = P.chan();
                auto pick_branch = [&](const Type& t) -> const Type* {
                    auto it = t.branches().find(P.label());
                    return it == t.branches().end() ? nullptr : &it->second;
                };
                if (const Type* t = L.find(x); t && t->is(TypeKind::Plus)) {
                    const Type* a = pick_branch(*t);
                    if (!a) return false;
                    return unary("+R", g, make(g, G, D, P.first(), L.without(x).with(x, *a)), depth, k);
                }
                if (const Type* t = D.find(x); t && t->is(TypeKind::With)) {
                    const Type* a = pick_branch(*t);
                    if (!a) return false;
                    return unary("&L", g, make(g, G, D.without(x).with(x, *a), P.first(), L), depth, k);
                }
                return false;
            }
            case ProcKind::Branch: {
                const Name& x = P.chan();
                bool left = false;
                const Type* t = nullptr;
                if (const Type* u = D.find(x); u && u->is(TypeKind::Plus)) {
                    t = u;
                    left = true;
                } else if (const Type* u = L.find(x); u && u->is(TypeKind::With)) {
                    t = u;
                }
                if (!t || t->branches().size() != P.arms().size()) return false;
                std::vector<Judgment> goals;
                for (const auto& [l, a] : t->branches()) {
                    auto it = P.arms().find(l);
                    if (it == P.arms().end()) return false;
                    if (left) goals.push_back(make(g, G, D.without(x).with(x, a), it->second, L));
                    else goals.push_back(make(g, G, D, it->second, L.without(x).with(x, a)));
                }
                return nary(left ? "+L" : "&R", g, goals, depth, k);
            }
            case ProcKind::Server: {
                const Name& x = P.chan();
                Name y = pick(P.binder(), g);
                Process body = rename(P.first(), y, P.binder());
                if (D.empty() && L.size() == 1)
                    if (const Type* t = L.find(x); t && t->is(TypeKind::Bang))
                        return unary("!R", g, make(g, G, {}, body, Context{{y, t->body()}}), depth, k);
                if (L.empty() && D.size() == 1)
                    if (const Type* t = D.find(x); t && t->is(TypeKind::Query))
                        return unary("?L", g, make(g, G, Context{{y, t->body()}}, body, {}), depth, k);
                return false;
            }
            case ProcKind::Restrict:
                return cut_two(g, depth, k);
            case ProcKind::Par: {
                if (!has("mix")) return false;
                std::vector<NameSet> fns = {free_names(P.first()), free_names(P.second())};
                auto ds = split(D, fns);
                auto ls = split(L, fns);
                if (!ds || !ls) return false;
                return nary("mix", g,
                            {make(g, G, (*ds)[0], P.first(), (*ls)[0]), make(g, G, (*ds)[1], P.second(), (*ls)[1])},
                            depth, k);
            }
        }
        return false;
    }

    bool send_two(const Judgment& g, int depth, const K& k) {
        const Process& P = g.process;
        const Context &G = g.gamma, &D = g.delta, &L = g.lambda;
        const Name& x = P.chan();
        Name y = pick(P.binder(), g);
        Process p1 = rename(P.first(), y, P.binder());
        Process p2 = rename(P.second(), y, P.binder());
        std::vector<NameSet> fns = {minus(free_names(p1), y), minus(free_names(p2), x)};
        if (const Type* t = L.find(x); t && t->is(TypeKind::Tensor)) {
            auto ds = split(D, fns);
            auto ls = split(L.without(x), fns);
            if (!ds || !ls) return false;
            return nary("*R", g,
                        {make(g, G, (*ds)[0], p1, (*ls)[0].with(y, t->left())),
                         make(g, G, (*ds)[1], p2, (*ls)[1].with(x, t->right()))},
                        depth, k);
        }
        if (const Type* t = D.find(x); t && t->is(TypeKind::Lolli)) {
            auto ds = split(D.without(x), fns);
            auto ls = split(L, fns);
            if (!ds || !ls) return false;
            if (nary("parL", g,
                     {make(g, G, (*ds)[0].with(y, dual(t->left())), p1, (*ls)[0]),
                      make(g, G, (*ds)[1].with(x, t->right()), p2, (*ls)[1])},
                     depth, k))
                return true;
            return nary("-oL", g,
                        {make(g, G, (*ds)[0], p1, (*ls)[0].with(y, t->left())),
                         make(g, G, (*ds)[1].with(x, t->right()), p2, (*ls)[1])},
                        depth, k);
        }
        return false;
    }

    bool copy_two(const Judgment& g, int depth, const K& k) {
        const Process& P = g.process;
        const Type* a = g.gamma.find(P.chan());
        if (!a) return false;
        Name y = pick(P.binder(), g);
        Process body = rename(P.first(), y, P.binder());
        if (unary("copyL", g, make(g, g.gamma, g.delta.with(y, *a), body, g.lambda), depth, k)) return true;
        return unary("copyR", g, make(g, g.gamma, g.delta, body, g.lambda.with(y, dual(*a))), depth, k);
    }

    std::vector<Type> cut_types(const Process& P) {
        if (P.ann()) return {*P.ann()};
        if (universe_.empty()) need_annotation = P.chan();
        return universe_;
    }

    bool cut_two(const Judgment& g, int depth, const K& k) {
        const Process& P = g.process;
        if (!P.is_cut()) return false;
        const Context &G = g.gamma, &D = g.delta, &L = g.lambda;
        Name c = pick(P.chan(), g);
        Process l = rename(P.first().first(), c, P.chan());
        Process r = rename(P.first().second(), c, P.chan());
        std::vector<NameSet> fns = {minus(free_names(l), c), minus(free_names(r), c)};
        auto ds = split(D, fns);
        auto ls = split(L, fns);
        for (const Type& T : cut_types(P)) {
            Type nT = dual(T);
            if (ds && ls) {
                const Context &d1 = (*ds)[0], &d2 = (*ds)[1], &l1 = (*ls)[0], &l2 = (*ls)[1];
                if (nary("cutRL", g, {make(g, G, d1, l, l1.with(c, T)), make(g, G, d2.with(c, T), r, l2)}, depth, k))
                    return true;
                if (nary("cutLR", g, {make(g, G, d1.with(c, nT), l, l1), make(g, G, d2, r, l2.with(c, nT))}, depth, k))
                    return true;
                if (nary("cutRR", g, {make(g, G, d1, l, l1.with(c, T)), make(g, G, d2, r, l2.with(c, nT))}, depth, k))
                    return true;
                if (nary("cutLL", g, {make(g, G, d1.with(c, nT), l, l1), make(g, G, d2.with(c, T), r, l2)}, depth, k))
                    return true;
            }
            // Unrestricted cuts: the server side is serv c(y).Q.
            for (bool server_right : {true, false}) {
                const Process& srv = server_right ? r : l;
                const Process& cli = server_right ? l : r;
                if (!srv.is(ProcKind::Server) || srv.chan() != c) continue;
                if (!(server_right ? T.is(TypeKind::Query) : T.is(TypeKind::Bang))) continue;
                Type a = server_right ? dual(T.body()) : T.body();
                Judgment client = make(g, G.with(c, a), D, cli, L);
                Name y = pick(srv.binder(), client);
                Process sb = rename(srv.first(), y, srv.binder());
                Judgment bang_srv = make(g, G, {}, sb, Context{{y, a}});
                Judgment query_srv = make(g, G, Context{{y, dual(a)}}, sb, {});
                std::string side = server_right ? "R" : "L";
                auto two = [&](const Judgment& s) {
                    return server_right ? std::vector<Judgment>{client, s} : std::vector<Judgment>{s, client};
                };
                if (nary("cut!" + side, g, two(bang_srv), depth, k)) return true;
                if (nary("cut?" + side, g, two(query_srv), depth, k)) return true;
            }
        }
        return false;
    }

    // ---- one-sided system ----

    bool solve_cll(const Judgment& g, int depth, const K& k) {
        if (auto x = forced_promotion(g)) return promote(g, *x, depth, k);
        const Process& P = g.process;
        const Context &G = g.gamma, &D = g.delta;
        auto cll = [&](Context gg, Context dd, Process p) { return make(g, std::move(gg), std::move(dd), std::move(p)); };
        switch (P.kind()) {
            case ProcKind::Inact:
                return D.empty() && axiom("empty", g, k);
            case ProcKind::Forward: {
                const Name &a = P.chan(), &b = P.name2();
                if (a != b && D.size() == 2 && D.find(a) && D.find(b) && *D.find(b) == dual(*D.find(a)))
                    return axiom("id", g, k);
                return false;
            }
            case ProcKind::Close:
                if (D.size() == 1 && D.find(P.chan()) && D.find(P.chan())->is(TypeKind::One)) return axiom("1", g, k);
                return false;
            case ProcKind::Wait:
                if (const Type* t = D.find(P.chan()); t && t->is(TypeKind::Bot))
                    return unary("bot", g, cll(G, D.without(P.chan()), P.first()), depth, k);
                return false;
            case ProcKind::Recv: {
                const Name& x = P.chan();
                const Type* t = D.find(x);
                if (!t || !t->is(TypeKind::Lolli)) return false;
                Name y = pick(P.binder(), g);
                Process body = rename(P.first(), y, P.binder());
                return unary("par", g, cll(G, D.without(x).with(y, dual(t->left())).with(x, t->right()), body), depth, k);
            }
            case ProcKind::Send: {
                const Name& x = P.chan();
                Name y = pick(P.binder(), g);
                if (P.copy_send()) {
                    const Type* a = G.find(x);
                    if (!a) return false;
                    return unary("copy", g, cll(G, D.with(y, *a), rename(P.first(), y, P.binder())), depth, k);
                }
                const Type* t = D.find(x);
                if (!t || !t->is(TypeKind::Tensor)) return false;
                Process p1 = rename(P.first(), y, P.binder());
                Process p2 = rename(P.second(), y, P.binder());
                auto ds = split(D.without(x), {minus(free_names(p1), y), minus(free_names(p2), x)});
                if (!ds) return false;
                return nary("*", g, {cll(G, (*ds)[0].with(y, t->left()), p1), cll(G, (*ds)[1].with(x, t->right()), p2)},
                            depth, k);
            }
            case ProcKind::Select: {
                const Type* t = D.find(P.chan());
                if (!t || !t->is(TypeKind::Plus)) return false;
                auto it = t->branches().find(P.label());
                if (it == t->branches().end()) return false;
                return unary("+", g, cll(G, D.without(P.chan()).with(P.chan(), it->second), P.first()), depth, k);
            }
            case ProcKind::Branch: {
                const Name& x = P.chan();
                const Type* t = D.find(x);
                if (!t || !t->is(TypeKind::With) || t->branches().size() != P.arms().size()) return false;
                std::vector<Judgment> goals;
                for (const auto& [l, a] : t->branches()) {
                    auto it = P.arms().find(l);
                    if (it == P.arms().end()) return false;
                    goals.push_back(cll(G, D.without(x).with(x, a), it->second));
                }
                return nary("&", g, goals, depth, k);
            }
            case ProcKind::Server: {
                const Type* t = D.find(P.chan());
                if (D.size() != 1 || !t || !t->is(TypeKind::Bang)) return false;
                Name y = pick(P.binder(), g);
                return unary("!", g, cll(G, Context{{y, t->body()}}, rename(P.first(), y, P.binder())), depth, k);
            }
            case ProcKind::Restrict: {
                if (!P.is_cut()) return false;
                Name c = pick(P.chan(), g);
                Process l = rename(P.first().first(), c, P.chan());
                Process r = rename(P.first().second(), c, P.chan());
                auto ds = split(D, {minus(free_names(l), c), minus(free_names(r), c)});
                for (const Type& T : cut_types(P)) {
                    if (ds && nary("cut", g, {cll(G, (*ds)[0].with(c, T), l), cll(G, (*ds)[1].with(c, dual(T)), r)},
                                   depth, k))
                        return true;
                    for (bool server_right : {true, false}) {
                        const Process& srv = server_right ? r : l;
                        const Process& cli = server_right ? l : r;
                        if (!srv.is(ProcKind::Server) || srv.chan() != c) continue;
                        if (!(server_right ? T.is(TypeKind::Query) : T.is(TypeKind::Bang))) continue;
                        Type a = server_right ? T.body() : dual(T.body());
                        Judgment client = cll(G.with(c, a), D, cli);
                        Name y = pick(srv.binder(), client);
                        Judgment server = cll(G, Context{{y, dual(a)}}, rename(srv.first(), y, srv.binder()));
                        std::vector<Judgment> goals = server_right ? std::vector<Judgment>{client, server}
                                                                   : std::vector<Judgment>{server, client};
                        if (nary(server_right ? "cut?R" : "cut?L", g, goals, depth, k)) return true;
                    }
                }
                return false;
            }
            case ProcKind::Par: {
                if (!has("mix")) return false;
                auto ds = split(D, {free_names(P.first()), free_names(P.second())});
                if (!ds) return false;
                return nary("mix", g, {cll(G, (*ds)[0], P.first()), cll(G, (*ds)[1], P.second())}, depth, k);
            }
        }
        return false;
    }
};

std::vector<Type> effective_universe(const Judgment& goal, const InferenceBudget& budget) {
    if (!budget.universe.empty()) return budget.universe;
    std::set<Type> acc;
    for (const auto& t : harvest_types(goal.process)) acc.insert(t);
    for (const Context* c : {&goal.gamma, &goal.delta, &goal.lambda})
        for (const auto& [n, t] : c->entries())
            for (const auto& s : subterms(t)) {
                acc.insert(s);
                acc.insert(dual(s));
            }
    return {acc.begin(), acc.end()};
}

}  // namespace

InferResult infer(const Judgment& goal, const InferenceBudget& budget, const CheckerConfig& cfg) {
    if (auto e = judgment_problem(goal); !e.empty()) return NotFound{"ill-formed goal: " + e, print_judgment(goal), false};
    Engine en(goal.system, budget, cfg, effective_universe(goal, budget));
    std::optional<Derivation> found;
    try {
        en.solve(goal, 0, [&](Derivation d) {
            found = std::move(d);
            return true;
        });
    } catch (const OutOfBudget&) {
    }
    if (found) return *found;
    if (en.need_annotation) return AnnotationRequired{*en.need_annotation};
    NotFound nf;
    nf.budget_exhausted = en.exhausted;
    nf.reason = en.exhausted ? "search budget exhausted" : "no derivation exists";
    nf.frontier = en.frontier;
    return nf;
}

std::vector<Derivation> infer_every(const Judgment& goal, const InferenceBudget& budget,
                                    const CheckerConfig& cfg, std::size_t limit) {
    std::vector<Derivation> out;
    if (!judgment_problem(goal).empty() || limit == 0) return out;
    Engine en(goal.system, budget, cfg, effective_universe(goal, budget));
    try {
        en.solve(goal, 0, [&](Derivation d) {
            for (const auto& o : out)
                if (same_tree(o, d)) return false;
            out.push_back(std::move(d));
            return out.size() >= limit;
        });
    } catch (const OutOfBudget&) {
    }
    return out;
}

std::vector<std::pair<Judgment, Derivation>> infer_all(const Process& process, System system,
                                                       const InferenceBudget& budget,
                                                       const CheckerConfig& cfg) {
    std::vector<std::pair<Judgment, Derivation>> out;
    std::vector<Type> universe = budget.universe.empty() ? harvest_types(process) : budget.universe;
    if (universe.empty()) return out;
    std::vector<Name> names;
    for (const auto& n : free_names(process)) names.push_back(n);
    InferenceBudget b = budget;
    b.universe = universe;

    // choice[i]: index into universe, and side (false = delta, true = lambda).
    std::vector<std::pair<std::size_t, bool>> choice(names.size(), {0, false});
    auto emit = [&]() {
        Judgment j;
        j.system = system;
        j.process = process;
        std::size_t right = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const Type& t = universe[choice[i].first];
            if (choice[i].second) {
                j.lambda.add(names[i], t);
                ++right;
            } else {
                j.delta.add(names[i], t);
            }
        }
        if (system == System::ILL && right != 1) return;
        if (system == System::CLL && right != 0) return;
        if (!judgment_problem(j).empty()) return;
        for (auto& d : infer_every(j, b, cfg)) {
            bool dup = false;
            for (const auto& [oj, od] : out)
                if (same_tree(od, d)) dup = true;
            if (!dup) out.emplace_back(j, std::move(d));
        }
    };
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == names.size()) {
            emit();
            return;
        }
        for (std::size_t t = 0; t < universe.size(); ++t)
            for (bool side : {false, true}) {
                if (side && system == System::CLL) continue;
                choice[i] = {t, side};
                go(i + 1);
            }
    };
    go(0);
    return out;
}

}  // namespace sf
