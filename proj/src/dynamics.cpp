#include "sessionforge/dynamics.hpp"

#include <deque>
#include <map>
#include <set>

#include <json.hpp>

#include "sessionforge/syntax.hpp"

namespace sf {

std::string axiom_name(CongAxiom a) {
    switch (a) {
        case CongAxiom::CutSymm: return "cutSymm";
        case CongAxiom::CutAssocL: return "cutAssocL";
        case CongAxiom::CutAssocR: return "cutAssocR";
    }
    return "?";
}

std::string step_rule_name(StepRule r) {
    switch (r) {
        case StepRule::BetaId: return "betaId";
        case StepRule::BetaClose: return "betaClose";
        case StepRule::BetaSend: return "betaSend";
        case StepRule::BetaSel: return "betaSel";
        case StepRule::BetaServ: return "betaServ";
        case StepRule::BetaWeaken: return "betaWeaken";
        case StepRule::KappaClose: return "kappaClose";
        case StepRule::KappaSendR: return "kappaSendR";
        case StepRule::KappaSendL: return "kappaSendL";
        case StepRule::KappaRecv: return "kappaRecv";
        case StepRule::KappaSel: return "kappaSel";
        case StepRule::KappaBra: return "kappaBra";
        case StepRule::KappaCopy: return "kappaCopy";
        case StepRule::KappaSendBoth: return "kappaSendBoth";
    }
    return "?";
}

// ---- alpha keys ----

namespace {

struct KeyEnv {
    std::vector<std::pair<Name, std::string>> stack;
    int next = 0;
    std::string look(const Name& n) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->first == n) return it->second;
        return n;
    }
    std::string bind(const Name& n) {
        std::string k = "%" + std::to_string(next++);
        stack.emplace_back(n, k);
        return k;
    }
};

void key_rec(const Process& p, KeyEnv& env, std::string& out) {
    switch (p.kind()) {
        case ProcKind::Inact:
            out += "0";
            return;
        case ProcKind::Restrict: {
            out += "(new ";
            out += p.ann() ? print_type(*p.ann()) : "-";
            out += " " + env.bind(p.chan()) + " ";
            key_rec(p.first(), env, out);
            env.stack.pop_back();
            out += ")";
            return;
        }
        case ProcKind::Par:
            out += "(";
            key_rec(p.first(), env, out);
            out += " | ";
            key_rec(p.second(), env, out);
            out += ")";
            return;
        case ProcKind::Send: {
            out += (p.bound_send() ? "(send " : "(copy ") + env.look(p.chan()) + " ";
            out += env.bind(p.binder()) + " ";
            key_rec(p.first(), env, out);
            if (p.bound_send()) {
                out += " ";
                key_rec(p.second(), env, out);
            }
            env.stack.pop_back();
            out += ")";
            return;
        }
        case ProcKind::Recv:
        case ProcKind::Server: {
            out += (p.is(ProcKind::Recv) ? "(recv " : "(serv ") + env.look(p.chan()) + " ";
            out += env.bind(p.binder()) + " ";
            key_rec(p.first(), env, out);
            env.stack.pop_back();
            out += ")";
            return;
        }
        case ProcKind::Select:
            out += "(sel " + env.look(p.chan()) + " " + p.label() + " ";
            key_rec(p.first(), env, out);
            out += ")";
            return;
        case ProcKind::Branch:
            out += "(bra " + env.look(p.chan());
            for (const auto& [l, a] : p.arms()) {
                out += " " + l + ":";
                key_rec(a, env, out);
            }
            out += ")";
            return;
        case ProcKind::Forward:
            out += "(fwd " + env.look(p.chan()) + " " + env.look(p.name2()) + ")";
            return;
        case ProcKind::Close:
            out += "(close " + env.look(p.chan()) + ")";
            return;
        case ProcKind::Wait:
            out += "(wait " + env.look(p.chan()) + " ";
            key_rec(p.first(), env, out);
            out += ")";
            return;
    }
}

}  // namespace

std::string alpha_key(const Process& p) {
    KeyEnv env;
    std::string out;
    key_rec(p, env, out);
    return out;
}

// ---- congruence ----

namespace {

std::optional<Type> dual_ann(const std::optional<Type>& t) {
    if (!t) return std::nullopt;
    return dual(*t);
}

Process symm(const Process& p) {
    return Process::cut(p.chan(), dual_ann(p.ann()), p.first().second(), p.first().first());
}

// Root-level rewrites of p.
std::vector<std::pair<CongAxiom, Process>> root_axioms(const Process& p) {
    std::vector<std::pair<CongAxiom, Process>> out;
    if (!p.is_cut()) return out;
    const Name& x = p.chan();
    const Process& P = p.first().first();
    const Process& B = p.first().second();
    out.emplace_back(CongAxiom::CutSymm, symm(p));
    if (B.is_cut()) {
        // nu x (P | nu y (Q | R))
        const Name& y = B.chan();
        const Process& Q = B.first().first();
        const Process& R = B.first().second();
        NameSet fp = free_names(P);
        if (x != y && !fp.count(y)) {
            if (!free_names(Q).count(x))
                out.emplace_back(CongAxiom::CutAssocL,
                                 Process::cut(y, B.ann(), Q, Process::cut(x, p.ann(), P, R)));
            if (!free_names(R).count(x))
                out.emplace_back(CongAxiom::CutAssocR,
                                 Process::cut(y, B.ann(), Process::cut(x, p.ann(), P, Q), R));
        }
    }
    if (P.is_cut()) {
        // nu y (nu x (P' | Q) | R)  ==  nu x (P' | nu y (Q | R))
        const Name& y = x;
        const Name& xi = P.chan();
        const Process& P2 = P.first().first();
        const Process& Q = P.first().second();
        const Process& R = B;
        if (xi != y && !free_names(R).count(xi) && !free_names(P2).count(y))
            out.emplace_back(CongAxiom::CutAssocR,
                             Process::cut(xi, P.ann(), P2, Process::cut(y, p.ann(), Q, R)));
    }
    return out;
}

using Rewrites = std::vector<std::pair<CongAxiom, Process>>;

void all_axioms(const Process& p, Rewrites& out);

// Rewrites inside child c, wrapped back by `wrap`.
template <class Wrap>
void inside(const Process& c, Rewrites& out, Wrap wrap) {
    Rewrites sub;
    all_axioms(c, sub);
    for (auto& [a, q] : sub) out.emplace_back(a, wrap(q));
}

void all_axioms(const Process& p, Rewrites& out) {
    for (auto& r : root_axioms(p)) out.push_back(std::move(r));
    switch (p.kind()) {
        case ProcKind::Restrict:
            inside(p.first(), out, [&](const Process& q) { return Process::restrict(p.chan(), p.ann(), q); });
            break;
        case ProcKind::Par:
            inside(p.first(), out, [&](const Process& q) { return Process::par(q, p.second()); });
            inside(p.second(), out, [&](const Process& q) { return Process::par(p.first(), q); });
            break;
        case ProcKind::Send:
            if (p.bound_send()) {
                inside(p.first(), out, [&](const Process& q) { return Process::send(p.chan(), p.binder(), q, p.second()); });
                inside(p.second(), out, [&](const Process& q) { return Process::send(p.chan(), p.binder(), p.first(), q); });
            } else {
                inside(p.first(), out, [&](const Process& q) { return Process::copy(p.chan(), p.binder(), q); });
            }
            break;
        case ProcKind::Recv:
            inside(p.first(), out, [&](const Process& q) { return Process::recv(p.chan(), p.binder(), q); });
            break;
        case ProcKind::Server:
            inside(p.first(), out, [&](const Process& q) { return Process::server(p.chan(), p.binder(), q); });
            break;
        case ProcKind::Select:
            inside(p.first(), out, [&](const Process& q) { return Process::select(p.chan(), p.label(), q); });
            break;
        case ProcKind::Wait:
            inside(p.first(), out, [&](const Process& q) { return Process::wait(p.chan(), q); });
            break;
        case ProcKind::Branch:
            for (const auto& [l, a] : p.arms()) {
                inside(a, out, [&, lab = l](const Process& q) {
                    Process::Arms arms = p.arms();
                    arms[lab] = q;
                    return Process::branch(p.chan(), arms);
                });
            }
            break;
        default:
            break;
    }
}

}  // namespace

std::vector<std::pair<CongAxiom, Process>> congruence_axioms(const Process& p) {
    Rewrites out;
    all_axioms(p, out);
    return out;
}

std::optional<std::vector<CongAxiom>> congruent(const Process& p, const Process& q, int budget) {
    std::string goal = alpha_key(q);
    struct Entry {
        Process term;
        std::vector<CongAxiom> path;
    };
    std::deque<Entry> frontier{{p, {}}};
    std::set<std::string> seen{alpha_key(p)};
    while (!frontier.empty()) {
        Entry e = std::move(frontier.front());
        frontier.pop_front();
        if (alpha_key(e.term) == goal) return e.path;
        if (static_cast<int>(e.path.size()) >= budget) continue;
        for (auto& [a, r] : congruence_axioms(e.term)) {
            if (!seen.insert(alpha_key(r)).second) continue;
            Entry n{r, e.path};
            n.path.push_back(a);
            frontier.push_back(std::move(n));
        }
    }
    return std::nullopt;
}

// ---- reduction ----

namespace {

using Local = std::vector<std::pair<StepRule, Process>>;

Name fresh_for(const Name& b, std::initializer_list<const Process*> ps, const Name& x) {
    NameSet avoid{x};
    for (const Process* p : ps)
        for (const auto& n : all_names(*p)) avoid.insert(n);
    return fresh_name(b, avoid);
}

std::optional<Type> ann_part(const std::optional<Type>& t, TypeKind k, int which) {
    if (!t || !t->is(k)) return std::nullopt;
    return which == 0 ? t->left() : t->right();
}

Process res(const Name& x, const std::optional<Type>& ann, const Process& l, const Process& r) {
    return Process::cut(x, ann, l, r);
}

// beta and kappa redexes of nu x:ann (A | B) in the printed orientation.
Local local_redexes(const Name& x, const std::optional<Type>& ann, const Process& A, const Process& B) {
    Local out;
    // betaId
    if (B.is(ProcKind::Forward) && B.chan() != B.name2() && (B.chan() == x || B.name2() == x)) {
        const Name& y = B.chan() == x ? B.name2() : B.chan();
        out.emplace_back(StepRule::BetaId, substitute(A, y, x));
    }
    // betaClose
    if (A.is(ProcKind::Close) && A.chan() == x && B.is(ProcKind::Wait) && B.chan() == x)
        out.emplace_back(StepRule::BetaClose, B.first());
    // betaSend
    if (A.bound_send() && A.chan() == x && B.is(ProcKind::Recv) && B.chan() == x &&
        !free_names(A.second()).count(A.binder())) {
        Name y = A.binder();
        if (y == x || free_names(B).count(y)) y = fresh_for(y, {&A, &B}, x);
        Process p1 = y == A.binder() ? A.first() : substitute(A.first(), y, A.binder());
        Process q = substitute(B.first(), y, B.binder());
        out.emplace_back(StepRule::BetaSend,
                         res(x, ann_part(ann, TypeKind::Tensor, 1), A.second(),
                             res(y, ann_part(ann, TypeKind::Tensor, 0), p1, q)));
    }
    // betaSel
    if (A.is(ProcKind::Select) && A.chan() == x && B.is(ProcKind::Branch) && B.chan() == x) {
        auto it = B.arms().find(A.label());
        if (it != B.arms().end()) {
            std::optional<Type> a;
            if (ann && ann->is(TypeKind::Plus)) {
                auto bt = ann->branches().find(A.label());
                if (bt != ann->branches().end()) a = bt->second;
            }
            out.emplace_back(StepRule::BetaSel, res(x, a, A.first(), it->second));
        }
    }
    // betaServ, betaWeaken
    if (B.is(ProcKind::Server) && B.chan() == x) {
        if (A.copy_send() && A.chan() == x) {
            Name y = A.binder();
            if (y == x || free_names(B).count(y)) y = fresh_for(y, {&A, &B}, x);
            Process p = y == A.binder() ? A.first() : substitute(A.first(), y, A.binder());
            std::optional<Type> inner;
            if (ann && ann->is(TypeKind::Query)) inner = ann->body();
            out.emplace_back(StepRule::BetaServ,
                             res(x, ann, res(y, inner, p, substitute(B.first(), y, B.binder())), B));
        }
        if (!free_names(A).count(x)) out.emplace_back(StepRule::BetaWeaken, A);
    }
    // kappa rules: prefix on a channel other than x in B.
    NameSet fa = free_names(A);
    auto binder_for = [&](const Process& pre) {
        Name z = pre.binder();
        if (z == x || fa.count(z)) z = fresh_for(z, {&A, &B}, x);
        return z;
    };
    if (B.is(ProcKind::Wait) && B.chan() != x)
        out.emplace_back(StepRule::KappaClose, Process::wait(B.chan(), res(x, ann, A, B.first())));
    if (B.is(ProcKind::Recv) && B.chan() != x) {
        Name z = binder_for(B);
        Process q = substitute(B.first(), z, B.binder());
        out.emplace_back(StepRule::KappaRecv, Process::recv(B.chan(), z, res(x, ann, A, q)));
    }
    if (B.is(ProcKind::Select) && B.chan() != x)
        out.emplace_back(StepRule::KappaSel, Process::select(B.chan(), B.label(), res(x, ann, A, B.first())));
    if (B.bound_send() && B.chan() != x) {
        Name z = binder_for(B);
        Process q1 = substitute(B.first(), z, B.binder());
        Process q2 = substitute(B.second(), z, B.binder());
        bool in1 = free_names(q1).count(x) > 0, in2 = free_names(q2).count(x) > 0;
        if (in2 && !in1)
            out.emplace_back(StepRule::KappaSendR, Process::send(B.chan(), z, q1, res(x, ann, A, q2)));
        if (in1 && !in2)
            out.emplace_back(StepRule::KappaSendL, Process::send(B.chan(), z, res(x, ann, A, q1), q2));
        if (in1 && in2 && A.is(ProcKind::Server) && A.chan() == x)
            out.emplace_back(StepRule::KappaSendBoth,
                             Process::send(B.chan(), z, res(x, ann, A, q1), res(x, ann, A, q2)));
    }
    if (B.copy_send() && B.chan() != x) {
        Name z = binder_for(B);
        Process q = substitute(B.first(), z, B.binder());
        out.emplace_back(StepRule::KappaCopy, Process::copy(B.chan(), z, res(x, ann, A, q)));
    }
    if (A.is(ProcKind::Branch) && A.chan() != x) {
        Process::Arms arms;
        for (const auto& [l, a] : A.arms()) arms[l] = res(x, ann, a, B);
        out.emplace_back(StepRule::KappaBra, Process::branch(A.chan(), arms));
    }
    return out;
}

std::vector<std::string> plus(std::vector<std::string> v, const std::string& s) {
    v.push_back(s);
    return v;
}

struct Found {
    StepRule rule;
    std::vector<std::string> preamble;
    Process result;
};

// Redexes at the restriction nu x:ann (A | B), using cutSymm and
// associativity to bring x's two endpoints next to each other.
void redexes_at(const Name& x, const std::optional<Type>& ann, const Process& A, const Process& B,
                const std::vector<std::string>& pre, std::vector<Found>& out, bool swapped = false) {
    for (auto& [r, q] : local_redexes(x, ann, A, B)) out.push_back({r, pre, q});
    if (B.is_cut()) {
        const Name& y = B.chan();
        const Process& C = B.first().first();
        const Process& D = B.first().second();
        if (y != x && !free_names(A).count(y)) {
            if (!free_names(C).count(x)) {
                std::vector<Found> inner;
                redexes_at(x, ann, A, D, plus(pre, "cutAssocL"), inner);
                for (auto& f : inner) out.push_back({f.rule, f.preamble, res(y, B.ann(), C, f.result)});
            }
            if (!free_names(D).count(x)) {
                std::vector<Found> inner;
                redexes_at(x, ann, A, C, plus(pre, "cutAssocR"), inner);
                for (auto& f : inner) out.push_back({f.rule, f.preamble, res(y, B.ann(), f.result, D)});
            }
        }
    }
    if (!swapped) redexes_at(x, dual_ann(ann), B, A, plus(pre, "cutSymm"), out, true);
}

void collect(const Process& p, NodePath& pos, bool top, bool mix, std::vector<Step>& out) {
    auto wrap_into = [&](std::vector<Step> inner, auto rebuild, int child, const char* extra) {
        for (auto& s : inner) {
            s.result = rebuild(s.result);
            if (extra) s.label.preamble.insert(s.label.preamble.begin(), extra);
            (void)child;
            out.push_back(std::move(s));
        }
    };
    switch (p.kind()) {
        case ProcKind::Restrict: {
            const Name& x = p.chan();
            if (p.is_cut()) {
                std::vector<Found> here;
                redexes_at(x, p.ann(), p.first().first(), p.first().second(), {}, here);
                for (auto& f : here) out.push_back({{f.rule, pos, f.preamble}, f.result});
                const Process& L = p.first().first();
                const Process& R = p.first().second();
                std::vector<Step> in_r, in_l;
                pos.push_back(0);
                pos.push_back(1);
                collect(R, pos, false, mix, in_r);
                pos.back() = 0;
                collect(L, pos, false, mix, in_l);
                pos.pop_back();
                pos.pop_back();
                wrap_into(std::move(in_r), [&](const Process& q) { return res(x, p.ann(), L, q); }, 1, nullptr);
                wrap_into(std::move(in_l), [&](const Process& q) { return res(x, p.ann(), q, R); }, 0, "cutSymm");
            } else {
                std::vector<Step> in;
                pos.push_back(0);
                collect(p.first(), pos, false, mix, in);
                pos.pop_back();
                wrap_into(std::move(in), [&](const Process& q) { return Process::restrict(x, p.ann(), q); }, 0,
                          nullptr);
            }
            return;
        }
        case ProcKind::Par: {
            std::vector<Step> in_r, in_l;
            pos.push_back(1);
            collect(p.second(), pos, false, mix, in_r);
            pos.back() = 0;
            if (mix && top) collect(p.first(), pos, false, mix, in_l);
            pos.pop_back();
            wrap_into(std::move(in_r), [&](const Process& q) { return Process::par(p.first(), q); }, 1, nullptr);
            wrap_into(std::move(in_l), [&](const Process& q) { return Process::par(q, p.second()); }, 0, nullptr);
            return;
        }
        default:
            return;
    }
}

}  // namespace

std::vector<Step> step(const Process& p, bool mix) {
    std::vector<Step> raw;
    NodePath pos;
    collect(p, pos, true, mix, raw);
    std::vector<Step> out;
    std::set<std::pair<int, std::string>> seen;
    for (auto& s : raw)
        if (seen.insert({static_cast<int>(s.label.rule), alpha_key(s.result)}).second) out.push_back(std::move(s));
    return out;
}

// ---- proof-directed redex ----

namespace {

bool prefixed_on(const Process& p, const Name& x) {
    switch (p.kind()) {
        case ProcKind::Send:
        case ProcKind::Recv:
        case ProcKind::Select:
        case ProcKind::Branch:
        case ProcKind::Server:
        case ProcKind::Close:
        case ProcKind::Wait:
            return p.chan() == x;
        case ProcKind::Forward:
            return p.chan() == x || p.name2() == x;
        default:
            return false;
    }
}

bool is_prefix(const Process& p) {
    switch (p.kind()) {
        case ProcKind::Send:
        case ProcKind::Recv:
        case ProcKind::Select:
        case ProcKind::Branch:
        case ProcKind::Wait:
            return true;
        default:
            return false;
    }
}

std::optional<Step> pick(const Name& x, const std::optional<Type>& ann, const Process& A, const Process& B,
                         bool swap, std::initializer_list<StepRule> want) {
    const Process& l = swap ? B : A;
    const Process& r = swap ? A : B;
    for (auto& [rule, q] : local_redexes(x, swap ? dual_ann(ann) : ann, l, r))
        for (StepRule w : want)
            if (rule == w) {
                Step s{{rule, {}, {}}, q};
                if (swap) s.label.preamble.push_back("cutSymm");
                return s;
            }
    return std::nullopt;
}

Name added_name(const Context& more, const Context& less) {
    for (const auto& [n, t] : more.entries())
        if (!less.has(n)) return n;
    return {};
}

Step redex(const Derivation& d) {
    const std::string& rule = d.rule;
    const Judgment& J = d.conclusion;
    if (rule == "!L" || rule == "?R" || rule == "?") {
        const Judgment& p = d.premises.at(0).conclusion;
        Name u = added_name(p.gamma, J.gamma);
        Name xx = rule == "?R" ? added_name(J.lambda, p.lambda) : added_name(J.delta, p.delta);
        Step s = redex(d.premises[0]);
        if (u != xx) s.result = substitute(s.result, xx, u);
        return s;
    }
    if (rule == "moveL" || rule == "moveR") return redex(d.premises.at(0));
    if (!is_cut_rule(rule) || !J.process.is_cut())
        throw MalformedDerivation("no cut at the root (rule " + rule + ")");

    const Process& P = J.process;
    const Name& x = P.chan();
    const Process& L = P.first().first();
    const Process& R = P.first().second();
    // A server on the cut channel is replicated whichever cut rule typed it.
    bool unrestricted = (R.is(ProcKind::Server) && R.chan() == x) || (L.is(ProcKind::Server) && L.chan() == x);

    // Forwarders on the cut channel.
    if (R.is(ProcKind::Forward) && prefixed_on(R, x))
        if (auto s = pick(x, P.ann(), L, R, false, {StepRule::BetaId})) return *s;
    if (L.is(ProcKind::Forward) && prefixed_on(L, x))
        if (auto s = pick(x, P.ann(), L, R, true, {StepRule::BetaId})) return *s;

    if (unrestricted) {
        bool server_right = R.is(ProcKind::Server) && R.chan() == x;
        const Process& client = server_right ? L : R;
        if (!free_names(client).count(x))
            if (auto s = pick(x, P.ann(), L, R, !server_right, {StepRule::BetaWeaken})) return *s;
        if (client.copy_send() && client.chan() == x)
            if (auto s = pick(x, P.ann(), L, R, !server_right, {StepRule::BetaServ})) return *s;
    } else if (prefixed_on(L, x) && prefixed_on(R, x)) {
        for (bool swap : {false, true})
            if (auto s = pick(x, P.ann(), L, R, swap, {StepRule::BetaClose, StepRule::BetaSend, StepRule::BetaSel}))
                return *s;
        throw MalformedDerivation("both components act on " + x + " but no beta rule matches");
    }

    // A component prefixed on another channel commutes out of the restriction.
    const std::initializer_list<StepRule> kappas = {StepRule::KappaClose, StepRule::KappaSendR,
                                                    StepRule::KappaSendL, StepRule::KappaSendBoth,
                                                    StepRule::KappaRecv,  StepRule::KappaSel,
                                                    StepRule::KappaCopy,  StepRule::KappaBra};
    for (bool right : {true, false}) {
        const Process& c = right ? R : L;
        if (!is_prefix(c) || prefixed_on(c, x)) continue;
        bool swap = c.is(ProcKind::Branch) ? right : !right;
        if (auto s = pick(x, P.ann(), L, R, swap, kappas)) return *s;
    }

    // Otherwise a component is itself a cut: reduce inside it.
    for (int i : {1, 0}) {
        const Process& c = i ? R : L;
        if (!c.is(ProcKind::Restrict)) continue;
        const Derivation& sub = d.premises.at(i);
        Name cc;
        for (const auto& n : sub.conclusion.gamma.names())
            if (!J.gamma.has(n)) cc = n;
        for (const Context* ctx : {&sub.conclusion.delta, &sub.conclusion.lambda})
            for (const auto& n : ctx->names())
                if (!J.delta.has(n) && !J.lambda.has(n) && !J.gamma.has(n)) cc = n;
        Step s = redex(sub);
        Process q = cc.empty() || cc == x ? s.result : substitute(s.result, x, cc);
        s.label.position.insert(s.label.position.begin(), {0, i});
        s.result = i ? res(x, P.ann(), L, q) : res(x, P.ann(), q, R);
        if (i == 0) s.label.preamble.insert(s.label.preamble.begin(), "cutSymm");
        return s;
    }
    throw MalformedDerivation("no redex found for the cut on " + x);
}

}  // namespace

Step find_redex(const Derivation& d) {
    if (auto r = check_derivation(d); !r.ok) throw MalformedDerivation(r.message());
    return redex(d);
}

RunResult run_closed(const Derivation& d, int fuel, const InferenceBudget& budget) {
    if (auto r = check_derivation(d); !r.ok) throw MalformedDerivation(r.message());
    RunResult out;
    Derivation cur = d;
    Process p = d.conclusion.process;
    while (p.is(ProcKind::Restrict)) {
        if (static_cast<int>(out.trace.size()) >= fuel)
            throw FuelExhausted("fuel of " + std::to_string(fuel) + " steps exhausted", out.trace);
        Step s = redex(cur);
        out.states.push_back(p);
        out.trace.push_back(s);
        Judgment next = cur.conclusion;
        next.process = s.result;
        InferResult ir = infer(next, budget);
        if (!std::holds_alternative<Derivation>(ir))
            throw TypePreservationFailure("reduct of " + step_rule_name(s.label.rule) +
                                              " does not re-derive: " + print_judgment(next),
                                          out.trace);
        cur = std::get<Derivation>(ir);
        p = s.result;
    }
    out.terminal = p;
    return out;
}

std::string trace_jsonl(const RunResult& r) {
    std::string out;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        nlohmann::ordered_json j;
        j["rule"] = step_rule_name(r.trace[i].label.rule);
        j["position"] = print_path(r.trace[i].label.position);
        j["before"] = print_process(r.states[i]);
        j["after"] = print_process(r.trace[i].result);
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace sf
