#include "sessionforge/process.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace sf {

namespace {

const Name& empty_name() {
    static const Name n;
    return n;
}

const Process& inact_ref() {
    static const Process p;
    return p;
}

const Process::Arms& no_arms() {
    static const Process::Arms a;
    return a;
}

const std::optional<Type>& no_ann() {
    static const std::optional<Type> t;
    return t;
}

}  // namespace

Process::Process() = default;

Process Process::inact() { return Process(); }

Process Process::restrict(Name x, std::optional<Type> ann, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Restrict;
    n->x = std::move(x);
    n->ann = std::move(ann);
    n->p = std::move(body);
    return Process(std::move(n));
}

Process Process::cut(Name x, std::optional<Type> ann, Process l, Process r) {
    return restrict(std::move(x), std::move(ann), par(std::move(l), std::move(r)));
}

Process Process::par(Process l, Process r) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Par;
    n->p = std::move(l);
    n->q = std::move(r);
    return Process(std::move(n));
}

Process Process::send(Name x, Name y, Process l, Process r) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Send;
    n->x = std::move(x);
    n->y = std::move(y);
    n->p = std::move(l);
    n->q = std::move(r);
    n->two = true;
    return Process(std::move(n));
}

Process Process::copy(Name u, Name y, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Send;
    n->x = std::move(u);
    n->y = std::move(y);
    n->p = std::move(body);
    n->two = false;
    return Process(std::move(n));
}

Process Process::recv(Name x, Name y, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Recv;
    n->x = std::move(x);
    n->y = std::move(y);
    n->p = std::move(body);
    return Process(std::move(n));
}

Process Process::select(Name x, std::string label, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Select;
    n->x = std::move(x);
    n->y = std::move(label);
    n->p = std::move(body);
    return Process(std::move(n));
}

Process Process::branch(Name x, Arms arms) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Branch;
    n->x = std::move(x);
    n->arms = std::move(arms);
    return Process(std::move(n));
}

Process Process::server(Name x, Name y, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Server;
    n->x = std::move(x);
    n->y = std::move(y);
    n->p = std::move(body);
    return Process(std::move(n));
}

Process Process::fwd(Name x, Name y) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Forward;
    n->x = std::move(x);
    n->y = std::move(y);
    return Process(std::move(n));
}

Process Process::close(Name x) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Close;
    n->x = std::move(x);
    return Process(std::move(n));
}

Process Process::wait(Name x, Process body) {
    auto n = std::make_shared<ProcNode>();
    n->kind = ProcKind::Wait;
    n->x = std::move(x);
    n->p = std::move(body);
    return Process(std::move(n));
}

ProcKind Process::kind() const { return node_ ? node_->kind : ProcKind::Inact; }
const Name& Process::chan() const { return node_ ? node_->x : empty_name(); }
const Name& Process::name2() const { return node_ ? node_->y : empty_name(); }
const std::optional<Type>& Process::ann() const { return node_ ? node_->ann : no_ann(); }
const Process& Process::first() const { return node_ ? node_->p : inact_ref(); }
const Process& Process::second() const { return node_ ? node_->q : inact_ref(); }
bool Process::bound_send() const { return kind() == ProcKind::Send && node_->two; }
bool Process::copy_send() const { return kind() == ProcKind::Send && !node_->two; }
const Process::Arms& Process::arms() const { return node_ ? node_->arms : no_arms(); }

bool Process::is_cut() const {
    return kind() == ProcKind::Restrict && first().kind() == ProcKind::Par;
}

std::size_t Process::size() const {
    switch (kind()) {
        case ProcKind::Inact:
        case ProcKind::Forward:
        case ProcKind::Close:
            return 1;
        case ProcKind::Restrict:
        case ProcKind::Recv:
        case ProcKind::Select:
        case ProcKind::Server:
        case ProcKind::Wait:
            return 1 + first().size();
        case ProcKind::Par:
            return 1 + first().size() + second().size();
        case ProcKind::Send:
            return 1 + first().size() + (bound_send() ? second().size() : 0);
        case ProcKind::Branch: {
            std::size_t s = 1;
            for (const auto& [l, a] : arms()) s += a.size();
            return s;
        }
    }
    return 1;
}

bool operator==(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ProcKind::Inact:
            return true;
        case ProcKind::Restrict:
            return a.chan() == b.chan() && a.ann() == b.ann() && a.first() == b.first();
        case ProcKind::Par:
            return a.first() == b.first() && a.second() == b.second();
        case ProcKind::Send:
            if (a.bound_send() != b.bound_send()) return false;
            return a.chan() == b.chan() && a.name2() == b.name2() && a.first() == b.first() &&
                   (!a.bound_send() || a.second() == b.second());
        case ProcKind::Recv:
        case ProcKind::Select:
        case ProcKind::Server:
            return a.chan() == b.chan() && a.name2() == b.name2() && a.first() == b.first();
        case ProcKind::Branch:
            return a.chan() == b.chan() && a.arms() == b.arms();
        case ProcKind::Forward:
            return a.chan() == b.chan() && a.name2() == b.name2();
        case ProcKind::Close:
            return a.chan() == b.chan();
        case ProcKind::Wait:
            return a.chan() == b.chan() && a.first() == b.first();
    }
    return false;
}

namespace {

void fn_rec(const Process& p, std::vector<Name>& bound, NameSet& out) {
    auto add = [&](const Name& n) {
        for (const auto& b : bound)
            if (b == n) return;
        out.insert(n);
    };
    switch (p.kind()) {
        case ProcKind::Inact:
            return;
        case ProcKind::Restrict:
            bound.push_back(p.chan());
            fn_rec(p.first(), bound, out);
            bound.pop_back();
            return;
        case ProcKind::Par:
            fn_rec(p.first(), bound, out);
            fn_rec(p.second(), bound, out);
            return;
        case ProcKind::Send:
            add(p.chan());
            bound.push_back(p.name2());
            fn_rec(p.first(), bound, out);
            if (p.bound_send()) fn_rec(p.second(), bound, out);
            bound.pop_back();
            return;
        case ProcKind::Recv:
        case ProcKind::Server:
            add(p.chan());
            bound.push_back(p.name2());
            fn_rec(p.first(), bound, out);
            bound.pop_back();
            return;
        case ProcKind::Select:
        case ProcKind::Wait:
            add(p.chan());
            fn_rec(p.first(), bound, out);
            return;
        case ProcKind::Branch:
            add(p.chan());
            for (const auto& [l, a] : p.arms()) fn_rec(a, bound, out);
            return;
        case ProcKind::Forward:
            add(p.chan());
            add(p.name2());
            return;
        case ProcKind::Close:
            add(p.chan());
            return;
    }
}

void bn_rec(const Process& p, NameSet& out, bool all) {
    switch (p.kind()) {
        case ProcKind::Inact:
            return;
        case ProcKind::Restrict:
            out.insert(p.chan());
            bn_rec(p.first(), out, all);
            return;
        case ProcKind::Par:
            bn_rec(p.first(), out, all);
            bn_rec(p.second(), out, all);
            return;
        case ProcKind::Send:
            if (all) out.insert(p.chan());
            out.insert(p.name2());
            bn_rec(p.first(), out, all);
            if (p.bound_send()) bn_rec(p.second(), out, all);
            return;
        case ProcKind::Recv:
        case ProcKind::Server:
            if (all) out.insert(p.chan());
            out.insert(p.name2());
            bn_rec(p.first(), out, all);
            return;
        case ProcKind::Select:
        case ProcKind::Wait:
            if (all) out.insert(p.chan());
            bn_rec(p.first(), out, all);
            return;
        case ProcKind::Branch:
            if (all) out.insert(p.chan());
            for (const auto& [l, a] : p.arms()) bn_rec(a, out, all);
            return;
        case ProcKind::Forward:
            if (all) {
                out.insert(p.chan());
                out.insert(p.name2());
            }
            return;
        case ProcKind::Close:
            if (all) out.insert(p.chan());
            return;
    }
}

}  // namespace

NameSet free_names(const Process& p) {
    std::vector<Name> bound;
    NameSet out;
    fn_rec(p, bound, out);
    return out;
}

NameSet bound_names(const Process& p) {
    NameSet out;
    bn_rec(p, out, false);
    return out;
}

NameSet all_names(const Process& p) {
    NameSet out;
    bn_rec(p, out, true);
    return out;
}

Name fresh_name(const Name& base, const NameSet& avoid) {
    Name stem = base;
    auto us = stem.rfind('_');
    if (us != Name::npos && us + 1 < stem.size() && us > 0) {
        bool digits = true;
        for (std::size_t i = us + 1; i < stem.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(stem[i]))) digits = false;
        if (digits) stem = stem.substr(0, us);
    }
    if (stem.empty()) stem = "n";
    if (!avoid.count(stem)) return stem;
    for (unsigned i = 1;; ++i) {
        Name c = stem + "_" + std::to_string(i);
        if (!avoid.count(c)) return c;
    }
}

namespace {

Name swap_name(const Name& n, const Name& repl, const Name& target) {
    return n == target ? repl : n;
}

// Substitution under a binder b over the given continuations.
struct BinderResult {
    Name b;
    Process p, q;
};

Process subst_rec(const Process& p, const Name& repl, const Name& target);

BinderResult under_binder(const Name& b, const Process& p, const Process* q, const Name& repl,
                          const Name& target) {
    if (b == target) return {b, p, q ? *q : Process()};
    Name nb = b;
    Process np = p;
    Process nq = q ? *q : Process();
    if (b == repl) {
        NameSet avoid = all_names(p);
        if (q) {
            auto more = all_names(*q);
            avoid.insert(more.begin(), more.end());
        }
        avoid.insert(repl);
        avoid.insert(target);
        nb = fresh_name(b, avoid);
        np = subst_rec(np, nb, b);
        if (q) nq = subst_rec(nq, nb, b);
    }
    np = subst_rec(np, repl, target);
    if (q) nq = subst_rec(nq, repl, target);
    return {nb, np, nq};
}

Process subst_rec(const Process& p, const Name& repl, const Name& target) {
    switch (p.kind()) {
        case ProcKind::Inact:
            return p;
        case ProcKind::Restrict: {
            auto r = under_binder(p.chan(), p.first(), nullptr, repl, target);
            return Process::restrict(r.b, p.ann(), r.p);
        }
        case ProcKind::Par:
            return Process::par(subst_rec(p.first(), repl, target),
                                subst_rec(p.second(), repl, target));
        case ProcKind::Send: {
            Name c = swap_name(p.chan(), repl, target);
            if (p.bound_send()) {
                auto r = under_binder(p.name2(), p.first(), &p.second(), repl, target);
                return Process::send(c, r.b, r.p, r.q);
            }
            auto r = under_binder(p.name2(), p.first(), nullptr, repl, target);
            return Process::copy(c, r.b, r.p);
        }
        case ProcKind::Recv: {
            auto r = under_binder(p.name2(), p.first(), nullptr, repl, target);
            return Process::recv(swap_name(p.chan(), repl, target), r.b, r.p);
        }
        case ProcKind::Server: {
            auto r = under_binder(p.name2(), p.first(), nullptr, repl, target);
            return Process::server(swap_name(p.chan(), repl, target), r.b, r.p);
        }
        case ProcKind::Select:
            return Process::select(swap_name(p.chan(), repl, target), p.label(),
                                   subst_rec(p.first(), repl, target));
        case ProcKind::Wait:
            return Process::wait(swap_name(p.chan(), repl, target),
                                 subst_rec(p.first(), repl, target));
        case ProcKind::Branch: {
            Process::Arms arms;
            for (const auto& [l, a] : p.arms()) arms.emplace(l, subst_rec(a, repl, target));
            return Process::branch(swap_name(p.chan(), repl, target), std::move(arms));
        }
        case ProcKind::Forward:
            return Process::fwd(swap_name(p.chan(), repl, target),
                                swap_name(p.name2(), repl, target));
        case ProcKind::Close:
            return Process::close(swap_name(p.chan(), repl, target));
    }
    return p;
}

using Env = std::vector<std::pair<Name, Name>>;

bool same_name(const Env& env, const Name& a, const Name& b) {
    for (std::size_t i = env.size(); i-- > 0;) {
        bool ha = env[i].first == a;
        bool hb = env[i].second == b;
        if (ha || hb) return ha && hb;
    }
    return a == b;
}

bool alpha_rec(const Process& p, const Process& q, Env& env) {
    if (p.kind() != q.kind()) return false;
    auto bind = [&](const Name& a, const Name& b, auto&& body) {
        env.emplace_back(a, b);
        bool r = body();
        env.pop_back();
        return r;
    };
    switch (p.kind()) {
        case ProcKind::Inact:
            return true;
        case ProcKind::Restrict:
            if (p.ann() != q.ann()) return false;
            return bind(p.chan(), q.chan(), [&] { return alpha_rec(p.first(), q.first(), env); });
        case ProcKind::Par:
            return alpha_rec(p.first(), q.first(), env) && alpha_rec(p.second(), q.second(), env);
        case ProcKind::Send:
            if (p.bound_send() != q.bound_send()) return false;
            if (!same_name(env, p.chan(), q.chan())) return false;
            return bind(p.name2(), q.name2(), [&] {
                return alpha_rec(p.first(), q.first(), env) &&
                       (!p.bound_send() || alpha_rec(p.second(), q.second(), env));
            });
        case ProcKind::Recv:
        case ProcKind::Server:
            if (!same_name(env, p.chan(), q.chan())) return false;
            return bind(p.name2(), q.name2(), [&] { return alpha_rec(p.first(), q.first(), env); });
        case ProcKind::Select:
            return same_name(env, p.chan(), q.chan()) && p.label() == q.label() &&
                   alpha_rec(p.first(), q.first(), env);
        case ProcKind::Wait:
            return same_name(env, p.chan(), q.chan()) && alpha_rec(p.first(), q.first(), env);
        case ProcKind::Branch: {
            if (!same_name(env, p.chan(), q.chan())) return false;
            if (p.arms().size() != q.arms().size()) return false;
            auto i = p.arms().begin();
            auto j = q.arms().begin();
            for (; i != p.arms().end(); ++i, ++j) {
                if (i->first != j->first) return false;
                if (!alpha_rec(i->second, j->second, env)) return false;
            }
            return true;
        }
        case ProcKind::Forward:
            return same_name(env, p.chan(), q.chan()) && same_name(env, p.name2(), q.name2());
        case ProcKind::Close:
            return same_name(env, p.chan(), q.chan());
    }
    return false;
}

Process bar_rec(const Process& p, NameSet& used) {
    auto fresh_for = [&](const Name& b) {
        Name nb = used.count(b) ? fresh_name(b, used) : b;
        used.insert(nb);
        return nb;
    };
    switch (p.kind()) {
        case ProcKind::Inact:
        case ProcKind::Forward:
        case ProcKind::Close:
            return p;
        case ProcKind::Restrict: {
            Name nb = fresh_for(p.chan());
            Process body = nb == p.chan() ? p.first() : subst_rec(p.first(), nb, p.chan());
            return Process::restrict(nb, p.ann(), bar_rec(body, used));
        }
        case ProcKind::Par: {
            Process l = bar_rec(p.first(), used);
            return Process::par(l, bar_rec(p.second(), used));
        }
        case ProcKind::Send: {
            Name nb = fresh_for(p.name2());
            auto ren = [&](const Process& c) {
                return nb == p.name2() ? c : subst_rec(c, nb, p.name2());
            };
            if (p.bound_send()) {
                Process l = bar_rec(ren(p.first()), used);
                return Process::send(p.chan(), nb, l, bar_rec(ren(p.second()), used));
            }
            return Process::copy(p.chan(), nb, bar_rec(ren(p.first()), used));
        }
        case ProcKind::Recv:
        case ProcKind::Server: {
            Name nb = fresh_for(p.name2());
            Process body = nb == p.name2() ? p.first() : subst_rec(p.first(), nb, p.name2());
            body = bar_rec(body, used);
            return p.is(ProcKind::Recv) ? Process::recv(p.chan(), nb, body)
                                        : Process::server(p.chan(), nb, body);
        }
        case ProcKind::Select:
            return Process::select(p.chan(), p.label(), bar_rec(p.first(), used));
        case ProcKind::Wait:
            return Process::wait(p.chan(), bar_rec(p.first(), used));
        case ProcKind::Branch: {
            Process::Arms arms;
            for (const auto& [l, a] : p.arms()) arms.emplace(l, bar_rec(a, used));
            return Process::branch(p.chan(), std::move(arms));
        }
    }
    return p;
}

}  // namespace

Process substitute(const Process& p, const Name& replacement, const Name& target) {
    if (replacement == target) return p;
    if (!free_names(p).count(target)) return p;
    return subst_rec(p, replacement, target);
}

bool alpha_eq(const Process& p, const Process& q) {
    Env env;
    return alpha_rec(p, q, env);
}

Process barendregt(const Process& p) {
    NameSet used = free_names(p);
    return bar_rec(p, used);
}

Process rename_binder(const Process& p, const Name& fresh) {
    const Name& b = p.name2();
    if (b == fresh) return p;
    auto ren = [&](const Process& c) { return subst_rec(c, fresh, b); };
    switch (p.kind()) {
        case ProcKind::Send:
            if (p.bound_send()) return Process::send(p.chan(), fresh, ren(p.first()), ren(p.second()));
            return Process::copy(p.chan(), fresh, ren(p.first()));
        case ProcKind::Recv:
            return Process::recv(p.chan(), fresh, ren(p.first()));
        case ProcKind::Server:
            return Process::server(p.chan(), fresh, ren(p.first()));
        default:
            return p;
    }
}

}  // namespace sf
