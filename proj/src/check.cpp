#include <algorithm>

#include "sessionforge/checker.hpp"
#include "sessionforge/syntax.hpp"

namespace sf {

CheckerConfig set_extension(Extension mode) {
    CheckerConfig c;
    c.extension = mode;
    return c;
}

std::string CheckResult::message() const {
    if (ok) return "ok";
    return "rule violation at " + print_path(path) + " (" + rule + "): " + explanation;
}

namespace {

struct Violation {
    std::string what;
};

[[noreturn]] void fail(const std::string& m) { throw Violation{m}; }

void need(bool c, const std::string& m) {
    if (!c) fail(m);
}

NameSet all_region_names(const Judgment& j) {
    NameSet s = j.gamma.names();
    for (const auto& n : j.delta.names()) s.insert(n);
    for (const auto& n : j.lambda.names()) s.insert(n);
    return s;
}

// Names of premise p that do not occur in the conclusion.
NameSet new_names(const Judgment& p, const Judgment& c) {
    NameSet cn = all_region_names(c);
    NameSet out;
    for (const auto& n : all_region_names(p))
        if (!cn.count(n)) out.insert(n);
    return out;
}

Name the_new_name(const Judgment& p, const Judgment& c, const char* what) {
    NameSet n = new_names(p, c);
    need(n.size() == 1, std::string("premise must introduce exactly one new name for ") + what);
    return *n.begin();
}

const Type& linear(const Context& c, const Name& x, const char* region) {
    const Type* t = c.find(x);
    if (!t) fail("'" + x + "' is not in the " + region + " region");
    return *t;
}

void same_gamma(const Judgment& p, const Judgment& c) {
    need(p.gamma == c.gamma, "unrestricted region differs between premise and conclusion");
}

void same_proc(const Process& expected, const Judgment& p) {
    if (!alpha_eq(expected, p.process))
        fail("premise process is " + print_process(p.process) + ", expected " +
             print_process(expected));
}

void eq_ctx(const Context& got, const Context& want, const char* what) {
    if (got != want)
        fail(std::string(what) + " is " + print_context(got) + ", expected " + print_context(want));
}

// want == a + b exactly.
void partition(const Context& want, const Context& a, const Context& b, const char* what) {
    auto m = merge(a, b);
    if (!m) fail(std::string(what) + ": premises share a linear name");
    eq_ctx(*m, want, what);
}

void check_ann(const Process& p, const Type& offered) {
    if (p.ann() && *p.ann() != offered)
        fail("annotation " + print_type(*p.ann()) + " does not match the cut type " +
             print_type(offered));
}

const Type& branch_type(const Type& t, const std::string& l) {
    auto it = t.branches().find(l);
    if (it == t.branches().end()) fail("label '" + l + "' not in " + print_type(t));
    return it->second;
}

void same_labels(const Process& p, const Type& t) {
    need(p.arms().size() == t.branches().size(), "branch labels differ from the type's labels");
    auto i = p.arms().begin();
    for (const auto& [l, a] : t.branches()) {
        need(i->first == l, "branch labels differ from the type's labels");
        ++i;
    }
}

// Process of a Send/Recv/Server continuation with the binder renamed to b.
Process renamed(const Process& cont, const Name& binder, const Name& b) {
    return substitute(cont, b, binder);
}

using Prems = std::vector<Derivation>;

void check_two_sided(const std::string& R, const Judgment& J, const Prems& ps,
                     const CheckerConfig& cfg) {
    const Process& P = J.process;
    auto prem = [&](std::size_t i) -> const Judgment& { return ps[i].conclusion; };
    auto kind = [&](ProcKind k, const char* what) {
        if (!P.is(k)) fail(std::string("process must be ") + what);
    };

    if (R == "idR") {
        kind(ProcKind::Forward, "a forwarder");
        const Name &a = P.chan(), &b = P.name2();
        need(a != b, "forwarder endpoints must differ");
        need(J.delta.size() == 1 && J.lambda.size() == 1,
             "idR needs one assignment on each side");
        const Name& l = J.delta.entries()[0].first;
        const Name& r = J.lambda.entries()[0].first;
        need((l == a && r == b) || (l == b && r == a), "forwarder endpoints must be the assigned names");
        need(J.delta.entries()[0].second == J.lambda.entries()[0].second,
             "idR needs the same type on both sides");
        return;
    }
    if (R == "idL") {
        kind(ProcKind::Forward, "a forwarder");
        const Name &a = P.chan(), &b = P.name2();
        need(a != b, "forwarder endpoints must differ");
        need(J.lambda.empty() && J.delta.size() == 2, "idL needs two left assignments and nothing on the right");
        const Type& ta = linear(J.delta, a, "linear");
        const Type& tb = linear(J.delta, b, "linear");
        need(tb == dual(ta), "idL needs dual types");
        return;
    }
    if (R == "1R") {
        kind(ProcKind::Close, "close x");
        need(J.delta.empty(), "1R requires an empty linear region");
        need(J.lambda.size() == 1 && J.lambda.find(P.chan()) &&
                 J.lambda.find(P.chan())->is(TypeKind::One),
             "1R concludes exactly x:1 on the right");
        return;
    }
    if (R == "botL") {
        kind(ProcKind::Close, "close x");
        need(J.lambda.empty(), "botL requires an empty right region");
        need(J.delta.size() == 1 && J.delta.find(P.chan()) &&
                 J.delta.find(P.chan())->is(TypeKind::Bot),
             "botL concludes exactly x:bot on the left");
        return;
    }
    if (R == "empty") {
        kind(ProcKind::Inact, "0");
        need(J.delta.empty() && J.lambda.empty(), "empty requires empty linear regions");
        return;
    }

    // Every remaining rule shares gamma with at least one premise.
    const Name& x = P.chan();
    if (R == "1L" || R == "botR") {
        kind(ProcKind::Wait, "wait x . P");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        same_proc(P.first(), p);
        if (R == "1L") {
            need(linear(J.delta, x, "linear").is(TypeKind::One), "1L needs x:1");
            eq_ctx(p.delta, J.delta.without(x), "premise linear region");
            eq_ctx(p.lambda, J.lambda, "premise right region");
        } else {
            need(linear(J.lambda, x, "right").is(TypeKind::Bot), "botR needs x:bot");
            eq_ctx(p.delta, J.delta, "premise linear region");
            eq_ctx(p.lambda, J.lambda.without(x), "premise right region");
        }
        return;
    }
    if (R == "*L" || R == "parR" || R == "-oR") {
        kind(ProcKind::Recv, "a receive");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the received channel");
        same_proc(renamed(P.first(), P.binder(), y), p);
        if (R == "*L") {
            const Type& t = linear(J.delta, x, "linear");
            need(t.is(TypeKind::Tensor), "*L needs a tensor on the left");
            eq_ctx(p.delta, J.delta.without(x).with(y, t.left()).with(x, t.right()),
                   "premise linear region");
            eq_ctx(p.lambda, J.lambda, "premise right region");
        } else if (R == "parR") {
            const Type& t = linear(J.lambda, x, "right");
            need(t.is(TypeKind::Lolli), "parR needs a par (lolli) on the right");
            eq_ctx(p.delta, J.delta, "premise linear region");
            eq_ctx(p.lambda, J.lambda.without(x).with(y, dual(t.left())).with(x, t.right()),
                   "premise right region");
        } else {
            const Type& t = linear(J.lambda, x, "right");
            need(t.is(TypeKind::Lolli), "-oR needs a lolli on the right");
            eq_ctx(p.delta, J.delta.with(y, t.left()), "premise linear region");
            eq_ctx(p.lambda, J.lambda.without(x).with(x, t.right()), "premise right region");
        }
        return;
    }
    if (R == "*R" || R == "parL" || R == "-oL") {
        need(P.bound_send(), "process must be a bound send");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        Name y = the_new_name(p1, J, "the sent channel");
        need(new_names(p2, J).empty(), "second premise introduces an unexpected name");
        same_proc(renamed(P.first(), P.binder(), y), p1);
        same_proc(renamed(P.second(), P.binder(), y), p2);
        if (R == "*R") {
            const Type& t = linear(J.lambda, x, "right");
            need(t.is(TypeKind::Tensor), "*R needs a tensor on the right");
            need(p1.lambda.find(y) && *p1.lambda.find(y) == t.left(), "first premise must provide the payload on the right");
            need(p2.lambda.find(x) && *p2.lambda.find(x) == t.right(), "second premise must provide the continuation on the right");
            partition(J.delta, p1.delta, p2.delta, "linear region");
            partition(J.lambda.without(x), p1.lambda.without(y), p2.lambda.without(x), "right region");
        } else {
            const Type& t = linear(J.delta, x, "linear");
            need(t.is(TypeKind::Lolli), R + " needs a lolli on the left");
            need(p2.delta.find(x) && *p2.delta.find(x) == t.right(), "second premise must use the continuation on the left");
            if (R == "parL") {
                need(p1.delta.find(y) && *p1.delta.find(y) == dual(t.left()), "first premise must use the payload on the left");
                partition(J.delta.without(x), p1.delta.without(y), p2.delta.without(x), "linear region");
                partition(J.lambda, p1.lambda, p2.lambda, "right region");
            } else {
                need(p1.lambda.find(y) && *p1.lambda.find(y) == t.left(), "first premise must provide the payload on the right");
                partition(J.delta.without(x), p1.delta, p2.delta.without(x), "linear region");
                partition(J.lambda, p1.lambda.without(y), p2.lambda, "right region");
            }
        }
        return;
    }
    if (R == "+R" || R == "&L") {
        kind(ProcKind::Select, "a selection");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        same_proc(P.first(), p);
        if (R == "+R") {
            const Type& t = linear(J.lambda, x, "right");
            need(t.is(TypeKind::Plus), "+R needs a plus on the right");
            eq_ctx(p.delta, J.delta, "premise linear region");
            eq_ctx(p.lambda, J.lambda.without(x).with(x, branch_type(t, P.label())), "premise right region");
        } else {
            const Type& t = linear(J.delta, x, "linear");
            need(t.is(TypeKind::With), "&L needs a with on the left");
            eq_ctx(p.delta, J.delta.without(x).with(x, branch_type(t, P.label())), "premise linear region");
            eq_ctx(p.lambda, J.lambda, "premise right region");
        }
        return;
    }
    if (R == "+L" || R == "&R") {
        kind(ProcKind::Branch, "a branching");
        bool left = R == "+L";
        const Type& t = left ? linear(J.delta, x, "linear") : linear(J.lambda, x, "right");
        need(t.is(left ? TypeKind::Plus : TypeKind::With), left ? "+L needs a plus on the left" : "&R needs a with on the right");
        same_labels(P, t);
        need(ps.size() == t.branches().size(), "one premise per label required");
        std::size_t i = 0;
        for (const auto& [l, a] : t.branches()) {
            const Judgment& p = prem(i++);
            same_gamma(p, J);
            same_proc(P.arms().at(l), p);
            if (left) {
                eq_ctx(p.delta, J.delta.without(x).with(x, a), "premise linear region");
                eq_ctx(p.lambda, J.lambda, "premise right region");
            } else {
                eq_ctx(p.delta, J.delta, "premise linear region");
                eq_ctx(p.lambda, J.lambda.without(x).with(x, a), "premise right region");
            }
        }
        return;
    }
    if (R == "copyL" || R == "copyR") {
        need(P.copy_send(), "process must be a client request send u(x).P");
        const Type* a = J.gamma.find(x);
        need(a != nullptr, "'" + x + "' is not in the unrestricted region");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the fresh client channel");
        same_proc(renamed(P.first(), P.binder(), y), p);
        if (R == "copyL") {
            eq_ctx(p.delta, J.delta.with(y, *a), "premise linear region");
            eq_ctx(p.lambda, J.lambda, "premise right region");
        } else {
            eq_ctx(p.delta, J.delta, "premise linear region");
            eq_ctx(p.lambda, J.lambda.with(y, dual(*a)), "premise right region");
        }
        return;
    }
    if (R == "!R" || R == "?L") {
        kind(ProcKind::Server, "a server");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the server binder");
        same_proc(renamed(P.first(), P.binder(), y), p);
        if (R == "!R") {
            need(J.delta.empty() && J.lambda.size() == 1, "!R concludes empty; x:!A");
            const Type& t = linear(J.lambda, x, "right");
            need(t.is(TypeKind::Bang), "!R needs !A on the right");
            need(p.delta.empty(), "!R premise must have an empty linear region");
            eq_ctx(p.lambda, Context{{y, t.body()}}, "premise right region");
        } else {
            need(J.lambda.empty() && J.delta.size() == 1, "?L concludes x:?A; empty");
            const Type& t = linear(J.delta, x, "linear");
            need(t.is(TypeKind::Query), "?L needs ?A on the left");
            need(p.lambda.empty(), "?L premise must have an empty right region");
            eq_ctx(p.delta, Context{{y, t.body()}}, "premise linear region");
        }
        return;
    }
    if (R == "!L" || R == "?R") {
        const Judgment& p = prem(0);
        need(p.gamma.size() == J.gamma.size() + 1, R + " adds exactly one unrestricted assignment");
        Name u;
        for (const auto& [n, t] : p.gamma.entries())
            if (!J.gamma.has(n)) u = n;
        need(!u.empty(), R + " premise must extend the unrestricted region");
        eq_ctx(p.gamma.without(u), J.gamma, "premise unrestricted region");
        const Type& a = *p.gamma.find(u);
        Name xx;
        if (R == "!L") {
            NameSet gone;
            for (const auto& [n, t] : J.delta.entries())
                if (!p.delta.has(n)) gone.insert(n);
            need(gone.size() == 1, "!L removes exactly one linear assignment");
            xx = *gone.begin();
            need(*J.delta.find(xx) == Type::bang(a), "!L needs x:!A with u:A");
            eq_ctx(p.delta, J.delta.without(xx), "premise linear region");
            eq_ctx(p.lambda, J.lambda, "premise right region");
        } else {
            NameSet gone;
            for (const auto& [n, t] : J.lambda.entries())
                if (!p.lambda.has(n)) gone.insert(n);
            need(gone.size() == 1, "?R removes exactly one right assignment");
            xx = *gone.begin();
            need(*J.lambda.find(xx) == Type::query(dual(a)), "?R needs x:?~A with u:A");
            eq_ctx(p.delta, J.delta, "premise linear region");
            eq_ctx(p.lambda, J.lambda.without(xx), "premise right region");
        }
        if (!alpha_eq(substitute(p.process, xx, u), P))
            fail("conclusion process must be the premise process with " + u + " renamed to " + xx);
        return;
    }
    if (R == "cutRL" || R == "cutLR" || R == "cutRR" || R == "cutLL") {
        need(P.is_cut(), "process must be new x (P | Q)");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        Name c = the_new_name(p1, J, "the cut channel");
        need(new_names(p2, J) == NameSet{c}, "both premises must use the same cut channel");
        same_proc(renamed(P.first().first(), x, c), p1);
        same_proc(renamed(P.first().second(), x, c), p2);
        bool l1 = R[3] == 'L', l2 = R[4] == 'L';
        const Context& s1 = l1 ? p1.delta : p1.lambda;
        const Context& s2 = l2 ? p2.delta : p2.lambda;
        const Type& a = linear(s1, c, l1 ? "first premise linear" : "first premise right");
        const Type& b = linear(s2, c, l2 ? "second premise linear" : "second premise right");
        bool same_side = l1 == l2;
        if (same_side) need(b == dual(a), R + " needs x:A and x:~A");
        else need(b == a, R + " needs the same type on both sides");
        check_ann(P, l1 ? dual(a) : a);
        partition(J.delta, l1 ? p1.delta.without(c) : p1.delta, l2 ? p2.delta.without(c) : p2.delta,
                  "linear region");
        partition(J.lambda, l1 ? p1.lambda : p1.lambda.without(c), l2 ? p2.lambda : p2.lambda.without(c),
                  "right region");
        return;
    }
    if (R == "cut!R" || R == "cut?R" || R == "cut!L" || R == "cut?L") {
        need(P.is_cut(), "process must be new u (P | Q)");
        bool server_right = R.back() == 'R';
        const Process& client = server_right ? P.first().first() : P.first().second();
        const Process& server = server_right ? P.first().second() : P.first().first();
        need(server.is(ProcKind::Server) && server.chan() == x,
             "the server component must be serv " + x + "(..)");
        const Judgment& pc = prem(server_right ? 0 : 1);
        const Judgment& pserv = prem(server_right ? 1 : 0);
        need(pc.gamma.size() == J.gamma.size() + 1, "client premise must add u:A");
        Name u;
        for (const auto& [n, t] : pc.gamma.entries())
            if (!J.gamma.has(n)) u = n;
        need(!u.empty(), "client premise must add u:A");
        eq_ctx(pc.gamma.without(u), J.gamma, "client premise unrestricted region");
        const Type& a = *pc.gamma.find(u);
        eq_ctx(pc.delta, J.delta, "client premise linear region");
        eq_ctx(pc.lambda, J.lambda, "client premise right region");
        same_proc(renamed(client, x, u), pc);
        same_gamma(pserv, J);
        Name y = the_new_name(pserv, J, "the server binder");
        same_proc(renamed(server.first(), server.binder(), y), pserv);
        if (R[3] == '!') {
            need(pserv.delta.empty(), "server premise must have an empty linear region");
            eq_ctx(pserv.lambda, Context{{y, a}}, "server premise right region");
        } else {
            need(pserv.lambda.empty(), "server premise must have an empty right region");
            eq_ctx(pserv.delta, Context{{y, dual(a)}}, "server premise linear region");
        }
        check_ann(P, server_right ? Type::query(dual(a)) : Type::bang(a));
        return;
    }
    if (R == "mix") {
        kind(ProcKind::Par, "a parallel composition");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        same_proc(P.first(), p1);
        same_proc(P.second(), p2);
        partition(J.delta, p1.delta, p2.delta, "linear region");
        partition(J.lambda, p1.lambda, p2.lambda, "right region");
        return;
    }
    if (R == "moveL" || R == "moveR") {
        const Judgment& p = prem(0);
        same_gamma(p, J);
        same_proc(P, p);
        // moveL: premise x:A on the right, conclusion x:~A on the left.
        const Context& from = R == "moveL" ? p.lambda : p.delta;
        const Context& to = R == "moveL" ? J.delta : J.lambda;
        Name m;
        for (const auto& [n, t] : to.entries())
            if (from.has(n)) m = n;
        need(!m.empty(), R + " must move one assignment across the turnstile");
        need(*to.find(m) == dual(*from.find(m)), R + " must dualize the moved type");
        if (R == "moveL") {
            eq_ctx(p.delta, J.delta.without(m), "premise linear region");
            eq_ctx(p.lambda.without(m), J.lambda, "premise right region");
        } else {
            eq_ctx(p.lambda, J.lambda.without(m), "premise right region");
            eq_ctx(p.delta.without(m), J.delta, "premise linear region");
        }
        return;
    }
    if (R.rfind("cycle", 0) == 0) {
        const Judgment& p = prem(0);
        need(P.is(ProcKind::Restrict) && P.first().is(ProcKind::Restrict),
             "process must be a double restriction");
        const Name& o = P.chan();
        const Name& i = P.first().chan();
        same_gamma(p, J);
        same_proc(P.first().first(), p);
        need(cfg.cycle_phi(p, o, i), "cycle side condition rejected");
        // The letters give the sides of the outer and inner name, in that order.
        bool l1 = R[5] == 'L', l2 = R[6] == 'L';
        const Name& first = o;
        const Name& second = i;
        const Context& s1 = l1 ? p.delta : p.lambda;
        const Context& s2 = l2 ? p.delta : p.lambda;
        const Type& a = linear(s1, first, "premise");
        const Type& b = linear(s2, second, "premise");
        need(l1 == l2 ? b == dual(a) : b == a, "cycle endpoints must have matching types");
        eq_ctx(p.delta.without(first).without(second), J.delta, "premise linear region");
        eq_ctx(p.lambda.without(first).without(second), J.lambda, "premise right region");
        return;
    }
    fail("unknown rule");
}

void check_cll(const std::string& R, const Judgment& J, const Prems& ps, const CheckerConfig& cfg) {
    const Process& P = J.process;
    auto prem = [&](std::size_t i) -> const Judgment& { return ps[i].conclusion; };
    const Name& x = P.chan();
    if (R == "id") {
        need(P.is(ProcKind::Forward) && P.chan() != P.name2(), "process must be fwd x y with x != y");
        need(J.delta.size() == 2, "id needs exactly the two endpoints");
        const Type& a = linear(J.delta, P.chan(), "linear");
        const Type& b = linear(J.delta, P.name2(), "linear");
        need(b == dual(a), "id needs dual types");
        return;
    }
    if (R == "1") {
        need(P.is(ProcKind::Close), "process must be close x");
        need(J.delta.size() == 1 && J.delta.find(x) && J.delta.find(x)->is(TypeKind::One),
             "1 concludes exactly x:1");
        return;
    }
    if (R == "empty") {
        need(P.is(ProcKind::Inact) && J.delta.empty(), "empty types 0 with an empty linear region");
        return;
    }
    if (R == "bot") {
        need(P.is(ProcKind::Wait), "process must be wait x . P");
        need(linear(J.delta, x, "linear").is(TypeKind::Bot), "bot needs x:bot");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        same_proc(P.first(), p);
        eq_ctx(p.delta, J.delta.without(x), "premise linear region");
        return;
    }
    if (R == "*") {
        need(P.bound_send(), "process must be a bound send");
        const Type& t = linear(J.delta, x, "linear");
        need(t.is(TypeKind::Tensor), "* needs a tensor");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        Name y = the_new_name(p1, J, "the sent channel");
        need(new_names(p2, J).empty(), "second premise introduces an unexpected name");
        same_proc(renamed(P.first(), P.binder(), y), p1);
        same_proc(renamed(P.second(), P.binder(), y), p2);
        need(p1.delta.find(y) && *p1.delta.find(y) == t.left(), "first premise must provide the payload");
        need(p2.delta.find(x) && *p2.delta.find(x) == t.right(), "second premise must provide the continuation");
        partition(J.delta.without(x), p1.delta.without(y), p2.delta.without(x), "linear region");
        return;
    }
    if (R == "par") {
        need(P.is(ProcKind::Recv), "process must be a receive");
        const Type& t = linear(J.delta, x, "linear");
        need(t.is(TypeKind::Lolli), "par needs A par B");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the received channel");
        same_proc(renamed(P.first(), P.binder(), y), p);
        eq_ctx(p.delta, J.delta.without(x).with(y, dual(t.left())).with(x, t.right()),
               "premise linear region");
        return;
    }
    if (R == "+") {
        need(P.is(ProcKind::Select), "process must be a selection");
        const Type& t = linear(J.delta, x, "linear");
        need(t.is(TypeKind::Plus), "+ needs a plus");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        same_proc(P.first(), p);
        eq_ctx(p.delta, J.delta.without(x).with(x, branch_type(t, P.label())), "premise linear region");
        return;
    }
    if (R == "&") {
        need(P.is(ProcKind::Branch), "process must be a branching");
        const Type& t = linear(J.delta, x, "linear");
        need(t.is(TypeKind::With), "& needs a with");
        same_labels(P, t);
        need(ps.size() == t.branches().size(), "one premise per label required");
        std::size_t i = 0;
        for (const auto& [l, a] : t.branches()) {
            const Judgment& p = prem(i++);
            same_gamma(p, J);
            same_proc(P.arms().at(l), p);
            eq_ctx(p.delta, J.delta.without(x).with(x, a), "premise linear region");
        }
        return;
    }
    if (R == "copy") {
        need(P.copy_send(), "process must be a client request send u(x).P");
        const Type* a = J.gamma.find(x);
        need(a != nullptr, "'" + x + "' is not in the unrestricted region");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the fresh client channel");
        same_proc(renamed(P.first(), P.binder(), y), p);
        eq_ctx(p.delta, J.delta.with(y, *a), "premise linear region");
        return;
    }
    if (R == "?") {
        const Judgment& p = prem(0);
        need(p.gamma.size() == J.gamma.size() + 1, "? adds exactly one unrestricted assignment");
        Name u;
        for (const auto& [n, t] : p.gamma.entries())
            if (!J.gamma.has(n)) u = n;
        need(!u.empty(), "? premise must extend the unrestricted region");
        eq_ctx(p.gamma.without(u), J.gamma, "premise unrestricted region");
        NameSet gone;
        for (const auto& [n, t] : J.delta.entries())
            if (!p.delta.has(n)) gone.insert(n);
        need(gone.size() == 1, "? removes exactly one linear assignment");
        Name xx = *gone.begin();
        need(*J.delta.find(xx) == Type::query(*p.gamma.find(u)), "? needs x:?A with u:A");
        eq_ctx(p.delta, J.delta.without(xx), "premise linear region");
        if (!alpha_eq(substitute(p.process, xx, u), P))
            fail("conclusion process must be the premise process with " + u + " renamed to " + xx);
        return;
    }
    if (R == "!") {
        need(P.is(ProcKind::Server), "process must be a server");
        need(J.delta.size() == 1, "! concludes exactly x:!A");
        const Type& t = linear(J.delta, x, "linear");
        need(t.is(TypeKind::Bang), "! needs !A");
        const Judgment& p = prem(0);
        same_gamma(p, J);
        Name y = the_new_name(p, J, "the server binder");
        same_proc(renamed(P.first(), P.binder(), y), p);
        eq_ctx(p.delta, Context{{y, t.body()}}, "premise linear region");
        return;
    }
    if (R == "cut") {
        need(P.is_cut(), "process must be new x (P | Q)");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        Name c = the_new_name(p1, J, "the cut channel");
        need(new_names(p2, J) == NameSet{c}, "both premises must use the same cut channel");
        same_proc(renamed(P.first().first(), x, c), p1);
        same_proc(renamed(P.first().second(), x, c), p2);
        const Type& a = linear(p1.delta, c, "first premise");
        const Type& b = linear(p2.delta, c, "second premise");
        need(b == dual(a), "cut needs x:A and x:~A");
        check_ann(P, a);
        partition(J.delta, p1.delta.without(c), p2.delta.without(c), "linear region");
        return;
    }
    if (R == "cut?R" || R == "cut?L") {
        need(P.is_cut(), "process must be new u (P | Q)");
        bool server_right = R.back() == 'R';
        const Process& client = server_right ? P.first().first() : P.first().second();
        const Process& server = server_right ? P.first().second() : P.first().first();
        need(server.is(ProcKind::Server) && server.chan() == x,
             "the server component must be serv " + x + "(..)");
        const Judgment& pc = prem(server_right ? 0 : 1);
        const Judgment& pserv = prem(server_right ? 1 : 0);
        Name u;
        for (const auto& [n, t] : pc.gamma.entries())
            if (!J.gamma.has(n)) u = n;
        need(!u.empty() && pc.gamma.size() == J.gamma.size() + 1, "client premise must add u:A");
        eq_ctx(pc.gamma.without(u), J.gamma, "client premise unrestricted region");
        const Type& a = *pc.gamma.find(u);
        eq_ctx(pc.delta, J.delta, "client premise linear region");
        same_proc(renamed(client, x, u), pc);
        same_gamma(pserv, J);
        Name y = the_new_name(pserv, J, "the server binder");
        same_proc(renamed(server.first(), server.binder(), y), pserv);
        eq_ctx(pserv.delta, Context{{y, dual(a)}}, "server premise linear region");
        check_ann(P, server_right ? Type::query(a) : Type::bang(dual(a)));
        return;
    }
    if (R == "mix") {
        need(P.is(ProcKind::Par), "process must be a parallel composition");
        const Judgment& p1 = prem(0);
        const Judgment& p2 = prem(1);
        same_gamma(p1, J);
        same_gamma(p2, J);
        same_proc(P.first(), p1);
        same_proc(P.second(), p2);
        partition(J.delta, p1.delta, p2.delta, "linear region");
        return;
    }
    if (R == "cycle") {
        const Judgment& p = prem(0);
        need(P.is(ProcKind::Restrict) && P.first().is(ProcKind::Restrict),
             "process must be a double restriction");
        const Name& o = P.chan();
        const Name& i = P.first().chan();
        same_gamma(p, J);
        same_proc(P.first().first(), p);
        need(cfg.cycle_phi(p, o, i), "cycle side condition rejected");
        const Type& a = linear(p.delta, o, "premise");
        const Type& b = linear(p.delta, i, "premise");
        need(b == dual(a), "cycle endpoints must be dual");
        eq_ctx(p.delta.without(o).without(i), J.delta, "premise linear region");
        return;
    }
    fail("unknown rule");
}

void check_node(const Derivation& d, const CheckerConfig& cfg) {
    const Judgment& J = d.conclusion;
    if (auto e = judgment_problem(J); !e.empty()) fail("ill-formed judgment: " + e);
    const RuleSchema* rs = find_rule(J.system, d.rule, cfg.extension);
    if (!rs) fail("'" + d.rule + "' is not a rule of " + system_name(J.system));
    if (rs->arity >= 0 && d.premises.size() != static_cast<std::size_t>(rs->arity))
        fail("expects " + std::to_string(rs->arity) + " premise(s), got " +
             std::to_string(d.premises.size()));
    for (const auto& p : d.premises)
        if (p.conclusion.system != J.system) fail("premise belongs to a different system");
    if (J.system == System::CLL) {
        check_cll(d.rule, J, d.premises, cfg);
    } else if (J.system == System::ILL) {
        check_two_sided(ill_to_ull_rule(d.rule), J, d.premises, cfg);
    } else {
        check_two_sided(d.rule, J, d.premises, cfg);
    }
}

bool check_rec(const Derivation& d, const CheckerConfig& cfg, NodePath& path, CheckResult& out) {
    try {
        check_node(d, cfg);
    } catch (const Violation& v) {
        out.ok = false;
        out.path = path;
        out.rule = d.rule;
        out.explanation = v.what;
        return false;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        if (!check_rec(d.premises[i], cfg, path, out)) return false;
        path.pop_back();
    }
    return true;
}

}  // namespace

CheckResult check_derivation(const Derivation& d, const CheckerConfig& cfg) {
    CheckResult r;
    NodePath path;
    check_rec(d, cfg, path, r);
    return r;
}

}  // namespace sf
