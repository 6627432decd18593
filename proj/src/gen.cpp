#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

#include "sessionforge/harness.hpp"
#include "sessionforge/transform.hpp"

namespace sf {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t SplitMix64::below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

bool SplitMix64::chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

std::uint64_t case_seed(std::uint64_t seed, std::size_t i) {
    return SplitMix64(seed + 0x632BE59BD9B4E019ULL * (i + 1)).next();
}

namespace {

Type::Branches gen_branches(SplitMix64& rng, const std::vector<std::string>& labels,
                            const std::function<Type()>& body) {
    Type::Branches bs;
    std::string must = labels[rng.below(labels.size())];
    for (const auto& l : labels)
        if (l == must || rng.chance(0.5)) bs.emplace(l, body());
    return bs;
}

// Types with closed producers and consumers: no bot, no ?.
Type gen_safe_type(SplitMix64& rng, int depth, const std::vector<std::string>& labels) {
    if (depth <= 1) return Type::one();
    auto sub = [&] { return gen_safe_type(rng, depth - 1, labels); };
    switch (rng.below(7)) {
        case 0: return Type::one();
        case 1: { Type a = sub(); return Type::tensor(a, sub()); }
        case 2: { Type a = sub(); return Type::lolli(a, sub()); }
        case 3: return Type::plus(gen_branches(rng, labels, sub));
        case 4: return Type::with(gen_branches(rng, labels, sub));
        case 5: return Type::bang(sub());
        default: return Type::one();
    }
}

}  // namespace

Type gen_type(SplitMix64& rng, int depth, const std::vector<std::string>& labels) {
    if (depth <= 1) return rng.chance(0.5) ? Type::one() : Type::bot();
    auto sub = [&] { return gen_type(rng, depth - 1, labels); };
    switch (rng.below(10)) {
        case 0: return Type::one();
        case 1: return Type::bot();
        case 2: { Type a = sub(); return Type::tensor(a, sub()); }
        case 3: { Type a = sub(); return Type::lolli(a, sub()); }
        case 4: { Type a = sub(); return Type::par(a, sub()); }
        case 5: return Type::plus(gen_branches(rng, labels, sub));
        case 6: return Type::with(gen_branches(rng, labels, sub));
        case 7: return Type::bang(sub());
        case 8: return Type::query(sub());
        default: return rng.chance(0.5) ? Type::one() : Type::bot();
    }
}

namespace {

using D = Derivation;
using Entry = Context::Entry;

Context cat(const Context& a, const Context& b) {
    Context out = a;
    for (const auto& [n, t] : b.entries())
        if (!out.add(n, t)) throw std::logic_error("generator produced a name clash on " + n);
    return out;
}

D mk(std::string rule, Context g, Context dl, Process p, Context l, std::vector<D> ps) {
    return D{std::move(rule), Judgment::ull(std::move(g), std::move(dl), std::move(p), std::move(l)),
             std::move(ps)};
}

void weaken(D& d, const Context& extra) {
    for (const auto& [n, t] : extra.entries())
        if (!d.conclusion.gamma.has(n)) d.conclusion.gamma.add(n, t);
    for (auto& p : d.premises) weaken(p, extra);
}

// Weakens every derivation to the union of their unrestricted regions.
Context unify(std::vector<D*> ds) {
    Context all;
    for (D* d : ds)
        for (const auto& [n, t] : d->conclusion.gamma.entries())
            if (!all.has(n)) all.add(n, t);
    for (D* d : ds) weaken(*d, all);
    return all;
}

void retag_all(D& d, System s) {
    d.conclusion.system = s;
    for (auto& p : d.premises) retag_all(p, s);
}

enum class Flavor { Full, Star, StarMoves };

class Builder {
public:
    Builder(const GenConfig& cfg, Flavor f) : rng_(cfg.seed), cfg_(cfg), flavor_(f) {
        if (f == Flavor::Full) {
            rules_ = {"idR", "idL", "1R", "1L", "botR", "botL", "*R", "*L", "parR", "parL",
                      "-oR", "-oL", "+R", "+L", "&R", "&L", "copyR", "copyL", "!R", "!L",
                      "?R", "?L", "cutRL", "cutLR", "cutRR", "cutLL", "cut!R", "cut!L",
                      "cut?R", "cut?L"};
        } else {
            rules_ = {"idR", "1R", "1L", "*R", "*L", "-oR", "-oL", "+R", "+L", "&R", "&L",
                      "copyL", "!R", "!L", "cutRL", "cutLR", "cut!R", "cut!L"};
            if (f == Flavor::StarMoves) {
                rules_.push_back("moveL");
                rules_.push_back("moveR");
            }
        }
        if (cfg.mix && f != Flavor::Star) {
            rules_.push_back("mix");
            rules_.push_back("empty");
        }
    }

    D gen(int depth) {
        if (depth <= 1) return axiom();
        for (int attempt = 0; attempt < 8; ++attempt) {
            const std::string& r = rules_[rng_.below(rules_.size())];
            if (auto d = apply(r, depth, {})) return *d;
        }
        return axiom();
    }

    D closed() {
        Type a = gen_safe_type(rng_, cfg_.type_depth + 1, cfg_.labels);
        Name x = fresh("c");
        D l = prod(x, a, cfg_.max_depth);
        D r = build({{x, a}}, "z", Type::one(), cfg_.max_depth);
        return linear_cut(x, std::move(l), std::move(r));
    }

private:
    SplitMix64 rng_;
    const GenConfig& cfg_;
    Flavor flavor_;
    std::vector<std::string> rules_;
    int counter_ = 0;

    Name fresh(const char* stem) { return stem + std::to_string(++counter_); }
    Type type() {
        if (flavor_ == Flavor::Star) return gen_safe_type(rng_, cfg_.type_depth, cfg_.labels);
        return gen_type(rng_, cfg_.type_depth, cfg_.labels);
    }
    bool full() const { return flavor_ == Flavor::Full; }

    std::optional<Entry> pick(const Context& c, const NameSet& prot) {
        std::vector<Entry> ok;
        for (const auto& e : c.entries())
            if (!prot.count(e.first)) ok.push_back(e);
        if (ok.empty()) return std::nullopt;
        return ok[rng_.below(ok.size())];
    }

    // --- axioms ----------------------------------------------------------

    D axiom() {
        std::vector<std::string> ax = {"idR", "1R"};
        if (full()) {
            ax.push_back("idL");
            ax.push_back("botL");
        }
        if (cfg_.mix && flavor_ != Flavor::Star) ax.push_back("empty");
        const std::string& r = ax[rng_.below(ax.size())];
        if (r == "1R") {
            Name x = fresh("x");
            return mk("1R", {}, {}, Process::close(x), {{x, Type::one()}}, {});
        }
        if (r == "botL") {
            Name x = fresh("x");
            return mk("botL", {}, {{x, Type::bot()}}, Process::close(x), {}, {});
        }
        if (r == "empty") return mk("empty", {}, {}, Process::inact(), {}, {});
        Type a = type();
        Name x = fresh("x"), y = fresh("y");
        if (r == "idL") return mk("idL", {}, {{x, a}, {y, dual(a)}}, fwd(x, y), {}, {});
        return mk("idR", {}, {{x, a}}, fwd(x, y), {{y, a}}, {});
    }

    Process fwd(const Name& a, const Name& b) {
        return rng_.chance(0.5) ? Process::fwd(a, b) : Process::fwd(b, a);
    }

    // A derivation in which c has type a on the requested side.
    D with_entry(const Name& c, const Type& a, bool left, int depth) {
        Name p = fresh("y");
        D d = !left ? mk("idR", {}, {{p, a}}, fwd(c, p), {{c, a}}, {})
              : (full() && rng_.chance(0.4)) ? mk("idL", {}, {{c, a}, {p, dual(a)}}, fwd(c, p), {}, {})
                                             : mk("idR", {}, {{c, a}}, fwd(c, p), {{p, a}}, {});
        int steps = depth > 1 ? static_cast<int>(rng_.below(static_cast<std::size_t>(depth))) : 0;
        for (int i = 0; i < steps; ++i) {
            const std::string& r = rules_[rng_.below(rules_.size())];
            if (r == "!R" || r == "?L" || r == "idR" || r == "idL" || r == "1R" || r == "botL" ||
                r == "empty")
                continue;
            if (auto e = apply(r, 2, {c}, &d)) d = std::move(*e);
        }
        return d;
    }

    // --- rule application ---------------------------------------------------
    // `base`, when given, is used as the (first available) premise instead of
    // a freshly generated one; names in prot are never consumed.

    std::optional<D> apply(const std::string& r, int depth, const NameSet& prot, D* base = nullptr) {
        auto sub = [&]() -> D {
            if (base) {
                D b = *base;
                base = nullptr;
                return b;
            }
            return gen(prot.empty() ? depth - 1 : 1);
        };
        if (r == "idR" || r == "idL" || r == "1R" || r == "botL" || r == "empty") return axiom();
        if (r == "mix") {
            D a = sub(), b = gen(depth - 1);
            if (rng_.chance(0.5)) std::swap(a, b);
            Context g = unify({&a, &b});
            const Judgment &ja = a.conclusion, &jb = b.conclusion;
            return mk("mix", g, cat(ja.delta, jb.delta), Process::par(ja.process, jb.process),
                      cat(ja.lambda, jb.lambda), {a, b});
        }
        if (r == "*R" || r == "parL" || r == "-oL") {
            bool first_is_base = !base || rng_.chance(0.5);
            D d1 = first_is_base ? sub() : gen(depth - 1);
            D d2 = first_is_base ? gen(depth - 1) : sub();
            return send_rule(r, std::move(d1), std::move(d2), prot);
        }
        if (r.rfind("cut", 0) == 0) return cut_rule(r, depth, prot, base);

        D d = sub();
        return unary(r, std::move(d), prot);
    }

    std::optional<D> unary(const std::string& r, D d, const NameSet& prot) {
        const Judgment& j = d.conclusion;
        const Process& P = j.process;
        if (r == "1L") {
            Name x = fresh("x");
            return mk("1L", j.gamma, j.delta.with(x, Type::one()), Process::wait(x, P), j.lambda, {d});
        }
        if (r == "botR") {
            Name x = fresh("x");
            return mk("botR", j.gamma, j.delta, Process::wait(x, P), j.lambda.with(x, Type::bot()), {d});
        }
        if (r == "*L") {
            auto y = pick(j.delta, prot);
            if (!y) return std::nullopt;
            auto x = pick(j.delta.without(y->first), prot);
            if (!x) return std::nullopt;
            Context dl = j.delta.without(y->first).without(x->first).with(x->first, Type::tensor(y->second, x->second));
            return mk("*L", j.gamma, dl, Process::recv(x->first, y->first, P), j.lambda, {d});
        }
        if (r == "-oR" || r == "parR") {
            auto y = pick(r == "-oR" ? j.delta : j.lambda, prot);
            if (!y) return std::nullopt;
            Context rest = j.lambda.without(y->first);
            auto x = pick(rest, prot);
            if (!x) return std::nullopt;
            Type t = r == "-oR" ? Type::lolli(y->second, x->second) : Type::lolli(dual(y->second), x->second);
            Context dl = r == "-oR" ? j.delta.without(y->first) : j.delta;
            return mk(r, j.gamma, dl, Process::recv(x->first, y->first, P),
                      rest.without(x->first).with(x->first, t), {d});
        }
        if (r == "+R" || r == "&L") {
            bool right = r == "+R";
            const Context& side = right ? j.lambda : j.delta;
            auto x = pick(side, prot);
            if (!x) return std::nullopt;
            std::string lab = cfg_.labels[rng_.below(cfg_.labels.size())];
            Type::Branches bs = gen_branches(rng_, cfg_.labels, [&] { return type(); });
            bs[lab] = x->second;
            Type t = right ? Type::plus(bs) : Type::with(bs);
            Context ns = side.without(x->first).with(x->first, t);
            Process q = Process::select(x->first, lab, P);
            return right ? mk(r, j.gamma, j.delta, q, ns, {d}) : mk(r, j.gamma, ns, q, j.lambda, {d});
        }
        if (r == "+L" || r == "&R") {
            bool left = r == "+L";
            const Context& side = left ? j.delta : j.lambda;
            auto x = pick(side, prot);
            if (!x) return std::nullopt;
            Type::Branches bs = gen_branches(rng_, cfg_.labels, [&] { return x->second; });
            Type t = left ? Type::plus(bs) : Type::with(bs);
            Process::Arms arms;
            for (const auto& [l, a] : bs) arms.emplace(l, P);
            Context ns = side.without(x->first).with(x->first, t);
            std::vector<D> ps(bs.size(), d);
            Process q = Process::branch(x->first, arms);
            return left ? mk(r, j.gamma, ns, q, j.lambda, ps) : mk(r, j.gamma, j.delta, q, ns, ps);
        }
        if (r == "copyL" || r == "copyR") {
            bool left = r == "copyL";
            auto y = pick(left ? j.delta : j.lambda, prot);
            if (!y) return std::nullopt;
            Name u = fresh("u");
            Type a = left ? y->second : dual(y->second);
            D w = d;
            weaken(w, Context{{u, a}});
            Context g = w.conclusion.gamma;
            Process q = Process::copy(u, y->first, P);
            return left ? mk(r, g, j.delta.without(y->first), q, j.lambda, {w})
                        : mk(r, g, j.delta, q, j.lambda.without(y->first), {w});
        }
        if (r == "!L" || r == "?R") {
            auto u = pick(j.gamma, {});
            if (!u) {
                // Make room for a promotion by a client request first.
                auto c = unary(r == "!L" ? "copyL" : "copyR", d, prot);
                if (!c) return std::nullopt;
                return unary(r, *c, prot);
            }
            Name x = fresh("x");
            Process q = substitute(P, x, u->first);
            Context g = j.gamma.without(u->first);
            if (r == "!L") return mk(r, g, j.delta.with(x, Type::bang(u->second)), q, j.lambda, {d});
            return mk(r, g, j.delta, q, j.lambda.with(x, Type::query(dual(u->second))), {d});
        }
        if (r == "!R") {
            auto f = fold_right(std::move(d));
            if (!f) return std::nullopt;
            const Judgment& k = f->conclusion;
            const auto& [y, a] = k.lambda.entries()[0];
            Name x = fresh("x");
            return mk("!R", k.gamma, {}, Process::server(x, y, k.process), {{x, Type::bang(a)}}, {*f});
        }
        if (r == "?L") {
            auto f = fold_left(std::move(d));
            if (!f) return std::nullopt;
            const Judgment& k = f->conclusion;
            const auto& [y, a] = k.delta.entries()[0];
            Name x = fresh("x");
            return mk("?L", k.gamma, {{x, Type::query(a)}}, Process::server(x, y, k.process), {}, {*f});
        }
        if (r == "moveL" || r == "moveR") {
            bool to_left = r == "moveL";
            auto x = pick(to_left ? j.lambda : j.delta, prot);
            if (!x) return std::nullopt;
            Type t = dual(x->second);
            return to_left ? mk(r, j.gamma, j.delta.with(x->first, t), P, j.lambda.without(x->first), {d})
                           : mk(r, j.gamma, j.delta.without(x->first), P, j.lambda.with(x->first, t), {d});
        }
        return std::nullopt;
    }

    std::optional<D> send_rule(const std::string& r, D d1, D d2, const NameSet& prot) {
        const Judgment &j1 = d1.conclusion, &j2 = d2.conclusion;
        auto y = pick(r == "parL" ? j1.delta : j1.lambda, prot);
        auto x = pick(r == "*R" ? j2.lambda : j2.delta, prot);
        if (!y || !x) return std::nullopt;
        Context g = unify({&d1, &d2});
        const Judgment &k1 = d1.conclusion, &k2 = d2.conclusion;
        Process q = Process::send(x->first, y->first, k1.process, k2.process);
        if (r == "*R") {
            Context l = cat(k1.lambda.without(y->first), k2.lambda.without(x->first))
                            .with(x->first, Type::tensor(y->second, x->second));
            return mk(r, g, cat(k1.delta, k2.delta), q, l, {d1, d2});
        }
        Type a = r == "parL" ? dual(y->second) : y->second;
        Context dl = cat(r == "parL" ? k1.delta.without(y->first) : k1.delta, k2.delta.without(x->first))
                         .with(x->first, Type::lolli(a, x->second));
        Context l = cat(r == "parL" ? k1.lambda : k1.lambda.without(y->first), k2.lambda);
        return mk(r, g, dl, q, l, {d1, d2});
    }

    std::optional<D> cut_rule(const std::string& r, int depth, const NameSet& prot, D* base) {
        if (r == "cut!R" || r == "cut!L" || r == "cut?R" || r == "cut?L") {
            bool bang = r[3] == '!';
            bool server_right = r.back() == 'R';
            D s0 = gen(depth - 1);
            auto s = bang ? fold_right(std::move(s0)) : fold_left(std::move(s0));
            if (!s) return std::nullopt;
            const Judgment& sj = s->conclusion;
            Name y = bang ? sj.lambda.entries()[0].first : sj.delta.entries()[0].first;
            Type a = bang ? sj.lambda.entries()[0].second : dual(sj.delta.entries()[0].second);
            Name u = fresh("u");
            D c = [&] {
                if (base) {
                    D b = *base;
                    weaken(b, Context{{u, a}});
                    return b;
                }
                if (rng_.chance(0.25)) {
                    D b = gen(depth - 1);
                    weaken(b, Context{{u, a}});
                    return b;
                }
                bool left = !full() || rng_.chance(0.7);
                Name y2 = fresh("y");
                D w = with_entry(y2, left ? a : dual(a), left, depth - 1);
                weaken(w, Context{{u, a}});
                const Judgment& wj = w.conclusion;
                Process q = Process::copy(u, y2, wj.process);
                return left ? mk("copyL", wj.gamma, wj.delta.without(y2), q, wj.lambda, {w})
                            : mk("copyR", wj.gamma, wj.delta, q, wj.lambda.without(y2), {w});
            }();
            Context g;
            for (const auto& [n, t] : c.conclusion.gamma.entries())
                if (n != u) g.add(n, t);
            for (const auto& [n, t] : s->conclusion.gamma.entries())
                if (!g.has(n)) g.add(n, t);
            weaken(*s, g);
            weaken(c, g);
            Process serv = Process::server(u, y, s->conclusion.process);
            const Judgment& cj = c.conclusion;
            Type ann = server_right ? Type::query(dual(a)) : Type::bang(a);
            Process q = server_right ? Process::cut(u, ann, cj.process, serv) : Process::cut(u, ann, serv, cj.process);
            std::vector<D> ps = server_right ? std::vector<D>{c, *s} : std::vector<D>{*s, c};
            return mk(r, g, cj.delta, q, cj.lambda, ps);
        }
        // Linear cut: the first premise decides the cut type.
        bool l1 = r[3] == 'L', l2 = r[4] == 'L';
        D d1 = base ? *base : gen(depth - 1);
        base = nullptr;
        auto c = pick(l1 ? d1.conclusion.delta : d1.conclusion.lambda, prot);
        if (!c) return std::nullopt;
        Type other = l1 == l2 ? dual(c->second) : c->second;
        D d2 = with_entry(c->first, other, l2, depth - 1);
        if (rng_.chance(0.5)) {
            std::swap(d1, d2);
            std::swap(l1, l2);
        }
        return linear_cut(c->first, std::move(d1), std::move(d2));
    }

    D linear_cut(const Name& c, D d1, D d2) {
        Context g = unify({&d1, &d2});
        const Judgment &j1 = d1.conclusion, &j2 = d2.conclusion;
        bool l1 = j1.delta.has(c), l2 = j2.delta.has(c);
        const Type& a = l1 ? *j1.delta.find(c) : *j1.lambda.find(c);
        Type ann = l1 ? dual(a) : a;
        std::string rule = std::string("cut") + (l1 ? 'L' : 'R') + (l2 ? 'L' : 'R');
        Process q = Process::cut(c, ann, j1.process, j2.process);
        return mk(rule, g, cat(j1.delta.without(c), j2.delta.without(c)), q,
                  cat(j1.lambda.without(c), j2.lambda.without(c)), {d1, d2});
    }

    // Exactly one assignment, on the right, nothing on the left.
    std::optional<D> fold_right(D d) {
        if (d.conclusion.lambda.empty()) {
            if (full()) {
                d = *unary("botR", std::move(d), {});
            } else if (flavor_ == Flavor::StarMoves && !d.conclusion.delta.empty()) {
                d = *unary("moveR", std::move(d), {});
            } else {
                return std::nullopt;
            }
        }
        while (d.conclusion.lambda.size() > 1) {
            if (full()) {
                d = *unary("parR", std::move(d), {});
            } else if (flavor_ == Flavor::StarMoves) {
                d = *unary("moveL", std::move(d), {});
            } else {
                return std::nullopt;
            }
        }
        while (!d.conclusion.delta.empty()) d = *unary("-oR", std::move(d), {});
        return d;
    }

    // Exactly one assignment, on the left, nothing on the right.
    std::optional<D> fold_left(D d) {
        if (!full()) return std::nullopt;
        while (!d.conclusion.lambda.empty()) {
            auto [r, a] = d.conclusion.lambda.entries()[0];
            Name z = fresh("y");
            D id = mk("idL", {}, {{r, a}, {z, dual(a)}}, fwd(r, z), {}, {});
            d = linear_cut(r, std::move(d), std::move(id));
        }
        if (d.conclusion.delta.empty()) d = *unary("1L", std::move(d), {});
        while (d.conclusion.delta.size() > 1) d = *unary("*L", std::move(d), {});
        return d;
    }

    // --- closed programs ---------------------------------------------------

    D prod(const Name& x, const Type& a, int depth) {
        if (depth > 1 && rng_.chance(0.3)) {
            Type b = gen_safe_type(rng_, cfg_.type_depth, cfg_.labels);
            if (rng_.chance(0.7)) {
                Name w = fresh("c");
                D l = prod(w, b, depth - 1);
                D r = build({{w, b}}, x, a, depth - 1);
                return rng_.chance(0.5) ? linear_cut(w, std::move(l), std::move(r))
                                        : linear_cut(w, std::move(r), std::move(l));
            }
            Name u = fresh("u"), y = fresh("y"), y2 = fresh("y");
            D s = prod(y, b, depth - 1);
            D inner = build({{y2, b}}, x, a, depth - 1);
            weaken(inner, Context{{u, b}});
            const Judgment& ij = inner.conclusion;
            D c = mk("copyL", ij.gamma, ij.delta.without(y2), Process::copy(u, y2, ij.process), ij.lambda, {inner});
            Context g;
            for (const auto& [n, t] : c.conclusion.gamma.entries())
                if (n != u) g.add(n, t);
            for (const auto& [n, t] : s.conclusion.gamma.entries())
                if (!g.has(n)) g.add(n, t);
            weaken(s, g);
            weaken(c, g);
            Process serv = Process::server(u, y, s.conclusion.process);
            const Judgment& cj = c.conclusion;
            if (rng_.chance(0.5))
                return mk("cut!R", g, cj.delta, Process::cut(u, Type::query(dual(b)), cj.process, serv), cj.lambda, {c, s});
            return mk("cut!L", g, cj.delta, Process::cut(u, Type::bang(b), serv, cj.process), cj.lambda, {s, c});
        }
        switch (a.kind()) {
            case TypeKind::One:
                return mk("1R", {}, {}, Process::close(x), {{x, a}}, {});
            case TypeKind::Tensor: {
                Name y = fresh("y");
                D p1 = prod(y, a.left(), depth - 1);
                D p2 = prod(x, a.right(), depth - 1);
                Context g = unify({&p1, &p2});
                return mk("*R", g, {}, Process::send(x, y, p1.conclusion.process, p2.conclusion.process),
                          {{x, a}}, {p1, p2});
            }
            case TypeKind::Lolli: {
                Name y = fresh("y");
                D p = build({{y, a.left()}}, x, a.right(), depth - 1);
                return mk("-oR", p.conclusion.gamma, {}, Process::recv(x, y, p.conclusion.process), {{x, a}}, {p});
            }
            case TypeKind::Plus: {
                auto it = a.branches().begin();
                std::advance(it, static_cast<long>(rng_.below(a.branches().size())));
                D p = prod(x, it->second, depth - 1);
                return mk("+R", p.conclusion.gamma, {}, Process::select(x, it->first, p.conclusion.process),
                          {{x, a}}, {p});
            }
            case TypeKind::With: {
                std::vector<D> ps;
                for (const auto& [l, b] : a.branches()) ps.push_back(prod(x, b, depth - 1));
                return branch_node("&R", x, a, ps, false);
            }
            case TypeKind::Bang: {
                Name y = fresh("y");
                D p = prod(y, a.body(), depth - 1);
                return mk("!R", p.conclusion.gamma, {}, Process::server(x, y, p.conclusion.process), {{x, a}}, {p});
            }
            default:
                throw std::logic_error("no closed producer for " + std::to_string(static_cast<int>(a.kind())));
        }
    }

    D branch_node(const std::string& r, const Name& x, const Type& a, std::vector<D>& ps, bool left) {
        std::vector<D*> ptrs;
        for (auto& p : ps) ptrs.push_back(&p);
        Context g = unify(ptrs);
        Process::Arms arms;
        std::size_t i = 0;
        for (const auto& [l, b] : a.branches()) arms.emplace(l, ps[i++].conclusion.process);
        const Judgment& j0 = ps[0].conclusion;
        if (left) return mk(r, g, j0.delta.without(x).with(x, a), Process::branch(x, arms), j0.lambda, ps);
        return mk(r, g, j0.delta, Process::branch(x, arms), j0.lambda.without(x).with(x, a), ps);
    }

    // lefts |- P :: x:a, with every left assignment used.
    D build(std::vector<Entry> lefts, const Name& x, const Type& a, int depth) {
        if (lefts.empty()) return prod(x, a, depth);
        std::size_t k = rng_.below(lefts.size());
        Entry e = lefts[k];
        lefts.erase(lefts.begin() + static_cast<long>(k));
        const auto& [w, b] = e;
        auto ctx = [&](const D& d) { return d.conclusion.delta; };
        switch (b.kind()) {
            case TypeKind::One: {
                D p = build(lefts, x, a, depth);
                return mk("1L", p.conclusion.gamma, ctx(p).with(w, b), Process::wait(w, p.conclusion.process),
                          p.conclusion.lambda, {p});
            }
            case TypeKind::Tensor: {
                Name y = fresh("y");
                auto more = lefts;
                more.push_back({y, b.left()});
                more.push_back({w, b.right()});
                D p = build(more, x, a, depth);
                return mk("*L", p.conclusion.gamma, ctx(p).without(y).without(w).with(w, b),
                          Process::recv(w, y, p.conclusion.process), p.conclusion.lambda, {p});
            }
            case TypeKind::Lolli: {
                Name y = fresh("y");
                D p1 = prod(y, b.left(), depth - 1);
                auto more = lefts;
                more.push_back({w, b.right()});
                D p2 = build(more, x, a, depth);
                Context g = unify({&p1, &p2});
                return mk("-oL", g, ctx(p2).without(w).with(w, b),
                          Process::send(w, y, p1.conclusion.process, p2.conclusion.process),
                          p2.conclusion.lambda, {p1, p2});
            }
            case TypeKind::Plus: {
                std::vector<D> ps;
                for (const auto& [l, c] : b.branches()) {
                    auto more = lefts;
                    more.push_back({w, c});
                    ps.push_back(build(more, x, a, depth));
                }
                return branch_node("+L", w, b, ps, true);
            }
            case TypeKind::With: {
                auto it = b.branches().begin();
                std::advance(it, static_cast<long>(rng_.below(b.branches().size())));
                auto more = lefts;
                more.push_back({w, it->second});
                D p = build(more, x, a, depth);
                return mk("&L", p.conclusion.gamma, ctx(p).without(w).with(w, b),
                          Process::select(w, it->first, p.conclusion.process), p.conclusion.lambda, {p});
            }
            case TypeKind::Bang: {
                Name u = fresh("u");
                std::size_t copies = rng_.below(3);
                std::vector<Name> ys;
                auto more = lefts;
                for (std::size_t i = 0; i < copies; ++i) {
                    ys.push_back(fresh("y"));
                    more.push_back({ys.back(), b.body()});
                }
                D p = build(more, x, a, depth);
                weaken(p, Context{{u, b.body()}});
                for (auto i = ys.rbegin(); i != ys.rend(); ++i) {
                    const Judgment& j = p.conclusion;
                    p = mk("copyL", j.gamma, j.delta.without(*i), Process::copy(u, *i, j.process), j.lambda, {p});
                }
                const Judgment& j = p.conclusion;
                return mk("!L", j.gamma.without(u), j.delta.with(w, b), substitute(j.process, w, u), j.lambda, {p});
            }
            default:
                throw std::logic_error("no closed consumer for this type");
        }
    }
};

}  // namespace

Derivation gen_derivation(const GenConfig& cfg) {
    if (cfg.max_depth < 1 || cfg.type_depth < 1 || cfg.labels.empty())
        throw std::invalid_argument("GenConfig: depths must be >= 1 and labels nonempty");
    switch (cfg.system) {
        case System::ULL: {
            Builder b(cfg, Flavor::Full);
            return b.gen(cfg.max_depth);
        }
        case System::ULLM: {
            Builder b(cfg, Flavor::StarMoves);
            D d = b.gen(cfg.max_depth);
            retag_all(d, System::ULLM);
            return d;
        }
        case System::ILL: {
            Builder b(cfg, Flavor::Star);
            D d = b.gen(cfg.max_depth);
            auto r = to_intuitionistic(d);
            if (auto* out = std::get_if<Derivation>(&r)) return *out;
            throw std::logic_error("starred generation left the intuitionistic fragment");
        }
        case System::CLL: {
            Builder b(cfg, Flavor::Full);
            return to_classical(b.gen(cfg.max_depth));
        }
    }
    throw std::logic_error("unknown system");
}

Derivation gen_closed(const GenConfig& cfg) {
    Builder b(cfg, Flavor::Full);
    return b.closed();
}

}  // namespace sf

namespace sf {

std::vector<std::string> coverage_holes(const GenConfig& cfg, std::size_t samples) {
    std::set<std::string> seen;
    std::function<void(const Derivation&)> go = [&](const Derivation& d) {
        seen.insert(d.rule);
        for (const auto& p : d.premises) go(p);
    };
    for (std::size_t i = 0; i < samples; ++i) {
        GenConfig c = cfg;
        c.seed = case_seed(cfg.seed, i);
        go(gen_derivation(c));
    }
    std::vector<std::string> holes;
    Extension ext = cfg.mix ? Extension::Mix : Extension::None;
    for (const auto& r : rule_table(cfg.system, ext))
        if (!seen.count(r.name)) holes.push_back(r.name);
    return holes;
}

}  // namespace sf
