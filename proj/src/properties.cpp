#include <chrono>
#include <functional>
#include <optional>
#include <set>

#include <json.hpp>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/dynamics.hpp"
#include "sessionforge/harness.hpp"
#include "sessionforge/syntax.hpp"
#include "sessionforge/transform.hpp"

namespace sf {

std::string PropertyReport::json() const {
    nlohmann::json j;
    j["name"] = name;
    j["cases"] = cases;
    j["ok"] = ok();
    j["wall_ms"] = wall_ms;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures)
        j["failures"].push_back({{"seed", f.seed}, {"message", f.message}, {"counterexample", f.counterexample}});
    return j.dump(2);
}

const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names = {
        "duality_involution", "parse_print_roundtrip", "subject_congruence", "subject_reduction",
        "progress",           "deadlock_freedom",      "star_elim_roundtrip", "u_equals_c",
        "ill_fragment",       "locality"};
    return names;
}

namespace {

using Verdict = std::optional<std::string>;  // failure message
using DerivCheck = std::function<Verdict(const Derivation&)>;

CheckerConfig checker_for(const GenConfig& cfg) {
    return set_extension(cfg.mix ? Extension::Mix : Extension::None);
}

// Greedy descent into the first premise that still fails.
Derivation shrink(const Derivation& d, const DerivCheck& fails) {
    Derivation cur = d;
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto& p : cur.premises) {
            Verdict v;
            try {
                v = fails(p);
            } catch (const std::exception& e) {
                v = e.what();
            }
            if (v) {
                Derivation next = p;  // p lives inside cur
                cur = std::move(next);
                moved = true;
                break;
            }
        }
    }
    return cur;
}

std::string show(const Derivation& d) { return render_tree(d); }

Verdict check_valid(const Derivation& d, const CheckerConfig& cc, const std::string& what) {
    auto r = check_derivation(d, cc);
    if (!r) return what + " is not a valid derivation: " + r.message();
    return std::nullopt;
}

Verdict retypes(const Judgment& j, const Process& q, const CheckerConfig& cc, const std::string& what) {
    Judgment g = j;
    g.process = q;
    InferenceBudget b;
    auto r = infer(g, b, cc);
    if (auto* nf = std::get_if<NotFound>(&r); nf && nf->budget_exhausted) {
        b.max_steps *= 50;
        r = infer(g, b, cc);
    }
    if (std::holds_alternative<Derivation>(r)) return std::nullopt;
    std::string why = "annotation required";
    if (auto* nf = std::get_if<NotFound>(&r)) why = nf->reason;
    return what + " " + print_process(q) + " does not re-check at " + print_judgment(j) + " (" + why + ")";
}

void visit(const Derivation& d, const std::function<void(const Derivation&)>& f) {
    f(d);
    for (const auto& p : d.premises) visit(p, f);
}

// --- per-suite case bodies -------------------------------------------------

Verdict type_identities(const Type& a, const Type& b) {
    if (!(dual(dual(a)) == a)) return "dual(dual A) != A";
    if (!(dual(Type::tensor(a, b)) == Type::par(dual(a), dual(b)))) return "dual(A * B) != ~A par ~B";
    if (!(dual(Type::par(a, b)) == Type::tensor(dual(a), dual(b)))) return "dual(A par B) != ~A * ~B";
    if (!(dual(Type::lolli(a, b)) == Type::tensor(a, dual(b)))) return "dual(A -o B) != A * ~B";
    if (!(dual(Type::bang(a)) == Type::query(dual(a)))) return "dual(!A) != ?~A";
    if (!(dual(Type::query(a)) == Type::bang(dual(a)))) return "dual(?A) != !~A";
    Type::Branches bs = {{"a", a}, {"b", b}}, ds = {{"a", dual(a)}, {"b", dual(b)}};
    if (!(dual(Type::plus(bs)) == Type::with(ds))) return "dual(+{..}) != &{dual ..}";
    if (!(dual(Type::with(bs)) == Type::plus(ds))) return "dual(&{..}) != +{dual ..}";
    if (!(dual(Type::one()) == Type::bot()) || !(dual(Type::bot()) == Type::one())) return "dual(1) != bot";
    if (!(parse_type(print_type(a)) == a)) return "type print/parse mismatch";
    return std::nullopt;
}

std::vector<Type> children(const Type& t) {
    switch (t.kind()) {
        case TypeKind::Tensor:
        case TypeKind::Lolli: return {t.left(), t.right()};
        case TypeKind::Bang:
        case TypeKind::Query: return {t.body()};
        case TypeKind::Plus:
        case TypeKind::With: {
            std::vector<Type> out;
            for (const auto& [l, b] : t.branches()) out.push_back(b);
            return out;
        }
        default: return {};
    }
}

Verdict roundtrip(const Derivation& d) {
    const Judgment& j = d.conclusion;
    if (!alpha_eq(parse_process(print_process(j.process)), j.process))
        return "process print/parse mismatch: " + print_process(j.process);
    if (!same_judgment(parse_judgment(print_judgment(j)), j)) return "judgment print/parse mismatch: " + print_judgment(j);
    if (!same_tree(parse_derivation(print_derivation(d)), d)) return "derivation JSON round trip mismatch";
    for (const Context* c : {&j.gamma, &j.delta, &j.lambda})
        for (const auto& [n, t] : c->entries())
            if (!(parse_type(print_type(t)) == t)) return "type print/parse mismatch: " + print_type(t);
    return std::nullopt;
}

Verdict congruence_case(const Derivation& d, const CheckerConfig& cc) {
    const Judgment& j = d.conclusion;
    for (const auto& [ax, q] : congruence_axioms(j.process))
        if (auto v = retypes(j, q, cc, axiom_name(ax) + " image")) return v;
    return std::nullopt;
}

Verdict reduction_case(const Derivation& d, const CheckerConfig& cc, bool mix) {
    const Judgment& j = d.conclusion;
    for (const auto& s : step(j.process, mix))
        if (auto v = retypes(j, s.result, cc, step_rule_name(s.label.rule) + " reduct")) return v;
    return std::nullopt;
}

Verdict progress_case(const Derivation& d, bool mix) {
    Verdict out;
    visit(d, [&](const Derivation& n) {
        if (out || !is_cut_rule(n.rule)) return;
        try {
            Step s = find_redex(n);
            bool listed = false;
            for (const auto& t : step(n.conclusion.process, mix)) listed = listed || alpha_eq(t.result, s.result);
            if (!listed) out = "find_redex result is not a one-step reduct of " + print_process(n.conclusion.process);
        } catch (const std::exception& e) {
            out = std::string("no redex for a cut: ") + e.what() + " in " + print_process(n.conclusion.process);
        }
    });
    return out;
}

Judgment classical_image(const Judgment& j) {
    auto d = merge(j.delta.dualized(), j.lambda);
    return Judgment::cll(j.process, j.gamma.dualized(), d ? *d : Context{});
}

Judgment united_image(const Judgment& j) {
    return Judgment::ull(j.gamma.dualized(), {}, j.process, j.delta, System::ULL);
}

Verdict star_case(const Derivation& d, const CheckerConfig& cc) {
    if (d.system() == System::ULL) {
        Derivation n = eliminate_nonstar(d);
        if (auto v = check_valid(n, cc, "eliminate_nonstar output")) return v;
        if (!same_sequent(n.conclusion, d.conclusion)) return "eliminate_nonstar changed the root judgment";
        Verdict bad;
        visit(n, [&](const Derivation& x) {
            if (!bad && !find_rule(System::ULLM, x.rule, Extension::Mix))
                bad = "eliminate_nonstar left rule " + x.rule;
        });
        if (bad) return bad;
    }
    Derivation m;
    try {
        m = eliminate_moves(d.system() == System::ULL ? eliminate_nonstar(d) : d);
    } catch (const MoveNotEliminable& e) {
        std::string names;
        for (const auto& n : e.endpoints) names += (names.empty() ? "" : ", ") + n;
        return std::string("move not eliminable: ") + e.what() + " {" + names + "}";
    }
    if (auto v = check_valid(m, cc, "eliminate_moves output")) return v;
    Judgment want = d.conclusion;
    want.system = System::ULL;
    if (!same_judgment(m.conclusion, want)) return "eliminate_moves changed the root judgment";
    Verdict bad;
    visit(m, [&](const Derivation& x) {
        if (!bad && (x.rule == "moveL" || x.rule == "moveR")) bad = "eliminate_moves left a move";
    });
    return bad;
}

Verdict classical_case(const Derivation& d, const CheckerConfig& cc) {
    Derivation c = to_classical(d);
    if (auto v = check_valid(c, cc, "to_classical output")) return v;
    if (!same_judgment(c.conclusion, classical_image(d.conclusion)))
        return "to_classical root " + print_judgment(c.conclusion) + " is not " + print_judgment(classical_image(d.conclusion));
    return std::nullopt;
}

Verdict united_case(const Derivation& d, const CheckerConfig& cc) {
    Derivation u;
    try {
        u = to_united(d);
    } catch (const MoveNotEliminable& e) {
        return std::string("to_united: ") + e.what();
    }
    if (auto v = check_valid(u, cc, "to_united output")) return v;
    if (!same_judgment(u.conclusion, united_image(d.conclusion)))
        return "to_united root " + print_judgment(u.conclusion) + " is not " + print_judgment(united_image(d.conclusion));
    return std::nullopt;
}

Verdict ill_case(const Derivation& ill) {
    Derivation e = from_intuitionistic(ill);
    if (auto v = check_valid(e, {}, "embedded ILL derivation")) return v;
    FragmentReport r = fragment_report(e);
    if (!r.ill_member) return "embedded ILL derivation reported outside the fragment: " + r.reason;
    auto back = to_intuitionistic(e);
    if (!std::holds_alternative<Derivation>(back) || !same_tree(std::get<Derivation>(back), ill))
        return "to_intuitionistic does not invert the embedding";
    return std::nullopt;
}

Verdict fragment_case(const Derivation& d, const CheckerConfig& cc) {
    FragmentReport r = fragment_report(d);
    auto t = to_intuitionistic(d);
    if (r.ill_member) {
        if (!std::holds_alternative<Derivation>(t)) return "member reported but to_intuitionistic refused";
        return check_valid(std::get<Derivation>(t), {}, "to_intuitionistic output");
    }
    if (!r.witness) return "non-member without a witness";
    const Derivation* w = node_at(d, *r.witness);
    if (!w) return "witness path does not exist";
    bool types_ok = true;
    for (const Context* c : {&w->conclusion.gamma, &w->conclusion.delta, &w->conclusion.lambda})
        for (const auto& [x, ty] : c->entries()) types_ok = types_ok && in_ill_grammar(ty);
    bool outside = !is_star_rule(w->rule) || w->conclusion.r_degree() != 1 || w->rule == "mix" ||
                   w->rule == "empty" || !types_ok;
    if (!outside) return "witness node " + print_path(*r.witness) + " is inside the fragment";
    (void)cc;
    return std::nullopt;
}

// recv x(y). <prefixes on other names> serv y(z). close z   or   ... close y
Process locality_witness(SplitMix64& rng, bool server, Name& flagged) {
    std::size_t k = rng.below(3);
    Name x = "x", y = "y";
    flagged = y;
    Process inner = server ? Process::server(y, "z", Process::close("z")) : Process::close(y);
    for (std::size_t i = 0; i < k; ++i) {
        Name w = "w" + std::to_string(i);
        inner = rng.chance(0.5) ? Process::wait(w, inner) : Process::select(w, "a", inner);
    }
    return Process::recv(x, y, inner);
}

Verdict locality_case(SplitMix64& rng, const GenConfig& c) {
    GenConfig ic = c;
    ic.system = System::ILL;
    ic.mix = false;
    Derivation d = gen_derivation(ic);
    auto ds = locality_diagnose(d.conclusion.process);
    if (!ds.empty()) return "diagnostic on an ILL-typed process: " + ds[0].message + " in " + print_process(d.conclusion.process);
    for (bool server : {true, false}) {
        Name n;
        Process w = locality_witness(rng, server, n);
        DiagnosticKind want = server ? DiagnosticKind::NonLocalServer : DiagnosticKind::NonLocalEmptySend;
        bool hit = false;
        for (const auto& x : locality_diagnose(w)) hit = hit || (x.kind == want && x.name == n);
        if (!hit) return diagnostic_kind_name(want) + " did not fire on " + print_process(w);
    }
    return std::nullopt;
}

}  // namespace

PropertyReport run_property(const std::string& name, const GenConfig& cfg, std::size_t cases) {
    const auto& names = property_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown property suite: " + name);
    auto t0 = std::chrono::steady_clock::now();
    PropertyReport rep;
    rep.name = name;
    CheckerConfig cc = checker_for(cfg);
    CheckerConfig mixcc = set_extension(Extension::Mix);

    auto fail = [&](std::uint64_t seed, std::string msg, std::string cex) {
        rep.failures.push_back({seed, std::move(msg), std::move(cex)});
    };
    // Runs `check` on a generated derivation and shrinks on failure.
    auto on_derivation = [&](std::uint64_t seed, const Derivation& d, const DerivCheck& check) {
        Verdict v;
        try {
            v = check(d);
        } catch (const std::exception& e) {
            v = std::string("exception: ") + e.what();
        }
        if (v) {
            Derivation small = shrink(d, check);
            Verdict sv;
            try {
                sv = check(small);
            } catch (const std::exception& e) {
                sv = std::string("exception: ") + e.what();
            }
            fail(seed, sv ? *sv : *v, show(small));
        }
    };

    for (std::size_t i = 0; i < cases; ++i) {
        std::uint64_t seed = case_seed(cfg.seed, i);
        GenConfig c = cfg;
        c.seed = seed;
        GenConfig u = c;
        u.system = System::ULL;
        ++rep.cases;
        try {
            if (name == "duality_involution") {
                SplitMix64 rng(seed);
                int da = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(cfg.type_depth)));
                int db = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(cfg.type_depth)));
                Type a = gen_type(rng, da, cfg.labels), b = gen_type(rng, db, cfg.labels);
                if (auto v = type_identities(a, b)) {
                    for (bool moved = true; moved;) {
                        moved = false;
                        for (const auto& ch : children(a))
                            if (type_identities(ch, b)) {
                                a = ch;
                                moved = true;
                                break;
                            }
                    }
                    fail(seed, *v, print_type(a) + " ; " + print_type(b));
                }
            } else if (name == "parse_print_roundtrip") {
                on_derivation(seed, gen_derivation(c), roundtrip);
            } else if (name == "subject_congruence") {
                on_derivation(seed, gen_derivation(u), [&](const Derivation& d) { return congruence_case(d, cc); });
            } else if (name == "subject_reduction") {
                on_derivation(seed, gen_derivation(u),
                              [&](const Derivation& d) { return reduction_case(d, cc, cfg.mix); });
            } else if (name == "progress") {
                on_derivation(seed, gen_derivation(u), [&](const Derivation& d) { return progress_case(d, cfg.mix); });
            } else if (name == "deadlock_freedom") {
                Derivation d = gen_closed(u);
                const Process& p = d.conclusion.process;
                int fuel = static_cast<int>(4 * p.size());
                try {
                    RunResult r = run_closed(d, fuel);
                    if (!alpha_eq(r.terminal, Process::close("z")))
                        fail(seed, "terminal state is " + print_process(r.terminal) + ", not close z", print_process(p));
                } catch (const std::exception& e) {
                    fail(seed, e.what(), print_process(p));
                }
            } else if (name == "star_elim_roundtrip") {
                on_derivation(seed, gen_derivation(u), [&](const Derivation& d) { return star_case(d, mixcc); });
                GenConfig m = c;
                m.system = System::ULLM;
                on_derivation(seed, gen_derivation(m), [&](const Derivation& d) { return star_case(d, mixcc); });
            } else if (name == "u_equals_c") {
                on_derivation(seed, gen_derivation(u), [&](const Derivation& d) { return classical_case(d, mixcc); });
                GenConfig k = c;
                k.system = System::CLL;
                on_derivation(seed, gen_derivation(k), [&](const Derivation& d) { return united_case(d, mixcc); });
            } else if (name == "ill_fragment") {
                GenConfig k = c;
                k.system = System::ILL;
                k.mix = false;
                on_derivation(seed, gen_derivation(k), ill_case);
                on_derivation(seed, gen_derivation(u), [&](const Derivation& d) { return fragment_case(d, mixcc); });
            } else if (name == "locality") {
                SplitMix64 rng(seed);
                if (auto v = locality_case(rng, c)) fail(seed, *v, "");
            }
        } catch (const std::exception& e) {
            fail(seed, std::string("exception: ") + e.what(), "");
        }
    }

    if (name == "u_equals_c" && cases > 0) {
        // Typable process sets over a small exhaustive universe.
        std::size_t bound = static_cast<std::size_t>(std::min(cfg.max_depth, 5));
        std::vector<Type> universe = {Type::one(), Type::bot(), Type::tensor(Type::one(), Type::one()),
                                      Type::par(Type::one(), Type::bot())};
        OracleLimits lim;
        lim.mix = cfg.mix;
        auto ull = exhaustive_oracle(bound, universe, System::ULL, lim);
        auto cll = exhaustive_oracle(bound, universe, System::CLL, lim);
        std::set<std::string> a(ull.typable_keys.begin(), ull.typable_keys.end());
        std::set<std::string> b(cll.typable_keys.begin(), cll.typable_keys.end());
        for (const auto& k : a)
            if (!b.count(k)) fail(cfg.seed, "typable in ULL but not in CLL (oracle size " + std::to_string(bound) + ")", k);
        for (const auto& k : b)
            if (!a.count(k)) fail(cfg.seed, "typable in CLL but not in ULL (oracle size " + std::to_string(bound) + ")", k);
    }

    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace sf
