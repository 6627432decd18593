// Acceptance checks 1-8. One line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/dynamics.hpp"
#include "sessionforge/harness.hpp"
#include "sessionforge/syntax.hpp"
#include "sessionforge/transform.hpp"

using namespace sf;

namespace {

// Pinned limits.
constexpr std::size_t kTypes = 10000;
constexpr int kTypeDepth = 8;
constexpr double kDualitySeconds = 5;
constexpr std::size_t kDerivations = 500;
constexpr int kDerivationDepth = 7;
constexpr double kDynamicsSeconds = 120;
constexpr std::size_t kTransformInputs = 200;
constexpr std::size_t kOracleSize = 5;
constexpr double kOracleSeconds = 300;
constexpr std::size_t kIllCorpus = 500;
constexpr std::size_t kServerWitnessDerivations = 3;
constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failed = 0;

void line(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
}

std::string first_failure(const PropertyReport& r) {
    if (r.failures.empty()) return "";
    return " [" + r.failures[0].message + "]";
}

// Duality written out from its defining table.
Type flip(const Type& t) {
    switch (t.kind()) {
        case TypeKind::One: return Type::bot();
        case TypeKind::Bot: return Type::one();
        case TypeKind::Tensor: return Type::lolli(t.left(), flip(t.right()));
        case TypeKind::Lolli: return Type::tensor(t.left(), flip(t.right()));
        case TypeKind::Bang: return Type::query(flip(t.body()));
        case TypeKind::Query: return Type::bang(flip(t.body()));
        case TypeKind::Plus:
        case TypeKind::With: {
            Type::Branches bs;
            for (const auto& [l, b] : t.branches()) bs.emplace(l, flip(b));
            return t.is(TypeKind::Plus) ? Type::with(bs) : Type::plus(bs);
        }
    }
    return t;
}

bool uses_rule(const Derivation& d, const std::function<bool(const std::string&)>& pred) {
    bool hit = false;
    visit(d, [&](const Derivation& n, const NodePath&) { hit = hit || pred(n.rule); });
    return hit;
}

void criterion1() {
    auto t0 = Clock::now();
    SplitMix64 rng(kSeed);
    std::size_t bad = 0;
    std::string example;
    for (std::size_t i = 0; i < kTypes; ++i) {
        Type a = gen_type(rng, 1 + static_cast<int>(rng.below(kTypeDepth)), {"a", "b", "c"});
        Type b = gen_type(rng, 1 + static_cast<int>(rng.below(kTypeDepth)), {"a", "b", "c"});
        bool ok = dual(dual(a)) == a && dual(a) == flip(a) &&
                  dual(Type::tensor(a, b)) == Type::par(dual(a), dual(b)) &&
                  dual(Type::par(a, b)) == Type::tensor(dual(a), dual(b)) &&
                  dual(Type::bang(a)) == Type::query(dual(a)) && dual(Type::query(a)) == Type::bang(dual(a)) &&
                  dual(Type::plus({{"l", a}, {"r", b}})) == Type::with({{"l", dual(a)}, {"r", dual(b)}});
        if (!ok && bad++ == 0) example = print_type(a);
    }
    double s = since(t0);
    line(1, bad == 0 && s < kDualitySeconds,
         std::to_string(kTypes) + " type pairs, " + std::to_string(bad) + " failures, " + std::to_string(s) + " s" +
             (example.empty() ? "" : " [" + example + "]"));
}

GenConfig base(int depth) {
    GenConfig g;
    g.seed = kSeed;
    g.max_depth = depth;
    return g;
}

void criterion2() {
    auto t0 = Clock::now();
    PropertyReport c = run_property("subject_congruence", base(kDerivationDepth), kDerivations);
    PropertyReport r = run_property("subject_reduction", base(kDerivationDepth), kDerivations);
    double s = since(t0);
    line(2, c.ok() && r.ok() && s < kDynamicsSeconds,
         std::to_string(c.cases) + " derivations; congruence failures " + std::to_string(c.failures.size()) +
             ", reduction failures " + std::to_string(r.failures.size()) + ", " + std::to_string(s) + " s" +
             first_failure(c) + first_failure(r));
}

void criterion3() {
    auto t0 = Clock::now();
    PropertyReport p = run_property("progress", base(kDerivationDepth), kDerivations);
    PropertyReport d = run_property("deadlock_freedom", base(kDerivationDepth), kDerivations);
    double s = since(t0);
    line(3, p.ok() && d.ok() && s < kDynamicsSeconds,
         std::to_string(p.cases) + " cut derivations, " + std::to_string(d.cases) +
             " closed programs; progress failures " + std::to_string(p.failures.size()) + ", deadlock failures " +
             std::to_string(d.failures.size()) + ", " + std::to_string(s) + " s" + first_failure(p) + first_failure(d));
}

void criterion4() {
    CheckerConfig cc = set_extension(Extension::None);
    std::size_t nonstar_inputs = 0, nonstar_bad = 0, move_inputs = 0, move_bad = 0, not_eliminable = 0;
    std::string example;
    for (std::size_t i = 0; nonstar_inputs < kTransformInputs || move_inputs < kTransformInputs; ++i) {
        GenConfig g = base(6);
        g.seed = case_seed(kSeed + 4, i);
        if (nonstar_inputs < kTransformInputs) {
            Derivation d = gen_derivation(g);
            if (uses_rule(d, [](const std::string& r) { return !is_star_rule(r); })) {
                ++nonstar_inputs;
                try {
                    Derivation n = eliminate_nonstar(d);
                    bool ok = check_derivation(n, cc).ok && same_sequent(n.conclusion, d.conclusion) &&
                              !uses_rule(n, [](const std::string& r) { return !find_rule(System::ULLM, r); });
                    if (!ok) ++nonstar_bad;
                } catch (const std::exception& e) {
                    if (nonstar_bad++ == 0) example = e.what();
                }
            }
        }
        if (move_inputs < kTransformInputs) {
            g.system = System::ULLM;
            Derivation d = gen_derivation(g);
            if (uses_rule(d, [](const std::string& r) { return r == "moveL" || r == "moveR"; })) {
                ++move_inputs;
                try {
                    Derivation m = eliminate_moves(d);
                    Judgment want = d.conclusion;
                    want.system = System::ULL;
                    bool ok = check_derivation(m, cc).ok && same_judgment(m.conclusion, want) &&
                              !uses_rule(m, [](const std::string& r) { return r == "moveL" || r == "moveR"; });
                    if (!ok) ++move_bad;
                } catch (const MoveNotEliminable& e) {
                    ++move_bad;
                    if (not_eliminable++ == 0 && example.empty())
                        example = std::string(e.what()) + " in " + print_process(d.conclusion.process);
                }
            }
        }
    }
    line(4, nonstar_bad == 0 && move_bad == 0,
         "eliminate_nonstar " + std::to_string(nonstar_bad) + "/" + std::to_string(nonstar_inputs) +
             " failures; eliminate_moves " + std::to_string(move_bad) + "/" + std::to_string(move_inputs) +
             " failures (" + std::to_string(not_eliminable) + " MoveNotEliminable)" +
             (example.empty() ? "" : " [" + example + "]"));
}

void criterion5() {
    auto t0 = Clock::now();
    CheckerConfig cc;
    std::size_t to_c_bad = 0, to_u_bad = 0, not_eliminable = 0;
    std::string example;
    for (std::size_t i = 0; i < kTransformInputs; ++i) {
        GenConfig g = base(6);
        g.seed = case_seed(kSeed + 5, i);
        Derivation d = gen_derivation(g);
        try {
            Derivation c = to_classical(d);
            auto dd = merge(d.conclusion.delta.dualized(), d.conclusion.lambda);
            Judgment want = Judgment::cll(d.conclusion.process, d.conclusion.gamma.dualized(), dd ? *dd : Context{});
            if (!dd || !check_derivation(c, cc).ok || !same_judgment(c.conclusion, want)) ++to_c_bad;
        } catch (const std::exception&) {
            ++to_c_bad;
        }
        g.system = System::CLL;
        Derivation k = gen_derivation(g);
        try {
            Derivation u = to_united(k);
            Judgment want = Judgment::ull(k.conclusion.gamma.dualized(), {}, k.conclusion.process, k.conclusion.delta);
            if (!check_derivation(u, cc).ok || !same_judgment(u.conclusion, want)) ++to_u_bad;
        } catch (const MoveNotEliminable& e) {
            ++to_u_bad;
            if (not_eliminable++ == 0) example = std::string(e.what()) + " in " + print_process(k.conclusion.process);
        } catch (const std::exception& e) {
            ++to_u_bad;
            if (example.empty()) example = e.what();
        }
    }

    std::vector<Type> universe = {Type::one(), Type::bot(), Type::tensor(Type::one(), Type::one()),
                                  Type::par(Type::one(), Type::bot())};
    auto ull = exhaustive_oracle(kOracleSize, universe, System::ULL);
    auto cll = exhaustive_oracle(kOracleSize, universe, System::CLL);
    std::set<std::string> a(ull.typable_keys.begin(), ull.typable_keys.end());
    std::set<std::string> b(cll.typable_keys.begin(), cll.typable_keys.end());
    double s = since(t0);
    bool oracle_ok = a == b && !a.empty();
    line(5, to_c_bad == 0 && to_u_bad == 0 && oracle_ok && s < kOracleSeconds,
         "(a) to_classical " + std::to_string(to_c_bad) + "/" + std::to_string(kTransformInputs) +
             " failures, to_united " + std::to_string(to_u_bad) + "/" + std::to_string(kTransformInputs) +
             " failures (" + std::to_string(not_eliminable) + " MoveNotEliminable); (b) " +
             std::to_string(ull.processes.size()) + " processes of size <= " + std::to_string(kOracleSize) + ", " +
             std::to_string(a.size()) + " ULL-typable, " + std::to_string(b.size()) + " CLL-typable, sets " +
             (a == b ? "identical" : "differ") + "; " + std::to_string(s) + " s" +
             (example.empty() ? "" : " [" + example + "]"));
}

// The witness types with their subterms, closed under duality.
std::vector<Type> witness_universe() {
    std::set<Type> u;
    for (const char* s : {"?bot -o ?bot", "bot * 1"})
        for (const Type& t : subterms(parse_type(s))) {
            u.insert(t);
            u.insert(dual(t));
        }
    for (const Type& t : std::vector<Type>(u.begin(), u.end()))
        for (const Type& x : subterms(t)) u.insert(x);
    return {u.begin(), u.end()};
}

void criterion6() {
    std::size_t embed_bad = 0;
    for (std::size_t i = 0; i < kIllCorpus; ++i) {
        GenConfig g = base(6);
        g.system = System::ILL;
        g.seed = case_seed(kSeed + 6, i);
        Derivation d = gen_derivation(g);
        Derivation e = from_intuitionistic(d);
        if (!check_derivation(e).ok || !fragment_report(e).ill_member) ++embed_bad;
    }

    InferenceBudget b;
    b.universe = witness_universe();
    std::string counts;
    bool witnesses_ok = true;
    std::size_t server_witness_ull = 0;
    for (const char* src : {"recv x(y). serv y(z). close z", "recv x(y). wait x . close y"}) {
        Process p = parse_process(src);
        std::size_t u = infer_all(p, System::ULL, b).size();
        std::size_t c = infer_all(p, System::CLL, b).size();
        std::size_t i = infer_all(p, System::ILL, b).size();
        if (server_witness_ull == 0) server_witness_ull = u;
        witnesses_ok = witnesses_ok && u > 0 && c > 0 && i == 0;
        counts += std::string(counts.empty() ? "" : "; ") + "'" + src + "' ULL " + std::to_string(u) + ", CLL " +
                  std::to_string(c) + ", ILL " + std::to_string(i);
    }
    line(6, embed_bad == 0 && witnesses_ok && server_witness_ull == kServerWitnessDerivations,
         "(a) " + std::to_string(embed_bad) + "/" + std::to_string(kIllCorpus) + " embeddings outside; (b) " + counts +
             "; (c) " + std::to_string(server_witness_ull) + " ULL derivations of the first witness (expected " +
             std::to_string(kServerWitnessDerivations) + ")");
}

void criterion7() {
    PropertyReport r = run_property("locality", base(6), kIllCorpus);
    auto s = locality_diagnose(parse_process("recv x(y). serv y(z). close z"));
    auto e = locality_diagnose(parse_process("recv x(y). wait x . close y"));
    bool fixed = s.size() == 1 && s[0].kind == DiagnosticKind::NonLocalServer && e.size() == 1 &&
                 e[0].kind == DiagnosticKind::NonLocalEmptySend;
    line(7, r.ok() && fixed,
         std::to_string(r.cases) + " ILL processes and witness pairs, " + std::to_string(r.failures.size()) +
             " deviations" + first_failure(r));
}

void criterion8() {
    CheckerConfig mix = set_extension(Extension::Mix), plain;
    Judgment par = parse_judgment(". ; . |- close x | close y :: x:1, y:1");
    Judgment nil = parse_judgment(". ; . |- 0 :: .");
    auto typ = [](const Judgment& j, const CheckerConfig& c) { return std::holds_alternative<Derivation>(infer(j, {}, c)); };
    bool typing = typ(par, mix) && typ(nil, mix) && !typ(par, plain) && !typ(nil, plain);

    // Every generated derivation containing mix/empty is reported outside,
    // with a witness that is outside on its own.
    std::size_t seen = 0, bad = 0;
    for (std::size_t i = 0; seen < kTransformInputs && i < 20 * kTransformInputs; ++i) {
        GenConfig g = base(5);
        g.mix = true;
        g.seed = case_seed(kSeed + 8, i);
        Derivation d = gen_derivation(g);
        if (!uses_rule(d, [](const std::string& r) { return r == "mix" || r == "empty"; })) continue;
        ++seen;
        FragmentReport r = fragment_report(d);
        if (r.ill_member || !r.witness) {
            ++bad;
            continue;
        }
        const Derivation* w = node_at(d, *r.witness);
        if (!w || (is_star_rule(w->rule) && w->conclusion.r_degree() == 1 && w->rule != "mix" && w->rule != "empty")) {
            bool types_ok = true;
            for (const Context* c : {&w->conclusion.gamma, &w->conclusion.delta, &w->conclusion.lambda})
                for (const auto& [x, t] : c->entries()) types_ok = types_ok && in_ill_grammar(t);
            if (types_ok) ++bad;
        }
    }
    auto dp = infer(par, {}, mix);
    bool direct = std::holds_alternative<Derivation>(dp) && !fragment_report(std::get<Derivation>(dp)).ill_member;
    line(8, typing && direct && bad == 0 && seen > 0,
         std::string("mix typing ") + (typing ? "as expected" : "wrong") + "; " + std::to_string(seen) +
             " generated derivations with mix/empty, " + std::to_string(bad) + " reported inside");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::printf("%d of 8 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
