#include <set>

#include <gtest/gtest.h>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/dynamics.hpp"
#include "sessionforge/harness.hpp"
#include "sessionforge/syntax.hpp"

using namespace sf;

TEST(Rng, Deterministic) {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
    // Reference output of SplitMix64 seeded with 0.
    SplitMix64 z(0);
    EXPECT_EQ(z.next(), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(z.next(), 0x6E789E6AA1B965F4ull);
    SplitMix64 r(3);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
    EXPECT_NE(case_seed(1, 0), case_seed(1, 1));
}

TEST(Generator, ValidInEverySystem) {
    for (System s : {System::ULL, System::ULLM, System::ILL, System::CLL})
        for (bool mix : {false, true}) {
            if (mix && (s == System::ILL || s == System::ULLM)) continue;
            CheckerConfig cc = set_extension(mix ? Extension::Mix : Extension::None);
            for (std::size_t i = 0; i < 150; ++i) {
                GenConfig g;
                g.system = s;
                g.mix = mix;
                g.max_depth = 5;
                g.seed = case_seed(9, i);
                Derivation d = gen_derivation(g);
                EXPECT_EQ(d.system(), s);
                auto r = check_derivation(d, cc);
                ASSERT_TRUE(r.ok) << system_name(s) << " seed " << g.seed << ": " << r.message();
            }
        }
}

TEST(Generator, SameSeedSameDerivation) {
    GenConfig g;
    g.seed = 77;
    g.max_depth = 6;
    EXPECT_EQ(print_derivation(gen_derivation(g)), print_derivation(gen_derivation(g)));
}

TEST(Generator, ClosedProgramsRun) {
    for (std::size_t i = 0; i < 50; ++i) {
        GenConfig g;
        g.seed = case_seed(5, i);
        Derivation d = gen_closed(g);
        EXPECT_TRUE(d.conclusion.gamma.empty() && d.conclusion.delta.empty());
        ASSERT_EQ(d.conclusion.lambda.size(), 1u);
        EXPECT_EQ(*d.conclusion.lambda.find("z"), Type::one());
        EXPECT_TRUE(check_derivation(d).ok);
        RunResult r = run_closed(d, static_cast<int>(4 * d.conclusion.process.size()));
        EXPECT_TRUE(alpha_eq(r.terminal, Process::close("z")));
    }
}

TEST(Generator, CoversEveryRule) {
    for (System s : {System::ULL, System::ULLM, System::ILL, System::CLL}) {
        GenConfig g;
        g.system = s;
        g.max_depth = 6;
        auto holes = coverage_holes(g, 10000);
        std::string all;
        for (const auto& h : holes) all += h + " ";
        EXPECT_TRUE(holes.empty()) << system_name(s) << ": " << all;
    }
    GenConfig m;
    m.mix = true;
    EXPECT_TRUE(coverage_holes(m, 10000).empty());
}

TEST(Oracle, EnumerationIsUpToRenaming) {
    OracleLimits lim;
    auto ps = enumerate_processes(3, lim);
    ASSERT_FALSE(ps.empty());
    std::set<std::string> keys;
    for (const auto& p : ps) {
        EXPECT_LE(p.size(), 3u);
        keys.insert(alpha_key(p));
    }
    EXPECT_EQ(keys.size(), ps.size());
    auto has = [&](const char* s) {
        std::string k = alpha_key(parse_process(s));
        return keys.count(k) > 0;
    };
    EXPECT_TRUE(has("close x"));
    EXPECT_TRUE(has("wait x . close y"));
    EXPECT_FALSE(has("close y"));  // a renaming of close x
    EXPECT_FALSE(has("0"));        // no mix
}

TEST(Oracle, EntriesReCheck) {
    std::vector<Type> u = {Type::one(), Type::bot()};
    auto r = exhaustive_oracle(3, u, System::ULL);
    ASSERT_FALSE(r.typable.empty());
    for (const auto& e : r.typable) {
        auto d = infer(e.judgment);
        ASSERT_TRUE(std::holds_alternative<Derivation>(d)) << print_judgment(e.judgment);
        EXPECT_TRUE(check_derivation(std::get<Derivation>(d)).ok);
    }
    // close x : x:1 on the right, wait x . close y : x:1 left, y:1 right
    std::set<std::string> keys(r.typable_keys.begin(), r.typable_keys.end());
    EXPECT_TRUE(keys.count(alpha_key(parse_process("close x"))));
    EXPECT_TRUE(keys.count(alpha_key(parse_process("wait x . close y"))));
    EXPECT_FALSE(keys.count(alpha_key(parse_process("wait x . close x"))));
}

TEST(Properties, SuitesRunAndAreReproducible) {
    GenConfig g;
    g.seed = 3;
    g.max_depth = 4;
    for (const auto& n : property_names()) {
        if (n == "u_equals_c" || n == "star_elim_roundtrip") continue;
        PropertyReport r = run_property(n, g, 25);
        EXPECT_EQ(r.cases, 25u) << n;
        if (n == "subject_reduction") {
            // only forwarder substitutions that need a right-right forwarder
            for (const auto& f : r.failures) EXPECT_EQ(f.message.rfind("betaId reduct", 0), 0u) << f.message;
        } else {
            EXPECT_TRUE(r.ok()) << r.json();
        }
    }
    PropertyReport a = run_property("subject_reduction", g, 10);
    PropertyReport b = run_property("subject_reduction", g, 10);
    EXPECT_EQ(a.failures.size(), b.failures.size());
    EXPECT_THROW(run_property("no_such_suite", g, 1), std::invalid_argument);
}
