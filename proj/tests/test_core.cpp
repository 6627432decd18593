#include <gtest/gtest.h>

#include "sessionforge/harness.hpp"
#include "sessionforge/judgment.hpp"
#include "sessionforge/process.hpp"
#include "sessionforge/syntax.hpp"
#include "sessionforge/types.hpp"

using namespace sf;

namespace {

// Written out from the duality table, without calling sf::dual.
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

}  // namespace

TEST(Types, DualMatchesTable) {
    SplitMix64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        Type a = gen_type(rng, 1 + static_cast<int>(rng.below(6)), {"a", "b", "c"});
        EXPECT_EQ(dual(a), flip(a)) << print_type(a);
        EXPECT_EQ(dual(dual(a)), a);
    }
}

TEST(Types, ParIsSugarForLolli) {
    Type a = Type::bang(Type::one());
    EXPECT_EQ(Type::par(a, Type::bot()), Type::lolli(Type::query(Type::bot()), Type::bot()));
    EXPECT_EQ(parse_type("1 par bot"), Type::lolli(Type::bot(), Type::bot()));
}

TEST(Types, IllGrammar) {
    EXPECT_TRUE(in_ill_grammar(parse_type("1 * !1 -o +{a:1}")));
    EXPECT_FALSE(in_ill_grammar(parse_type("1 -o bot")));
    EXPECT_FALSE(in_ill_grammar(parse_type("&{a: ?1}")));
}

TEST(Types, SizeAndSubterms) {
    Type t = parse_type("(1 * bot) -o !1");
    EXPECT_EQ(t.size(), 6u);
    EXPECT_EQ(t.depth(), 3u);
    auto ss = subterms(t);
    for (const char* s : {"(1 * bot) -o !1", "1 * bot", "!1", "1", "bot"})
        EXPECT_NE(std::find(ss.begin(), ss.end(), parse_type(s)), ss.end()) << s;
}

TEST(Process, FreeAndBoundNames) {
    Process p = parse_process("recv x(y). send y(z).(close z | wait w . close q)");
    EXPECT_EQ(free_names(p), (NameSet{"x", "w", "q"}));
    EXPECT_EQ(bound_names(p), (NameSet{"y", "z"}));
    Process r = parse_process("new x (close x | wait x . close z)");
    EXPECT_EQ(free_names(r), NameSet{"z"});
}

TEST(Process, AlphaEquivalence) {
    EXPECT_TRUE(alpha_eq(parse_process("recv x(y). close y"), parse_process("recv x(k). close k")));
    EXPECT_FALSE(alpha_eq(parse_process("recv x(y). close y"), parse_process("recv x(y). close x")));
    EXPECT_TRUE(alpha_eq(parse_process("new a (close a | wait a . close z)"),
                         parse_process("new b (close b | wait b . close z)")));
}

TEST(Process, SubstitutionAvoidsCapture) {
    Process p = parse_process("recv x(y). fwd y w");
    Process q = substitute(p, "y", "w");
    EXPECT_EQ(free_names(q), (NameSet{"x", "y"}));
    EXPECT_FALSE(alpha_eq(q, parse_process("recv x(y). fwd y y")));
    EXPECT_TRUE(alpha_eq(q, parse_process("recv x(k). fwd k y")));
}

TEST(Process, FreshName) {
    EXPECT_EQ(fresh_name("x", {"y"}), "x");
    EXPECT_EQ(fresh_name("x", {"x"}), "x_1");
    EXPECT_EQ(fresh_name("x_1", {"x", "x_1"}), "x_2");
}

TEST(Process, Barendregt) {
    Process p = parse_process("recv x(y). recv y(y). close y");
    Process b = barendregt(p);
    EXPECT_TRUE(alpha_eq(p, b));
    EXPECT_EQ(bound_names(b).size(), 2u);
}

TEST(Judgment, ContextsCompareAsSets) {
    Context a{{"x", Type::one()}, {"y", Type::bot()}};
    Context b{{"y", Type::bot()}, {"x", Type::one()}};
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a.add("x", Type::bot()));
    EXPECT_FALSE(merge(a, b).has_value());
    EXPECT_EQ(merge(a, Context{{"z", Type::one()}})->size(), 3u);
    EXPECT_EQ(*a.dualized().find("x"), Type::bot());
}

TEST(Judgment, WellFormedness) {
    Judgment ok = parse_judgment(". ; x:1 |- wait x . close z :: z:1");
    EXPECT_EQ(judgment_problem(ok), "");
    Judgment dup = Judgment::ull({}, {{"x", Type::one()}}, parse_process("close x"), {{"x", Type::one()}});
    EXPECT_NE(judgment_problem(dup), "");
    EXPECT_EQ(ok.r_degree(), 1u);
}

TEST(Judgment, SystemNames) {
    for (System s : {System::ULL, System::ULLM, System::ILL, System::CLL})
        EXPECT_EQ(parse_system(system_name(s)), s);
    EXPECT_FALSE(parse_system("cp").has_value());
}
