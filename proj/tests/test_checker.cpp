#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sessionforge/checker.hpp"
#include "sessionforge/derivation_io.hpp"
#include "sessionforge/syntax.hpp"

using namespace sf;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(SF_CORPUS) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool typable(const Judgment& j, const CheckerConfig& cc = {}, InferenceBudget b = {}) {
    return std::holds_alternative<Derivation>(infer(j, b, cc));
}

}  // namespace

TEST(RuleTables, Sizes) {
    EXPECT_EQ(rule_table(System::ULL).size(), 30u);
    EXPECT_EQ(rule_table(System::ULLM).size(), 20u);
    EXPECT_EQ(rule_table(System::ILL).size(), 18u);
    EXPECT_EQ(rule_table(System::CLL).size(), 13u);
    EXPECT_EQ(rule_table(System::ULL, Extension::Mix).size(), 32u);
    EXPECT_EQ(rule_table(System::CLL, Extension::Mix).size(), 15u);
    std::size_t star = 0;
    for (const auto& r : rule_table(System::ULL)) star += r.star;
    EXPECT_EQ(star, 18u);
}

TEST(RuleTables, IllNamesMapOntoStarRules) {
    for (const auto& r : rule_table(System::ILL)) {
        std::string u = ill_to_ull_rule(r.name);
        ASSERT_NE(find_rule(System::ULL, u), nullptr) << r.name;
        EXPECT_TRUE(is_star_rule(u)) << u;
        EXPECT_EQ(ull_to_ill_rule(u), r.name);
    }
    EXPECT_FALSE(ull_to_ill_rule("parR").has_value());
}

TEST(Check, CorpusDerivationsAreValid) {
    for (const char* f :
         {"server_witness.deriv.json", "server_witness_lolli.deriv.json", "server_witness_tensor.deriv.json", "closed.deriv.json", "empty_send.deriv.json"}) {
        Derivation d = parse_derivation(read(f));
        auto r = check_derivation(d);
        EXPECT_TRUE(r.ok) << f << ": " << r.message();
    }
}

TEST(Check, ReportsFailingNode) {
    Derivation d = parse_derivation(read("closed.deriv.json"));
    ASSERT_EQ(d.premises.size(), 2u);
    d.premises[1].conclusion.lambda = Context{{"z", Type::bot()}};
    auto r = check_derivation(d);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.explanation.empty());

    Derivation e = parse_derivation(read("server_witness.deriv.json"));
    e.rule = "-oR";
    EXPECT_FALSE(check_derivation(e).ok);
}

TEST(Check, CutAnnotationIsTheLeftType) {
    Derivation d = parse_derivation(read("closed.deriv.json"));
    EXPECT_EQ(d.rule, "cutRL");
    d.conclusion.process = parse_process("new x:bot (close x | wait x . close z)");
    EXPECT_FALSE(check_derivation(d).ok);
}

TEST(Infer, CorpusJudgments) {
    for (const char* f : {"server_witness_right.jdg", "server_witness_left.jdg", "closed.jdg", "empty_send.jdg", "locality_server.jdg"})
        EXPECT_TRUE(typable(parse_judgment(read(f)))) << f;
}

TEST(Infer, ResultsCheck) {
    Judgment j = parse_judgment(read("locality_server.jdg"));
    auto r = infer(j);
    ASSERT_TRUE(std::holds_alternative<Derivation>(r));
    const auto& d = std::get<Derivation>(r);
    EXPECT_TRUE(check_derivation(d).ok);
    EXPECT_TRUE(same_judgment(d.conclusion, j));
}

TEST(Infer, NegativeAnswers) {
    EXPECT_FALSE(typable(parse_judgment(". ; x:1 |- close x :: .")));
    EXPECT_FALSE(typable(parse_judgment(". ; . |- close x :: x:bot")));
    // x used twice linearly
    EXPECT_FALSE(typable(parse_judgment(". ; x:1 |- wait x . wait x . close z :: z:1")));
}

TEST(Infer, AnnotationRequired) {
    // no annotation and no type anywhere in the goal
    auto r = infer(parse_judgment(". ; . |- new x (close x | wait x . close x) :: ."));
    ASSERT_TRUE(std::holds_alternative<AnnotationRequired>(r));
    EXPECT_EQ(std::get<AnnotationRequired>(r).restriction, "x");
    // otherwise cut types come from the goal
    Judgment j = parse_judgment(". ; . |- new x (close x | wait x . close z) :: z:1");
    EXPECT_TRUE(typable(j));
    Judgment k = parse_judgment(
        ". ; . |- new x (send x(y).(close y | close x) | recv x(y). wait y . wait x . close z) :: z:1");
    EXPECT_FALSE(typable(k));
    InferenceBudget b;
    b.universe = {Type::one(), Type::tensor(Type::one(), Type::one())};
    EXPECT_TRUE(typable(k, {}, b));
}

TEST(Infer, IntuitionisticRejectsRightPar) {
    EXPECT_THROW(parse_judgment(". ; . |-i recv x(y). serv y(z). close z :: x:?bot -o ?bot"), SyntaxError);
    Judgment i = parse_judgment(". ; x:1 * 1 |-i recv x(y). wait x . wait y . close z :: z:1");
    EXPECT_TRUE(typable(i));
    i.lambda = Context{{"z", Type::one()}, {"w", Type::one()}};
    EXPECT_FALSE(typable(i));
    Judgment c = parse_judgment("recv x(y). serv y(z). close z |-c . ; x:?bot -o ?bot");
    EXPECT_TRUE(typable(c));
}

TEST(Infer, MixOnlyWithExtension) {
    Judgment par = parse_judgment(". ; . |- close x | close y :: x:1, y:1");
    Judgment nil = parse_judgment(". ; . |- 0 :: .");
    EXPECT_FALSE(typable(par));
    EXPECT_FALSE(typable(nil));
    CheckerConfig mix = set_extension(Extension::Mix);
    EXPECT_TRUE(typable(par, mix));
    EXPECT_TRUE(typable(nil, mix));
}

TEST(Infer, EveryDerivationIsDistinct) {
    Judgment j = parse_judgment(read("server_witness_right.jdg"));
    auto ds = infer_every(j, {});
    ASSERT_EQ(ds.size(), 2u);  // parR and -oR
    EXPECT_FALSE(same_tree(ds[0], ds[1]));
    for (const auto& d : ds) EXPECT_TRUE(check_derivation(d).ok);
}

TEST(Infer, BudgetExhaustionIsReported) {
    Judgment j = parse_judgment(read("locality_server.jdg"));
    InferenceBudget b;
    b.max_steps = 3;
    auto r = infer(j, b);
    ASSERT_TRUE(std::holds_alternative<NotFound>(r));
    EXPECT_TRUE(std::get<NotFound>(r).budget_exhausted);
}

TEST(Infer, HarvestIsClosedUnderDuality) {
    auto ts = harvest_types(parse_process("new x:1 * !1 (close x | wait x . close z)"));
    for (const auto& t : ts) EXPECT_NE(std::find(ts.begin(), ts.end(), dual(t)), ts.end()) << print_type(t);
}

TEST(CycleExtension, PredicateDefaultsToReject) {
    CheckerConfig c = set_extension(Extension::MixCycle);
    EXPECT_FALSE(c.cycle_phi(Judgment{}, "x", "y"));
}
