#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/syntax.hpp"
#include "sessionforge/transform.hpp"

using namespace sf;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(SF_CORPUS) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Derivation load(const std::string& name) { return parse_derivation(read(name)); }

bool has_rule(const Derivation& d, const std::string& r) {
    bool hit = false;
    visit(d, [&](const Derivation& n, const NodePath&) { hit = hit || n.rule == r; });
    return hit;
}

}  // namespace

TEST(Classical, ServerWitnessImages) {
    Judgment want = parse_judgment("recv x(y). serv y(z). close z |-c . ; x:?bot -o ?bot");
    for (const char* f : {"server_witness.deriv.json", "server_witness_lolli.deriv.json", "server_witness_tensor.deriv.json"}) {
        Derivation c = to_classical(load(f));
        EXPECT_EQ(c.system(), System::CLL);
        auto r = check_derivation(c);
        EXPECT_TRUE(r.ok) << f << ": " << r.message();
        EXPECT_TRUE(same_judgment(c.conclusion, want)) << f << ": " << print_judgment(c.conclusion);
    }
}

TEST(United, ServerWitnessRoundTrip) {
    Derivation c = to_classical(load("server_witness_tensor.deriv.json"));
    Derivation u = to_united(c);
    EXPECT_EQ(u.system(), System::ULL);
    EXPECT_TRUE(check_derivation(u).ok);
    EXPECT_TRUE(same_judgment(u.conclusion, parse_judgment(read("server_witness_right.jdg"))));
    Derivation m = to_united_moves(c);
    EXPECT_EQ(m.system(), System::ULLM);
    EXPECT_TRUE(check_derivation(m).ok);
}

TEST(United, ClosedRoundTrip) {
    Derivation d = load("closed.deriv.json");
    Derivation u = to_united(to_classical(d));
    EXPECT_TRUE(check_derivation(u).ok);
    EXPECT_TRUE(same_judgment(u.conclusion, d.conclusion));
}

TEST(StarElimination, NonStarRulesDisappear) {
    Derivation d = load("server_witness.deriv.json");  // uses parR
    Derivation n = eliminate_nonstar(d);
    EXPECT_EQ(n.system(), System::ULLM);
    EXPECT_TRUE(check_derivation(n).ok);
    EXPECT_FALSE(has_rule(n, "parR"));
    EXPECT_TRUE(same_sequent(n.conclusion, d.conclusion));
}

TEST(StarElimination, MovesDisappear) {
    Derivation d = load("server_witness.deriv.json");
    Derivation m = eliminate_moves(eliminate_nonstar(d));
    EXPECT_EQ(m.system(), System::ULL);
    EXPECT_TRUE(check_derivation(m).ok);
    EXPECT_FALSE(has_rule(m, "moveL"));
    EXPECT_FALSE(has_rule(m, "moveR"));
    EXPECT_TRUE(same_judgment(m.conclusion, d.conclusion));
}

TEST(StarElimination, ForwarderWithBothEndsOnTheRight) {
    // fwd x y with x and y both on the right has no vanilla derivation
    Judgment j = parse_judgment(". ; . |- fwd x y :: x:1, y:bot");
    j.system = System::ULLM;
    Derivation leaf{"idR", parse_judgment(". ; x:bot |- fwd x y :: y:bot"), {}};
    leaf.conclusion.system = System::ULLM;
    Derivation mv{"moveR", j, {leaf}};
    ASSERT_TRUE(check_derivation(mv).ok) << check_derivation(mv).message();
    try {
        eliminate_moves(mv);
        FAIL() << "expected MoveNotEliminable";
    } catch (const MoveNotEliminable& e) {
        EXPECT_EQ(e.endpoints, (NameSet{"x", "y"}));
    }
}

TEST(Fragment, ServerWitnessIsOutside) {
    FragmentReport r = fragment_report(load("server_witness.deriv.json"));
    EXPECT_EQ(r.max_r_degree, 2u);
    EXPECT_FALSE(r.ill_member);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NE(report_json(r).find("\"max_r_degree\": 2"), std::string::npos);
    EXPECT_TRUE(std::holds_alternative<NotInFragment>(to_intuitionistic(load("server_witness.deriv.json"))));
}

TEST(Fragment, ClosedIsInside) {
    Derivation d = load("closed.deriv.json");
    FragmentReport r = fragment_report(d);
    EXPECT_TRUE(r.ill_member) << r.reason;
    EXPECT_EQ(r.max_r_degree, 1u);
    auto t = to_intuitionistic(d);
    ASSERT_TRUE(std::holds_alternative<Derivation>(t));
    const Derivation& i = std::get<Derivation>(t);
    EXPECT_EQ(i.system(), System::ILL);
    EXPECT_TRUE(check_derivation(i).ok);
    EXPECT_TRUE(same_tree(from_intuitionistic(i), d));
}

TEST(Fragment, BotTypesAreOutside) {
    Derivation d = load("empty_send.deriv.json");
    FragmentReport r = fragment_report(d);
    EXPECT_FALSE(r.ill_member);
}

TEST(Locality, WitnessesFire) {
    auto s = locality_diagnose(parse_process(read("server_witness.spi")));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].kind, DiagnosticKind::NonLocalServer);
    EXPECT_EQ(s[0].name, "y");
    auto e = locality_diagnose(parse_process(read("empty_send.spi")));
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].kind, DiagnosticKind::NonLocalEmptySend);
    EXPECT_EQ(e[0].name, "y");
    EXPECT_EQ(diagnostic_kind_name(DiagnosticKind::NonLocalServer), "NonLocalServer");
}

TEST(Locality, LocalUsesAreSilent) {
    EXPECT_TRUE(locality_diagnose(parse_process("recv x(y). wait y . close x")).empty());
    EXPECT_TRUE(locality_diagnose(parse_process("serv u(y). close y")).empty());
    EXPECT_TRUE(locality_diagnose(parse_process(read("kappa_send_both.spi"))).empty());
}
