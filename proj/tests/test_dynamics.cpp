#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/dynamics.hpp"
#include "sessionforge/syntax.hpp"

using namespace sf;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(SF_CORPUS) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RedexCase {
    const char* file;
    const char* rule;
    const char* reduct;  // worked out by hand from the reduction rules
};

const RedexCase kRedexes[] = {
    {"beta_close", "betaClose", "close z"},
    {"beta_id", "betaId", "wait y . close z"},
    {"beta_sel", "betaSel", "new x:1 (close x | wait x . close z)"},
    {"beta_send", "betaSend", "new x:1 (close x | new y:1 (close y | wait y . wait x . close z))"},
    {"beta_serv", "betaServ", "new u:!1 (serv u(y). close y | new w:1 (close w | wait w . close z))"},
    {"beta_weaken", "betaWeaken", "close z"},
    {"kappa_close", "kappaClose", "wait w . new x:1 (close x | wait x . close z)"},
    {"kappa_send_r", "kappaSendR", "send w(y).(close y | new x:1 (close x | wait x . close w))"},
    {"kappa_send_l", "kappaSendL", "send w(y).(new x:1 (close x | wait x . close y) | close w)"},
    {"kappa_recv", "kappaRecv", "recv w(y). new x:1 (close x | wait y . wait x . close w)"},
    {"kappa_sel", "kappaSel", "w << a . new x:1 (close x | wait x . close w)"},
    {"kappa_bra", "kappaBra",
     "w >> {a: new x:1 (close x | wait x . close w), b: new x:1 (close x | wait x . close w)}"},
    {"kappa_copy", "kappaCopy", "send u(y). new x:1 (close x | wait x . wait y . close z)"},
    {"kappa_send_both", "kappaSendBoth",
     "send x(z).(new u:!1 (serv u(v). close v | send u(a). wait a . close z) | "
     "new u:!1 (serv u(v). close v | send u(b). wait b . close x))"},
};

// Compares up to renaming and up to the orientation of cuts.
bool same_up_to_symm(const Process& a, const Process& b) {
    if (alpha_eq(a, b)) return true;
    auto via = congruent(a, b, 3);
    return via.has_value();
}

}  // namespace

TEST(Step, CorpusRedexes) {
    for (const auto& c : kRedexes) {
        Process p = parse_process(read(std::string(c.file) + ".spi"));
        auto steps = step(p);
        ASSERT_FALSE(steps.empty()) << c.file;
        bool found = false;
        for (const auto& s : steps)
            if (step_rule_name(s.label.rule) == c.rule && s.label.position.empty()) {
                found = true;
                Process want = parse_process(c.reduct);
                EXPECT_TRUE(same_up_to_symm(s.result, want))
                    << c.file << ": got " << print_process(s.result) << ", want " << print_process(want);
            }
        EXPECT_TRUE(found) << c.file << " has no " << c.rule << " step at the root";
    }
}

TEST(Step, NormalFormsDoNotStep) {
    EXPECT_TRUE(step(parse_process("close z")).empty());
    EXPECT_TRUE(step(parse_process("recv x(y). wait y . close x")).empty());
    EXPECT_TRUE(step(parse_process("close x | close y")).empty());
}

TEST(Step, NoReductionUnderPrefix) {
    EXPECT_TRUE(step(parse_process("wait w . new x:1 (close x | wait x . close z)")).empty());
}

TEST(Step, ReductionInsideCut) {
    Process p = parse_process("new y:1 (close y | new x:1 (close x | wait x . wait y . close z))");
    bool inner = false;
    for (const auto& s : step(p))
        if (s.label.rule == StepRule::BetaClose) {
            inner = true;
            EXPECT_EQ(s.label.position, (NodePath{0, 1}));
            EXPECT_TRUE(alpha_eq(s.result, parse_process("new y:1 (close y | wait y . close z)")));
        }
    EXPECT_TRUE(inner);
}

TEST(Congruence, Axioms) {
    Process p = parse_process("new x:1 (close x | wait x . close z)");
    auto ims = congruence_axioms(p);
    bool symm = false;
    for (const auto& [ax, q] : ims)
        if (ax == CongAxiom::CutSymm) {
            symm = true;
            EXPECT_TRUE(alpha_eq(q, parse_process("new x:bot (wait x . close z | close x)")));
        }
    EXPECT_TRUE(symm);
    EXPECT_EQ(axiom_name(CongAxiom::CutAssocL), "cutAssocL");
}

TEST(Congruence, SearchFindsAssociativity) {
    Process a = parse_process("new x:1 (close x | new y:1 (close y | wait x . wait y . close z))");
    Process b = parse_process("new y:1 (close y | new x:1 (close x | wait x . wait y . close z))");
    auto path = congruent(a, b, 4);
    ASSERT_TRUE(path.has_value());
    EXPECT_FALSE(path->empty());
    EXPECT_FALSE(congruent(a, parse_process("close z"), 3).has_value());
}

TEST(Run, ClosedCorpusDerivation) {
    Derivation d = parse_derivation(read("closed.deriv.json"));
    RunResult r = run_closed(d, 50);
    EXPECT_TRUE(alpha_eq(r.terminal, Process::close("z")));
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].label.rule, StepRule::BetaClose);
    EXPECT_EQ(r.states.size(), 1u);
    std::string j = trace_jsonl(r);
    EXPECT_NE(j.find("betaClose"), std::string::npos);
    EXPECT_EQ(std::count(j.begin(), j.end(), '\n'), 1);
}

TEST(Run, FuelExhausted) {
    Derivation d = parse_derivation(read("closed.deriv.json"));
    EXPECT_THROW(run_closed(d, 0), FuelExhausted);
}

TEST(Run, FindRedexFollowsCut) {
    Derivation d = parse_derivation(read("closed.deriv.json"));
    Step s = find_redex(d);
    EXPECT_EQ(s.label.rule, StepRule::BetaClose);
    Derivation leaf = d.premises[0];
    EXPECT_ANY_THROW(find_redex(leaf));
}

TEST(AlphaKey, EqualIffAlphaEqual) {
    Process a = parse_process("recv x(y). send y(z).(close z | close x)");
    Process b = parse_process("recv x(k). send k(m).(close m | close x)");
    Process c = parse_process("recv x(k). send k(m).(close x | close m)");
    EXPECT_EQ(alpha_key(a), alpha_key(b));
    EXPECT_NE(alpha_key(a), alpha_key(c));
}
