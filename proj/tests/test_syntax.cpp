#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

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

}  // namespace

TEST(Syntax, TypePrecedence) {
    EXPECT_EQ(parse_type("1 * 1 -o bot"), Type::lolli(Type::tensor(Type::one(), Type::one()), Type::bot()));
    EXPECT_EQ(parse_type("!1 * ?bot"), Type::tensor(Type::bang(Type::one()), Type::query(Type::bot())));
    EXPECT_EQ(parse_type("&{b: 1, a: bot}"), Type::with({{"a", Type::bot()}, {"b", Type::one()}}));
}

TEST(Syntax, TypeRoundTrip) {
    for (const char* s : {"1", "bot", "1 * bot", "(1 -o bot) -o 1", "!?1", "+{a:1, b:&{c:bot}}", "1 -o 1 -o 1"}) {
        Type t = parse_type(s);
        EXPECT_EQ(parse_type(print_type(t)), t) << s;
    }
}

TEST(Syntax, ProcessForms) {
    EXPECT_TRUE(parse_process("0").is(ProcKind::Inact));
    EXPECT_TRUE(parse_process("fwd x y").is(ProcKind::Forward));
    Process s = parse_process("send x(y).(close y | close x)");
    EXPECT_TRUE(s.bound_send());
    EXPECT_TRUE(parse_process("send u(y). close y").copy_send());
    Process b = parse_process("x >> {a: close x, b: close x}");
    EXPECT_EQ(b.arms().size(), 2u);
    Process c = parse_process("new x:1 (close x | wait x . close z)");
    EXPECT_TRUE(c.is_cut());
    EXPECT_EQ(*c.ann(), Type::one());
}

TEST(Syntax, CorpusProcessesRoundTrip) {
    for (const char* f : {"server_witness.spi", "empty_send.spi", "locality_server.spi", "beta_serv.spi", "kappa_bra.spi",
                          "kappa_send_both.spi"}) {
        std::string text = read(f);
        Process p = parse_process(text, f);
        EXPECT_TRUE(alpha_eq(parse_process(print_process(p)), p)) << f;
    }
}

TEST(Syntax, JudgmentForms) {
    Judgment u = parse_judgment(read("server_witness_right.jdg"));
    EXPECT_EQ(u.system, System::ULL);
    EXPECT_EQ(u.lambda.size(), 1u);
    Judgment c = parse_judgment("recv x(y). wait x . close y |-c . ; x:1 par bot");
    EXPECT_EQ(c.system, System::CLL);
    EXPECT_TRUE(c.lambda.empty());
    Judgment i = parse_judgment(". ; x:1 |-i wait x . close z :: z:1");
    EXPECT_EQ(i.system, System::ILL);
    EXPECT_TRUE(same_judgment(parse_judgment(print_judgment(i)), i));
}

TEST(Syntax, ErrorsCarryPositions) {
    try {
        parse_process("recv x(y).\n  send y(z).(close z | )", "f.spi");
        FAIL() << "no error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.span().file, "f.spi");
        EXPECT_EQ(e.span().start.line, 2);
        EXPECT_GT(e.span().start.col, 1);
    }
    EXPECT_THROW(parse_type("1 * "), SyntaxError);
    EXPECT_THROW(parse_type("+{a:1, a:bot}"), SyntaxError);
    EXPECT_THROW(parse_judgment(". ; . |- close x"), SyntaxError);
}

TEST(DerivationIo, CorpusFilesAreFixedPoints) {
    for (const char* f :
         {"server_witness.deriv.json", "server_witness_lolli.deriv.json", "server_witness_tensor.deriv.json", "closed.deriv.json", "empty_send.deriv.json"}) {
        std::string text = read(f);
        EXPECT_EQ(print_derivation(parse_derivation(text)), text) << f;
    }
}

TEST(DerivationIo, RejectsMalformed) {
    EXPECT_ANY_THROW(parse_derivation("{\"format\":\"deriv-v2\"}"));
    EXPECT_ANY_THROW(parse_derivation("not json"));
    std::string t = read("closed.deriv.json");
    auto pos = t.find("cutRL");
    ASSERT_NE(pos, std::string::npos);
    t.replace(pos, 5, "cutZZ");
    EXPECT_ANY_THROW(parse_derivation(t));
}
