#include "stateprio/parser.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace stateprio;
using stateprio::testing::load_net;

TEST(Parser, ReadsBundledModels)
{
    Network n1 = load_net("n1.net");
    EXPECT_EQ(n1.name(), "N1");
    EXPECT_EQ(n1.automaton(0).edges.size(), 5u);
    EXPECT_EQ(n1.automaton(1).edges.size(), 6u);
    EXPECT_EQ(n1.vars().at(0).init, Value::integer(1));
    StateFormula q = stateprio::testing::load_query("n1.q", n1);
    ASSERT_EQ(q.literals.size(), 2u);
    EXPECT_EQ(q.literals[1], (Literal{"A1", "5", false}));
}

TEST(Parser, PrintRoundTrip)
{
    for (const char* f : {"n1.net", "n2.net"}) {
        Network n = load_net(f);
        EXPECT_EQ(parse_network(print_network(n)), n) << f;
    }
    Network r = parse_network(
        "network R { real r = 1.5; bool b = false; automaton A { init s; locations s, t; "
        "edge s -> t on go when !b && r < 2 do r := r * 2, b := true; } }");
    EXPECT_EQ(parse_network(print_network(r)), r);
}

TEST(Parser, SyntaxErrorHasPosition)
{
    try {
        parse_network("network N {\n  automaton A {\n    init 1\n  }\n}", "bad.net");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        ASSERT_FALSE(e.diagnostics().empty());
        EXPECT_EQ(e.diagnostics()[0].span.file, "bad.net");
        EXPECT_GE(e.diagnostics()[0].span.line, 3);
    }
}

TEST(Parser, ValidationErrorsAreCollected)
{
    try {
        parse_network("network N { automaton A { init 9; locations 1; edge 1 -> 2 on a do y := 1; } }");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GE(e.diagnostics().size(), 3u);
    }
}

TEST(Parser, QueryLiterals)
{
    Network n1 = load_net("n1.net");
    StateFormula q = parse_query("EF (A0.5 && !A1.3)", n1);
    ASSERT_EQ(q.literals.size(), 2u);
    EXPECT_TRUE(q.literals[1].negated);
    EXPECT_THROW(parse_query("EF (A0.9)", n1), ParseError);
    EXPECT_THROW(parse_query("AG (A0.1)", n1), ParseError);
}

TEST(Parser, ExpressionPrecedence)
{
    EXPECT_EQ(to_string(parse_expr("1 + 2 * x")), "1 + 2 * x");
    EXPECT_EQ(parse_expr("a || b && c"), parse_expr("a || (b && c)"));
    EXPECT_EQ(parse_expr("-(x)"), Expr::unary(Op::Neg, Expr::var("x")));
}
