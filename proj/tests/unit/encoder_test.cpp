#include "stateprio/encoder.hpp"
#include "stateprio/error.hpp"
#include "stateprio/parser.hpp"
#include "stateprio/semantics.hpp"
#include "stateprio/solver.hpp"
#include "generators.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stateprio;
using stateprio::testing::load_net;

namespace {

SolverVerdict check(const Encoder& enc, std::vector<smt::Term> extra)
{
    return solve(emit_script(enc.unfolding().with(std::move(extra))), SolverConfig::from_env());
}

// Smallest depth at which `c` holds, by the unfolding.
int first_depth(const Encoder& enc, const Configuration& c)
{
    for (int d = 0; d <= enc.bound(); ++d)
        if (check(enc, {enc.preerror(d, c)}).status == SolverStatus::Sat)
            return d;
    return -1;
}

} // namespace

TEST(Encoder, DeclarationsForN1)
{
    Encoder enc(load_net("n1.net"), 1);
    // 5 actions, 2 automata, 1 variable at steps 0 and 1
    EXPECT_EQ(enc.unfolding().decls.size(), 16u);
    EXPECT_EQ(enc.unfolding().logic, "QF_LIA");
    EXPECT_EQ(enc.shared_written(), (std::set<std::string>{"x"}));
    EXPECT_EQ(enc.writers("x"), (std::set<std::size_t>{0, 1}));
    std::string script = emit_script(enc.unfolding());
    EXPECT_NE(script.find("(declare-const x__1 Int)"), std::string::npos);
    EXPECT_NE(script.find("(declare-const e__0 Bool)"), std::string::npos);
    EXPECT_NE(script.find("(check-sat)"), std::string::npos);
}

TEST(Encoder, RejectsBadInput)
{
    Network n1 = load_net("n1.net");
    EXPECT_THROW(Encoder(n1, 0), EncodingError);
    Encoder enc(n1, 2);
    EXPECT_THROW(enc.progress(2), EncodingError);
    EXPECT_THROW(enc.preerror(3, Configuration{}), EncodingError);
    EXPECT_THROW(enc.preerror(1, Configuration{}), EncodingError); // empty snapshot
    Configuration bad;
    bad.loc["A0"] = "9";
    EXPECT_THROW(enc.preerror(0, bad), EncodingError);
}

TEST(Encoder, RealVariablesSelectMixedLogic)
{
    Network net = parse_network("network R { real r = 0.5; automaton A { init 0; locations 0; edge 0 -> 0 on t do r := r + 1; } }");
    EXPECT_EQ(Encoder(net, 1).unfolding().logic, "QF_LIRA");
}

TEST(Encoder, N1ErrorFirstReachableAtThree)
{
    Network n1 = load_net("n1.net");
    Encoder enc(n1, 4);
    Configuration err = formula_to_config(n1, stateprio::testing::load_query("n1.q", n1));
    EXPECT_EQ(first_depth(enc, err), 3);
}

TEST(Encoder, ModelsRespectMutualExclusionAndIdleFraming)
{
    Network n1 = load_net("n1.net");
    Encoder enc(n1, 4);
    auto v = check(enc, {enc.progress(3)});
    ASSERT_EQ(v.status, SolverStatus::Sat);
    EXPECT_TRUE(audit_model(enc, *v.model).empty());
}

TEST(Encoder, TerminalStepHasNoAction)
{
    Network n2 = load_net("n2.net");
    Encoder enc(n2, 2);
    EXPECT_EQ(check(enc, {enc.action_at("a", 2)}).status, SolverStatus::Unsat);
    EXPECT_EQ(check(enc, {enc.action_at("a", 1)}).status, SolverStatus::Sat);
    EXPECT_EQ(check(enc, {enc.action_at("a", 0), enc.action_at("b", 0)}).status, SolverStatus::Unsat);
}

TEST(Encoder, BroadcastChainsIntermediateValues)
{
    Network net = parse_network("network B { int x = 1; "
                                "automaton P { init 0; locations 0, 1; edge 0 -> 1 on s do x := x + 1; } "
                                "automaton Q { init 0; locations 0, 1; edge 0 -> 1 on s do x := x * 3; } }");
    Encoder enc(net, 1);
    std::size_t intermediate = 0;
    for (const auto& d : enc.unfolding().decls)
        intermediate += d.kind == StepVar::Kind::Intermediate;
    EXPECT_EQ(intermediate, 1u);
    auto v = check(enc, {enc.action_at("s", 0)});
    ASSERT_EQ(v.status, SolverStatus::Sat);
    EXPECT_EQ(v.model->at("x__1"), Value::integer(6));
}

TEST(Encoder, ExcludedLiteralsMeanInequality)
{
    Network n2 = load_net("n2.net");
    Encoder enc(n2, 1);
    Configuration c;
    c.loc["A0"] = "1";
    c.excluded["A1"] = {"1"};
    // (1, 2) is one step away
    EXPECT_EQ(check(enc, {enc.preerror(0, c)}).status, SolverStatus::Unsat);
    EXPECT_EQ(check(enc, {enc.query(0, c)}).status, SolverStatus::Sat);
    EXPECT_EQ(check(enc, {enc.query(0, c), enc.error(0, c)}).status, SolverStatus::Unsat);
}

TEST(Encoder, AgreesWithExplicitSearchOnRandomNets)
{
    std::mt19937_64 rng(99);
    stateprio::testing::RandomNetParams p;
    for (int n = 0; n < 12; ++n) {
        Network net = stateprio::testing::random_network(rng, p);
        Encoder enc(net, 3);
        ReachResult r = bfs_reach(net, 3, DomainBounds::uniform(p.lo, p.hi));
        ASSERT_EQ(r.pruned, 0u);
        const State& target = r.states[std::uniform_int_distribution<std::size_t>(0, r.states.size() - 1)(rng)];
        EXPECT_EQ(first_depth(enc, state_to_config(net, target)), r.depth[r.index.at(target)]) << print_network(net);
    }
}
