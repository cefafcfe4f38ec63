#include "stateprio/error.hpp"
#include "stateprio/parser.hpp"
#include "stateprio/semantics.hpp"
#include "stateprio/solver.hpp"
#include "stateprio/synthesis.hpp"
#include "stateprio/transform.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace stateprio;
using stateprio::testing::load_net;
using stateprio::testing::load_query;

namespace {

struct Key {
    std::map<std::string, std::string> loc;
    std::map<std::string, Value> var;
    Priority prio;
    friend bool operator<(const Key& a, const Key& b)
    {
        if (a.loc != b.loc)
            return a.loc < b.loc;
        if (a.var != b.var)
            return std::lexicographical_compare(a.var.begin(), a.var.end(), b.var.begin(), b.var.end());
        return a.prio < b.prio;
    }
    friend bool operator==(const Key& a, const Key& b) { return !(a < b) && !(b < a); }
};

std::set<Key> keys(const std::vector<StatefulPriority>& sp)
{
    std::set<Key> out;
    for (const auto& p : sp)
        out.insert({p.pre.loc, p.pre.var, p.prio});
    return out;
}

SynthesisOptions opts(int max)
{
    SynthesisOptions o;
    o.max = max;
    return o;
}

Configuration snap(std::map<std::string, std::string> loc)
{
    Configuration c;
    c.loc = std::move(loc);
    return c;
}

} // namespace

TEST(Synthesis, N1Priorities)
{
    Network n1 = load_net("n1.net");
    SynthesisReport r = synthesize(n1, load_query("n1.q", n1), opts(15));
    ASSERT_EQ(r.outcome, Outcome::PrioritiesFound);
    std::set<Key> want{{{{"A0", "4"}, {"A1", "5"}}, {{"x", Value::integer(0)}}, {"a", "d"}},
        {{{"A0", "5"}, {"A1", "4"}}, {{"x", Value::integer(0)}}, {"c", "b"}}};
    EXPECT_EQ(keys(r.stateful), want);
    EXPECT_GT(r.stats.solver_calls, 0);
}

TEST(Synthesis, N2Priorities)
{
    Network n2 = load_net("n2.net");
    SynthesisReport r = synthesize(n2, load_query("n2.q", n2), opts(15));
    ASSERT_EQ(r.outcome, Outcome::PrioritiesFound);
    std::set<Key> want{{{{"A0", "1"}, {"A1", "2"}}, {}, {"a", "b"}}, {{{"A0", "2"}, {"A1", "1"}}, {}, {"b", "a"}},
        {{{"A0", "2"}, {"A1", "1"}}, {}, {"c", "a"}}};
    EXPECT_EQ(keys(r.stateful), want);
}

TEST(Synthesis, UnreachableAndInitialOutcomes)
{
    Network net = parse_network("network U { automaton A { init 0; locations 0, 1, 2; edge 0 -> 1 on go; edge 1 -> 0 on back; } }");
    EXPECT_EQ(synthesize(net, parse_query("EF (A.2)", net), opts(4)).outcome, Outcome::ErrorUnreachable);
    EXPECT_EQ(synthesize(net, parse_query("EF (A.0)", net), opts(4)).outcome, Outcome::InitialIsError);
    EXPECT_THROW(synthesize(net, parse_query("EF (A.2)", net), opts(0)), SynthesisError);
}

TEST(Synthesis, UnavoidableErrorIsNotMaskedByPriorities)
{
    // the only way forward hits the error: nothing can block it
    Network net = parse_network("network F { automaton A { init 0; locations 0, 1; edge 0 -> 1 on go; } }");
    SynthesisReport r = synthesize(net, parse_query("EF (A.1)", net), opts(4));
    EXPECT_NE(r.outcome, Outcome::PrioritiesFound);
    EXPECT_TRUE(r.stateful.empty());
}

TEST(Synthesis, ErrorActionsAndCreatePrio)
{
    Network n2 = load_net("n2.net");
    std::vector<Configuration> errors{snap({{"A0", "2"}, {"A1", "2"}})};
    Configuration pre = snap({{"A0", "2"}, {"A1", "1"}});
    EXPECT_EQ(error_actions(n2, pre, errors), (std::vector<std::string>{"b", "c"}));

    Configuration avoid;
    avoid.act = {{"a", true}, {"b", false}, {"c", false}};
    EXPECT_EQ(create_prio(n2, pre, avoid, errors), (Priority{"b", "a"}));
    avoid.act = {{"a", false}, {"b", true}, {"c", false}};
    EXPECT_EQ(create_prio(n2, pre, avoid, errors), (Priority{"c", "b"}));
    Configuration only_a = snap({{"A0", "1"}, {"A1", "2"}});
    avoid.act = {{"a", true}, {"b", false}, {"c", false}};
    EXPECT_THROW(create_prio(n2, only_a, avoid, errors), SynthesisError); // would be (a, a)
    EXPECT_THROW(create_prio(n2, snap({{"A0", "1"}, {"A1", "1"}}), avoid, errors), SynthesisError);
}

TEST(Synthesis, CircularityDetection)
{
    Configuration pre = snap({{"A0", "2"}, {"A1", "1"}});
    std::vector<StatefulPriority> sp{{pre, {"b", "a"}}};
    EXPECT_TRUE(check_circular(sp, {pre, {"a", "b"}}));
    EXPECT_FALSE(check_circular(sp, {pre, {"c", "a"}}));
    EXPECT_FALSE(check_circular(sp, {snap({{"A0", "1"}, {"A1", "1"}}), {"a", "b"}}));
}

TEST(Synthesis, ModelsSeenBySynthesisPassTheAudit)
{
    Network n1 = load_net("n1.net");
    std::size_t seen = 0;
    std::vector<std::string> problems;
    SynthesisOptions o = opts(15);
    o.on_model = [&](const Encoder& enc, const SolverModel& m) {
        ++seen;
        for (auto& p : audit_model(enc, m))
            problems.push_back(std::move(p));
    };
    synthesize(n1, load_query("n1.q", n1), o);
    EXPECT_GT(seen, 0u);
    EXPECT_TRUE(problems.empty()) << problems.front();
}

// Reach of the transformed network, projected, is contained in Reach(N) and
// avoids the error.
TEST(Synthesis, TransformedNetworkRefinesAndAvoidsError)
{
    for (const char* name : {"n1", "n2"}) {
        Network net = load_net(std::string(name) + ".net");
        StateFormula f = load_query(std::string(name) + ".q", net);
        SynthesisReport r = synthesize(net, f, opts(15));
        ASSERT_EQ(r.outcome, Outcome::PrioritiesFound);
        Network rho = transform_network(net, r.stateful).transformed;
        DomainBounds b = DomainBounds::uniform(-16, 16);
        ReachResult orig = bfs_reach(net, -1, b);
        ReachResult tr = bfs_reach(rho, -1, b);
        ASSERT_EQ(tr.pruned, 0u) << name;
        for (const auto& s : tr.states) {
            State p = project(rho, s);
            EXPECT_TRUE(orig.contains(p)) << name << " " << format_state(net, p);
            EXPECT_FALSE(state_satisfies(net, p, f)) << name << " " << format_state(net, p);
        }
    }
}

TEST(Synthesis, ReachabilityBoundOnN2)
{
    Network n2 = load_net("n2.net");
    SynthesisReport r = synthesize(n2, load_query("n2.q", n2), opts(15));
    auto bound = reachability_bound(n2, r);
    ASSERT_TRUE(bound);
    EXPECT_EQ(*bound, 3);
    Network rho = transform_network(n2, r.stateful).transformed;
    std::set<State> projected;
    for (const auto& s : bfs_reach(rho, -1).states)
        projected.insert(project(rho, s));
    EXPECT_LE(static_cast<std::int64_t>(projected.size()), *bound);
}
