#include "stateprio/error.hpp"
#include "stateprio/report.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

using namespace stateprio;
using stateprio::testing::load_net;
using nlohmann::json;

namespace {

std::vector<StatefulPriority> sample()
{
    StatefulPriority p;
    p.pre.loc = {{"A0", "4"}, {"A1", "5"}};
    p.pre.var = {{"x", Value::integer(0)}};
    p.pre.step = 3;
    p.prio = {"a", "d"};
    return {p};
}

std::string mutate(const std::function<void(json&)>& f)
{
    json j = json::parse(priorities_json(load_net("n1.net"), sample()));
    f(j);
    return j.dump();
}

} // namespace

TEST(Report, PrioritiesRoundTrip)
{
    Network n1 = load_net("n1.net");
    auto back = read_priorities_json(priorities_json(n1, sample()), n1);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_TRUE(same_stateful(back[0], sample()[0]));
    EXPECT_EQ(back[0].pre.step, 3);
}

TEST(Report, RealValuesRoundTrip)
{
    Network net = parse_network("network R { real r = 0.5; automaton A { init 0; locations 0, 1; edge 0 -> 1 on a; edge 0 -> 1 on b; } }");
    StatefulPriority p;
    p.pre.loc = {{"A", "0"}};
    p.pre.var = {{"r", Value::real(Rational(1, 3))}};
    p.prio = {"a", "b"};
    auto back = read_priorities_json(priorities_json(net, {p}), net);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].pre.var.at("r"), Value::real(Rational(1, 3)));
}

TEST(Report, ReaderIsClosedWorld)
{
    Network n1 = load_net("n1.net");
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["extra"] = 1; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j.erase("network"); }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["schema_version"] = 99; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["network"] = "N2"; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["stateful"][0]["why"] = "x"; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["stateful"][0]["pre"]["loc"]["A0"] = "9"; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["stateful"][0]["blocker"] = "q"; }), n1), Error);
    EXPECT_THROW(read_priorities_json(mutate([](json& j) { j["stateful"][0]["pre"]["var"]["x"] = true; }), n1), Error);
    EXPECT_THROW(read_priorities_json("{not json", n1), Error);
}

TEST(Report, JsonReportShape)
{
    Network n1 = load_net("n1.net");
    SynthesisReport r;
    r.outcome = Outcome::PrioritiesFound;
    r.max = 15;
    r.query = "EF (A0.5 && A1.5)";
    r.stateful = sample();
    TransformOutcome t = transform_network(n1, r.stateful);
    auto j = nlohmann::ordered_json::parse(report_json(n1, r, &t));
    EXPECT_EQ(j.begin().key(), "schema_version");
    EXPECT_EQ(j["outcome"], "priorities-found");
    EXPECT_EQ(j["stateful"].size(), 1u);
    EXPECT_EQ(j["guard_edits"][0]["case"], 1);

    std::string text = report_text(n1, r, &t);
    EXPECT_NE(text.find("priorities-found"), std::string::npos);
}
