// Throughput of the solver-free parts: parsing, explicit exploration,
// unfolding construction and script emission. Solver calls are dominated by
// process start-up and are measured by the acceptance run instead.
#include "stateprio/encoder.hpp"
#include "stateprio/parser.hpp"
#include "stateprio/semantics.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace stateprio;

namespace {

std::string n1_text() { return read_file(std::string(STATEPRIO_MODELS_DIR) + "/n1.net"); }

// n robots sharing one counter; same shape as the acceptance smoke test
std::string robots(int n)
{
    std::string s = "network Robots { int inside = 0;\n";
    for (int i = 0; i < n; ++i) {
        auto id = std::to_string(i);
        s += "automaton R" + id + " { init 0; locations 0, 1, 2;\n";
        s += " edge 0 -> 1 on req" + id + ";\n";
        s += " edge 1 -> 2 on enter" + id + " do inside := inside + 1;\n";
        s += " edge 1 -> 0 on giveup" + id + ";\n";
        s += " edge 2 -> 0 on leave" + id + " do inside := inside - 1; }\n";
    }
    return s + "}\n";
}

void BM_ParseN1(benchmark::State& st)
{
    const std::string text = n1_text();
    for (auto _ : st)
        benchmark::DoNotOptimize(parse_network(text));
}
BENCHMARK(BM_ParseN1);

void BM_BfsRobots(benchmark::State& st)
{
    Network net = parse_network(robots(static_cast<int>(st.range(0))));
    std::size_t states = 0;
    for (auto _ : st) {
        ReachResult r = bfs_reach(net, -1);
        states = r.states.size();
        benchmark::DoNotOptimize(r);
    }
    st.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_BfsRobots)->DenseRange(2, 6);

void BM_EncodeN1(benchmark::State& st)
{
    Network net = parse_network(n1_text());
    const int k = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(Encoder(net, k));
}
BENCHMARK(BM_EncodeN1)->Arg(5)->Arg(15)->Arg(40);

void BM_EmitScriptRobots(benchmark::State& st)
{
    Network net = parse_network(robots(4));
    Encoder enc(net, static_cast<int>(st.range(0)));
    std::size_t bytes = 0;
    for (auto _ : st) {
        std::string s = emit_script(enc.unfolding());
        bytes = s.size();
        benchmark::DoNotOptimize(s);
    }
    st.SetBytesProcessed(static_cast<std::int64_t>(bytes) * st.iterations());
}
BENCHMARK(BM_EmitScriptRobots)->Arg(10)->Arg(30);

} // namespace

BENCHMARK_MAIN();
