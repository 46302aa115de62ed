/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/colouring.hh>
#include <nsd/construct.hh>
#include <nsd/experiment.hh>
#include <nsd/lemma.hh>

#include <benchmark/benchmark.h>

#include <map>

using namespace nsd;

namespace
{
    struct Fixture
    {
        Graph g;
        TotalColouring colouring;
        LemmaParams params;
        LemmaState state;
    };

    auto fixture(int n) -> const Fixture &
    {
        static std::map<int, Fixture> cache;
        auto it = cache.find(n);
        if (it == cache.end()) {
            Fixture f;
            f.g = random_graph(n, grid_probability(n, 60), 17);
            ConstructConfig config;
            config.seed = 3;
            f.colouring = construct(f.g, config).colouring;
            f.params = LemmaParams::for_delta(f.g.max_degree(), Mode::Permissive, 2.0);
            f.state = sample_stage_one(f.g, f.params, 5);
            it = cache.emplace(n, std::move(f)).first;
        }
        return it->second;
    }

    auto BM_check_proper(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        for (auto _ : s)
            benchmark::DoNotOptimize(check_proper(f.g, f.colouring));
    }

    auto BM_check_proper_serial(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        for (auto _ : s)
            benchmark::DoNotOptimize(check_proper_serial(f.g, f.colouring));
    }

    auto BM_check_nsd(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        for (auto _ : s)
            benchmark::DoNotOptimize(check_nsd(f.g, f.colouring));
    }

    auto BM_check_nsd_serial(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        for (auto _ : s)
            benchmark::DoNotOptimize(check_nsd_serial(f.g, f.colouring));
    }

    auto BM_check_properties(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        SParams sp{ f.params };
        for (auto _ : s)
            benchmark::DoNotOptimize(check_properties(f.g, f.state, sp, f.params));
    }

    auto BM_check_properties_serial(benchmark::State & s) -> void
    {
        auto & f = fixture(s.range(0));
        SParams sp{ f.params };
        for (auto _ : s)
            benchmark::DoNotOptimize(check_properties_serial(f.g, f.state, sp, f.params));
    }
}

BENCHMARK(BM_check_proper)->Arg(1000)->Arg(5000);
BENCHMARK(BM_check_proper_serial)->Arg(1000)->Arg(5000);
BENCHMARK(BM_check_nsd)->Arg(1000)->Arg(5000);
BENCHMARK(BM_check_nsd_serial)->Arg(1000)->Arg(5000);
BENCHMARK(BM_check_properties)->Arg(1000)->Arg(5000);
BENCHMARK(BM_check_properties_serial)->Arg(1000)->Arg(5000);

BENCHMARK_MAIN();
