/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_TESTS_SUITES_HH
#define NSD_TESTS_SUITES_HH

#include <nsd/colouring.hh>
#include <nsd/construct.hh>
#include <nsd/graph.hh>
#include <nsd/lemma.hh>

#include <cstdint>
#include <string>

namespace nsd::suites
{
    struct SuiteResult
    {
        std::string name;
        int cases = 0;
        int failures = 0;
        std::string first_failure;

        auto passed() const -> bool { return cases > 0 && failures == 0; }
    };

    // Sum of weighted degrees = vertex colours + twice the edge colours.
    auto sum_identity(int cases, std::uint64_t seed) -> SuiteResult;

    // Every single-object corruption of a valid colouring is reported, by both kernels.
    auto verifier_mutation(int cases, std::uint64_t seed) -> SuiteResult;

    // A resampling step changes no variable outside the event's scope.
    auto resampling_scope(int cases, std::uint64_t seed) -> SuiteResult;

    // After lift and properize every object's colour lies in its class.
    auto class_confinement(int cases, std::uint64_t seed) -> SuiteResult;

    // Recolouring one H edge moves exactly its endpoints' sums, by the colour delta.
    auto sum_shift_locality(int cases, std::uint64_t seed) -> SuiteResult;

    // S(v) depends only on d(v) and c1(v), and alpha places it in its interval.
    auto s_locality(int cases, std::uint64_t seed) -> SuiteResult;

    // A random graph on n vertices with edge probability p, drawn from rng-derived seeds.
    auto small_random_graph(std::uint64_t seed, int max_n) -> Graph;

    // Recounts every lemma property from scratch with independently computed
    // caps; returns the ids of the properties that fail.
    auto independent_failures(const Graph & g, const LemmaState & st, int delta, double slack) -> std::string;
}

#endif
