/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suites.hh"

using namespace nsd::suites;

namespace
{
    constexpr int cases = 1000;

    auto check(const SuiteResult & r) -> void
    {
        INFO(r.name << ": " << r.first_failure);
        CHECK(r.cases >= cases);
        CHECK(r.failures == 0);
    }
}

TEST_CASE("sum identity")
{
    check(sum_identity(cases, 101));
}

TEST_CASE("verifier mutation detection")
{
    check(verifier_mutation(cases, 202));
}

TEST_CASE("resampling scope discipline")
{
    check(resampling_scope(cases, 303));
}

TEST_CASE("class confinement")
{
    check(class_confinement(cases, 404));
}

TEST_CASE("sum-shift locality")
{
    check(sum_shift_locality(cases, 505));
}

TEST_CASE("S(v) locality")
{
    check(s_locality(cases, 606));
}
