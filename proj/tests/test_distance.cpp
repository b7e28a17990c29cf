#include <doctest.h>

#include <limits>

#include "dynrisk/distance.hpp"
#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("wasserstein distance between simple laws") {
    DiscreteLaw a = make_law({{0.0, 0.5}, {2.0, 0.5}});
    DiscreteLaw b = make_law({{1.0, 1.0}});
    // Quantile gap is 1 everywhere, so W_p = 1 for every order.
    CHECK(wasserstein_distance(a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wasserstein_distance(a, b, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wasserstein_distance(a, a, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(wasserstein_distance(a, b, 0.5), ValidationError);
}

TEST_CASE("wasserstein excess vanishes under first-order dominance") {
    DiscreteLaw low = make_law({{0.0, 0.5}, {1.0, 0.5}});
    DiscreteLaw high = make_law({{0.5, 0.5}, {2.0, 0.5}});
    CHECK(wasserstein_excess(low, high, 1.0) == doctest::Approx(0.0));
    CHECK(wasserstein_excess(high, low, 1.0) > 0.0);
}

TEST_CASE("kl divergence on matched and unmatched supports") {
    DiscreteLaw q = make_law({{0.0, 0.6}, {1.0, 0.4}});
    DiscreteLaw p = make_law({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(kl_divergence(q, p) == doctest::Approx(0.020135513550688863).epsilon(1e-12));
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
    DiscreteLaw off = make_law({{0.0, 0.5}, {2.0, 0.5}});
    CHECK(kl_divergence(off, p) == std::numeric_limits<double>::infinity());
}

TEST_CASE("conditional distances read the child laws") {
    ScenarioTree tree = binary1();
    AdaptedVector x = vec(1, {0.0, 2.0});
    AdaptedVector y = vec(1, {1.0, 1.0});
    CHECK(conditional_wasserstein(tree, y, x, 0, 1.0) == doctest::Approx(1.0));
    CHECK(conditional_kl(tree, x, x, 0) == doctest::Approx(0.0));
}

TEST_CASE("law masses are validated") {
    CHECK_THROWS_AS(make_law({{0.0, 0.4}, {1.0, 0.4}}), ValidationError);
    CHECK_THROWS_AS(make_law({}), ValidationError);
}
