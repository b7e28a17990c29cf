#include <doctest.h>

#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("binary tree roundtrip") {
    ScenarioTree tree = binary1(0.4);
    CHECK(tree.horizon() == 1);
    CHECK(tree.count(0) == 1);
    CHECK(tree.count(1) == 2);
    CHECK(tree.atom_id(1, 0) == "a");
    CHECK(tree.atom_id(1, 1) == "b");
    CHECK(tree.cond_prob(1, 0) == doctest::Approx(0.4));
    CHECK(tree.cond_prob(1, 1) == doctest::Approx(0.6));
    CHECK(tree.parent(1, 0) == 0);
    CHECK(tree.path_prob(1, 1) == doctest::Approx(0.6));
}

TEST_CASE("atoms are ordered lexicographically within a slice") {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"zz", 1, "root", 0.5});
    atoms.push_back({"aa", 1, "root", 0.5});
    ScenarioTree tree = ScenarioTree::build(1, std::move(atoms));
    CHECK(tree.atom_id(1, 0) == "aa");
    CHECK(tree.atom_id(1, 1) == "zz");
}

TEST_CASE("children probabilities must sum to one, diagnostic names the atom") {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"a", 1, "root", 0.5});
    atoms.push_back({"b", 1, "root", 0.6});
    try {
        ScenarioTree::build(1, std::move(atoms));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("root") != std::string::npos);
    }
}

TEST_CASE("ancestor and path probabilities") {
    ScenarioTree tree = skewed2();
    // "ba" is the fourth terminal atom (order: aa, ab, ac, ba, bb).
    CHECK(tree.atom_id(2, 3) == "ba");
    CHECK(tree.ancestor(2, 3, 1) == 1);
    CHECK(tree.path_prob(2, 3) == doctest::Approx(0.7 * 0.6));
}

TEST_CASE("conditional law merges equal values and sorts") {
    ScenarioTree tree = binary1();
    AdaptedVector x = vec(1, {3.0, 1.0});
    auto law = conditional_law(tree, x, 0);
    REQUIRE(law.size() == 2);
    CHECK(law[0].first == doctest::Approx(1.0));
    CHECK(law[0].second == doctest::Approx(0.5));
    CHECK(law[1].first == doctest::Approx(3.0));
    CHECK(law[1].second == doctest::Approx(0.5));

    AdaptedVector y = vec(1, {2.0, 2.0});
    auto merged = conditional_law(tree, y, 0);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].second == doctest::Approx(1.0));
}

TEST_CASE("mix follows X on descendants of the event, Y elsewhere") {
    ScenarioTree tree = binary2();
    AdaptedProcess one = proc(tree, {{0.0}, {1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}});
    AdaptedProcess zero = AdaptedProcess::zero(tree);
    EventSet B;
    B.time = 1;
    B.members = {true, false}; // atom "a" only
    AdaptedProcess m = mix(tree, B, one, zero);
    CHECK(m.at(1).values == std::vector<double>{1.0, 0.0});
    CHECK(m.at(2).values == std::vector<double>{1.0, 1.0, 0.0, 0.0});
    CHECK(m.at(0).values == std::vector<double>{0.0});
}

TEST_CASE("slice zeroes components outside the window") {
    ScenarioTree tree = binary2();
    AdaptedProcess x = proc(tree, {{0.0}, {1.0, 2.0}, {3.0, 4.0, 5.0, 6.0}});
    AdaptedProcess tail = x.slice(tree, 2, 2);
    CHECK(tail.at(1).values == std::vector<double>{0.0, 0.0});
    CHECK(tail.at(2).values == std::vector<double>{3.0, 4.0, 5.0, 6.0});
}

TEST_CASE("conditional expectation steps back through the tree") {
    ScenarioTree tree = skewed2();
    AdaptedVector z = vec(2, {1.0, 2.0, 3.0, 4.0, 5.0});
    AdaptedVector e1 = conditional_expectation_step(tree, z);
    CHECK(e1.time == 1);
    CHECK(e1[0] == doctest::Approx(0.2 * 1 + 0.5 * 2 + 0.3 * 3));
    CHECK(e1[1] == doctest::Approx(0.6 * 4 + 0.4 * 5));
    AdaptedVector e0 = conditional_expectation(tree, z, 0);
    CHECK(e0[0] == doctest::Approx(0.3 * e1[0] + 0.7 * e1[1]));
}

TEST_CASE("sup norm over a window") {
    ScenarioTree tree = binary2();
    AdaptedProcess x = proc(tree, {{0.0}, {1.0, -2.0}, {0.5, -3.0, 0.0, 1.5}});
    AdaptedVector s = sup_norm(tree, x, 1, 2);
    CHECK(s.time == 1);
    CHECK(s[0] == doctest::Approx(3.0));
    CHECK(s[1] == doctest::Approx(2.0));
}
