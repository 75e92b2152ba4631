#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cech/poset.hpp"

using namespace cech;

// Four-point circle: two open points a, b and two closed points c, d, each
// closed point below both open points.
static FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

TEST_CASE("poset construction and closure") {
  FinitePoset x({"p", "q", "r"}, {{"p", "q"}, {"q", "r"}});
  CHECK(x.leq(0, 2));  // transitive closure
  CHECK(x.leq(1, 1));  // reflexive
  CHECK_FALSE(x.leq(2, 0));
  CHECK_THROWS_AS(FinitePoset({"p", "q"}, {{"p", "q"}, {"q", "p"}}), ValidationError);
}

TEST_CASE("opens of the four-point circle") {
  FinitePoset x = circle4();
  CHECK(x.all_opens().size() == 7);
  CHECK(x.minimal_open("c") == x.make_open({"a", "b", "c"}));
  CHECK(x.minimal_open("a") == x.make_open({"a"}));
  CHECK_THROWS_AS(x.make_open({"c"}), ValidationError);  // not up-closed

  Open ab = x.make_open({"a", "b"});
  CHECK_FALSE(x.is_connected(ab.bits));
  CHECK(x.components(ab.bits).size() == 2);
  CHECK(x.is_connected(x.whole().bits));
}

TEST_CASE("minimal cover and refinement") {
  FinitePoset x = circle4();
  Cover mc = minimal_cover(x.whole());
  CHECK(mc.size() == 4);
  Cover two(x.whole(), {"Uc", "Ud"},
            {x.minimal_open("c"), x.minimal_open("d")});
  auto r = refinement_map(mc, two);
  REQUIRE(r.has_value());
  CHECK(*r == std::vector<int>{0, 0, 0, 1});

  Cover other(x.make_open({"a"}), {"V"}, {x.make_open({"a"})});
  CHECK_THROWS_AS(refinement_map(mc, other), ValidationError);
}

TEST_CASE("nerve of the two-chart circle cover") {
  FinitePoset x = circle4();
  Cover two(x.whole(), {"Uc", "Ud"},
            {x.minimal_open("c"), x.minimal_open("d")});
  AbstractNerve nv = nerve(two, 2);
  CHECK(nv.inhabited({0}));
  CHECK(nv.inhabited({0, 1}));
  CHECK(nv.inhabited({1, 0}));        // permutation symmetric
  CHECK(nv.inhabited({0, 0}));        // repeats collapse
  CHECK_FALSE(nv.connected({0, 1}));  // {a} and {b} are incomparable
  CHECK(nv.connected({0}));
  CHECK(nv.inhabited({0, 1, 0, 1, 0}));  // collapses to (0,1)

  AbstractNerve shallow = nerve(two, 1);
  CHECK_FALSE(shallow.inhabited({0, 1}));  // beyond recorded depth
}

TEST_CASE("abstract nerve validates downward closure") {
  CHECK_THROWS_AS(AbstractNerve({"0", "1", "2"}, {{0}, {1}, {0, 1, 2}}, 3),
                  ValidationError);
  AbstractNerve nv({"0", "1", "2"}, {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}, 3);
  CHECK(nv.tuples(2).size() == 3);
  CHECK(nv.tuples(3).empty());
}
