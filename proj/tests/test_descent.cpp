#include <doctest.h>

#include "cech/descent.hpp"

using namespace cech;

static FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

// Six-point circle: three open arcs u0,u1,u2 glued along three closed points.
static FinitePoset hexagon() {
  return FinitePoset({"u0", "u1", "u2", "c01", "c12", "c20"},
                     {{"c01", "u0"}, {"c01", "u1"}, {"c12", "u1"}, {"c12", "u2"},
                      {"c20", "u2"}, {"c20", "u0"}});
}

TEST_CASE("descent data over the three-arc circle cover") {
  FinitePoset x = hexagon();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  GroupoidPresheaf f = one_object_presheaf(z2);
  Cover arcs(x.whole(), {"U0", "U1", "U2"},
             {x.minimal_open("c01"), x.minimal_open("c12"), x.minimal_open("c20")});
  DescentCategory dc = descent_category(arcs, f);
  CHECK(dc.objects.size() == 8);  // free gluing datum on each of 3 overlaps
  CHECK(dc.groupoid.iso_classes().size() == 2);  // matches h1 on the triangle nerve
  CHECK(dc.groupoid.arrow_count() == 64);

  GroupoidFunctor d = comparison_functor(f, dc);
  CHECK(fully_faithful(d));
  CHECK_FALSE(essentially_surjective(d));  // the Moebius datum is not effective
}

TEST_CASE("empty cover of the empty open gives the terminal groupoid") {
  FinitePoset x = circle4();
  GroupoidPresheaf f = one_object_presheaf(constant_group_sheaf(x, cyclic_group(2)));
  DescentCategory dc = descent_category(minimal_cover(x.empty_open()), f);
  CHECK(dc.groupoid.object_count() == 1);
  CHECK(dc.groupoid.arrow_count() == 1);
}

TEST_CASE("single-chart cover: D is an isomorphism") {
  FinitePoset x = circle4();
  GroupoidPresheaf f = one_object_presheaf(constant_group_sheaf(x, symmetric3()));
  Cover single(x.whole(), {"X"}, {x.whole()});
  DescentCategory dc = descent_category(single, f);
  GroupoidFunctor d = comparison_functor(f, dc);
  CHECK(fully_faithful(d));
  CHECK(essentially_surjective(d));
  CHECK(dc.groupoid.object_count() == f.at(f.open_index(x.whole())).object_count());
  CHECK(dc.groupoid.arrow_count() == f.at(f.open_index(x.whole())).arrow_count());
}

TEST_CASE("locally constant groups give prestacks but not stacks") {
  FinitePoset x = circle4();
  GroupoidPresheaf f = one_object_presheaf(constant_group_sheaf(x, cyclic_group(2)));
  CHECK(is_prestack(f));
  CHECK_FALSE(is_stack(f));

  FinitePoset pt({"p"}, {});
  GroupoidPresheaf g = one_object_presheaf(constant_group_sheaf(pt, symmetric3()));
  CHECK(is_stack(g));
}

TEST_CASE("strictly constant arrows are not even a prestack") {
  FinitePoset x = circle4();
  std::vector<FiniteGroupoid> values(x.all_opens().size(),
                                     one_object_groupoid(cyclic_group(2)));
  GroupoidPresheaf f(
      x, values, [](int, int, int) { return 0; },
      [](int, int, int a) { return a; });
  CHECK_FALSE(is_prestack(f));
  CHECK_THROWS_AS(stackify(f), ValidationError);
}

TEST_CASE("hom presheaf of a group sheaf is the group sheaf") {
  FinitePoset x = circle4();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  GroupoidPresheaf f = one_object_presheaf(z2);
  Presheaf h = hom_presheaf(f, x.whole(), 0, 0);
  CHECK(is_sheaf(h));
  CHECK(find_isomorphism(h, z2.shape()).has_value());
}

TEST_CASE("stackification of Z/2 over the circle") {
  FinitePoset x = circle4();
  GroupoidPresheaf f = one_object_presheaf(constant_group_sheaf(x, cyclic_group(2)));
  Stackification st = stackify(f);
  int w = st.result.open_index(x.whole());
  CHECK(st.result.at(w).iso_classes().size() == 2);  // = |H1(circle, Z/2)|
  CHECK(is_stack(st.result, 1'000'000));

  // the unit is fully faithful on every open
  for (int u = 0; u < f.open_count(); ++u) {
    GroupoidFunctor unit{&f.at(u), &st.result.at(u), st.unit_obj[u], st.unit_arr[u]};
    CHECK(check_functor(unit).ok);
    CHECK(fully_faithful(unit));
  }
  // and locally essentially surjective: near every point every descent datum
  // trivializes
  for (int p = 0; p < x.size(); ++p) {
    int u = st.result.open_index(x.minimal_open(p));
    GroupoidFunctor unit{&f.at(u), &st.result.at(u), st.unit_obj[u], st.unit_arr[u]};
    CHECK(essentially_surjective(unit));
  }
}
