#include <doctest.h>

#include "cech/presheaf.hpp"

using namespace cech;

static FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

TEST_CASE("constant presheaf is not separated, its sheafification is a sheaf") {
  FinitePoset x = circle4();
  Presheaf p = constant_presheaf(x, {"0", "1"});
  CHECK_FALSE(is_separated(p));  // two sections over the empty set
  CHECK_FALSE(is_sheaf(p));

  SheafificationStep st = sheafify(p);
  CHECK(is_sheaf(st.result));
  CHECK(is_sheaf_full(st.result));

  // locally constant functions: 2^(number of components)
  CHECK(st.result.value_count(st.result.empty_open_index()) == 1);
  CHECK(st.result.value_count(st.result.open_index(x.make_open({"a", "b"}))) == 4);
  CHECK(st.result.value_count(st.result.whole_open_index()) == 2);
  CHECK(stalk(st.result, x.point_index("c")).size() == 2);
}

TEST_CASE("separate quotients by local equality") {
  FinitePoset pt({"p"}, {});
  // two sections globally, identified on the (only) point's minimal open:
  // a presheaf on the point with P(point) = {u, v} restricting... the point's
  // minimal open IS the whole space, so nothing is identified there. Use the
  // empty-open behavior instead: P(empty) has 2 elements, separation kills one.
  std::vector<std::vector<std::string>> vals = {{"u", "v"}, {"s"}};
  Presheaf p(pt, vals, [](int v, int u, int e) { return v == u ? e : 0; });
  SheafificationStep st = separate(p);
  CHECK(st.result.value_count(st.result.empty_open_index()) == 1);
  CHECK(st.result.value_count(st.result.whole_open_index()) == 1);
  CHECK(is_separated(st.result));
}

TEST_CASE("sheaf checks agree with the exhaustive variants") {
  FinitePoset x = circle4();
  GroupPresheaf g = constant_group_sheaf(x, cyclic_group(2));
  CHECK(g.is_sheaf_of_groups());
  CHECK(is_sheaf_full(g.shape()));
  CHECK(is_separated(g.shape()));
  CHECK(is_separated_full(g.shape()));

  Presheaf bad = constant_presheaf(x, {"0", "1"});
  CHECK(is_separated(bad) == is_separated_full(bad));
  CHECK(is_sheaf(bad) == is_sheaf_full(bad));
}

TEST_CASE("locally constant sections restrict componentwise") {
  FinitePoset x = circle4();
  GroupPresheaf g = constant_group_sheaf(x, cyclic_group(2));
  int ab = g.shape().open_index(x.make_open({"a", "b"}));
  int a = g.shape().open_index(x.make_open({"a"}));
  CHECK(g.shape().value_count(ab) == 4);
  int mixed = g.shape().value_index(ab, "0|1");  // 0 on {a}, 1 on {b}
  CHECK(g.shape().value_name(a, g.restrict(ab, a, mixed)) == "0");
  // group structure is componentwise
  int flip = g.group_at(ab).mul(mixed, g.shape().value_index(ab, "1|1"));
  CHECK(g.shape().value_name(ab, flip) == "1|0");
}

TEST_CASE("morphism enumeration and isomorphism search") {
  FinitePoset pt({"p"}, {});
  Presheaf two = constant_presheaf(pt, {"x", "y"});
  Presheaf three = constant_presheaf(pt, {"x", "y", "z"});
  // maps point-opens {whole, empty}; morphisms two->three: 9*... identity
  // restrictions mean any pair of maps (whole, empty) with no constraint
  // except naturality along empty <= whole with identity restrictions:
  // f_empty is determined by f_whole. 3^2 choices of f_whole.
  CHECK(all_morphisms(two, three).size() == 9);
  CHECK_FALSE(find_isomorphism(two, three).has_value());
  auto iso = find_isomorphism(two, two);
  REQUIRE(iso.has_value());
  CHECK(iso->is_isomorphism());
  CHECK(naturality_holds(*iso));
  CHECK_THROWS_AS(all_morphisms(two, three, 5), BudgetError);
}

TEST_CASE("product presheaf") {
  FinitePoset pt({"p"}, {});
  Presheaf two = constant_presheaf(pt, {"x", "y"});
  Presheaf pr = product(two, two);
  CHECK(pr.value_count(pr.whole_open_index()) == 4);
  CHECK(is_sheaf(pr) == is_sheaf(two));
}
