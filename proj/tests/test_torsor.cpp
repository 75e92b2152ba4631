#include <doctest.h>

#include "cech/torsor.hpp"

using namespace cech;

static FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

// Three charts, all pairwise overlaps, no triple overlap.
static AbstractNerve triangle() {
  return AbstractNerve({"U0", "U1", "U2"},
                       {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}, 3);
}

TEST_CASE("trivial torsor passes the axioms") {
  FinitePoset x = circle4();
  GroupPresheaf g = constant_group_sheaf(x, cyclic_group(3));
  Torsor t = trivial_torsor(g);
  CheckResult r = check_torsor(t);
  CHECK(r.ok);
  CHECK(global_sections(t).size() == 3);
}

TEST_CASE("a fixed point breaks freeness") {
  FinitePoset pt({"p"}, {});
  GroupPresheaf g = constant_group_sheaf(pt, cyclic_group(2));
  Torsor t = trivial_torsor(g);
  int w = t.carrier.whole_open_index();
  t.action[w][1] = {0, 1};  // the non-unit element now fixes everything
  CheckResult r = check_torsor(t);
  CHECK_FALSE(r.ok);
  CHECK(r.diagnostic.find("free") != std::string::npos);
}

TEST_CASE("cocycle validation") {
  FiniteGroup z2 = cyclic_group(2);
  // nerve with an inhabited triple: the identity becomes a real constraint
  AbstractNerve full({"U0", "U1", "U2"},
                     {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}}, 3);
  CHECK_THROWS_AS(Cocycle1(full, z2, {{{0, 1}, 1}, {{0, 2}, 0}, {{1, 2}, 0}}),
                  ValidationError);
  Cocycle1 ok(full, z2, {{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 0}});
  CHECK(ok.at(1, 0) == 1);  // derived inverse
  CHECK(ok.at(1, 1) == 0);  // derived unit
  // missing pair
  CHECK_THROWS_AS(Cocycle1(full, z2, {{{0, 1}, 1}}), ValidationError);
}

TEST_CASE("h1 over the triangle nerve") {
  CHECK(h1(triangle(), cyclic_group(2)).size() == 2);
  CHECK(h1(triangle(), symmetric3()).size() == 3);
  CHECK(h1(triangle(), cyclic_group(1)).size() == 1);
  // single chart: one class
  AbstractNerve single({"U0"}, {{0}}, 3);
  CHECK(h1(single, symmetric3()).size() == 1);
  CHECK_THROWS_AS(h1(triangle(), symmetric3(), 10), BudgetError);
}

TEST_CASE("h1 over the circle via minimal opens") {
  FinitePoset x = circle4();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  GroupPresheaf z3 = constant_group_sheaf(x, cyclic_group(3));
  CHECK(h1_colim(z2).size() == 2);
  CHECK(h1_colim(z3).size() == 3);
}

TEST_CASE("discrete space has trivial h1") {
  FinitePoset x({"p", "q"}, {});
  GroupPresheaf g = constant_group_sheaf(x, symmetric3());
  CHECK(h1_colim(g).size() == 1);
}

// The two-chart cover of the circle with a flip on one component of the
// overlap: the Moebius Z/2 cocycle.
static Cocycle1 moebius(const FinitePoset& x, const GroupPresheaf& z2) {
  Cover two(x.whole(), {"Uc", "Ud"}, {x.minimal_open("c"), x.minimal_open("d")});
  int ab = z2.shape().open_index(x.make_open({"a", "b"}));
  return Cocycle1(two, z2, {{{0, 1}, z2.shape().value_index(ab, "0|1")}});
}

TEST_CASE("Moebius cocycle is nontrivial and yields a sectionless torsor") {
  FinitePoset x = circle4();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  Cocycle1 m = moebius(x, z2);
  Cover two = m.cover();
  Cocycle1 triv = trivial_cocycle1(two, z2);
  CHECK(cocycles1_equivalent(triv, triv).has_value());
  CHECK_FALSE(cocycles1_equivalent(triv, m).has_value());
  CHECK(h1(two, z2).size() == 2);

  Torsor t = cocycle_to_torsor(m);
  CHECK(check_torsor(t).ok);
  CHECK(global_sections(t).empty());
  CHECK_FALSE(torsor_isomorphism(t, trivial_torsor(z2)).has_value());
}

TEST_CASE("trivial cocycle gives the trivial torsor") {
  FinitePoset x = circle4();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  Cover two(x.whole(), {"Uc", "Ud"}, {x.minimal_open("c"), x.minimal_open("d")});
  Torsor t = cocycle_to_torsor(trivial_cocycle1(two, z2));
  CHECK(check_torsor(t).ok);
  CHECK(global_sections(t).size() == 2);
  auto iso = torsor_isomorphism(t, trivial_torsor(z2));
  CHECK(iso.has_value());
}

TEST_CASE("round trip torsor -> cocycle -> torsor") {
  FinitePoset x = circle4();
  GroupPresheaf z2 = constant_group_sheaf(x, cyclic_group(2));
  Cocycle1 m = moebius(x, z2);
  Torsor t = cocycle_to_torsor(m);
  Cover two = m.cover();
  // both charts are contractible, so sections exist there
  std::vector<int> secs = {0, 0};
  Cocycle1 back = torsor_to_cocycle(t, two, secs);
  CHECK(cocycles1_equivalent(m, back).has_value());
}

TEST_CASE("section choice does not change the class") {
  FinitePoset x = circle4();
  GroupPresheaf z3 = constant_group_sheaf(x, cyclic_group(3));
  Torsor t = trivial_torsor(z3);
  Cover two(x.whole(), {"Uc", "Ud"}, {x.minimal_open("c"), x.minimal_open("d")});
  std::vector<Cocycle1> seen;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      seen.push_back(torsor_to_cocycle(t, two, {i, j}));
  for (const auto& c : seen) CHECK(cocycles1_equivalent(seen[0], c).has_value());
}

TEST_CASE("h1 classes map to pairwise non-isomorphic torsors") {
  FinitePoset x = circle4();
  GroupPresheaf z3 = constant_group_sheaf(x, cyclic_group(3));
  std::vector<Cocycle1> reps = h1_colim(z3);
  REQUIRE(reps.size() == 3);
  std::vector<Torsor> torsors;
  for (const auto& c : reps) torsors.push_back(cocycle_to_torsor(c));
  for (const auto& t : torsors) CHECK(check_torsor(t).ok);
  for (size_t i = 0; i < torsors.size(); ++i)
    for (size_t j = i + 1; j < torsors.size(); ++j)
      CHECK_FALSE(torsor_isomorphism(torsors[i], torsors[j]).has_value());
}
