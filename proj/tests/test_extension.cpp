#include <doctest.h>

#include "cech/extension.hpp"

using namespace cech;

namespace {

FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

// connected double cover of the four-point circle: sheet 2 is reached by
// crossing d, so going around the circle once swaps the sheets
FinitePoset double_cover_total() {
  return FinitePoset({"a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2"},
                     {{"c1", "a1"}, {"c1", "b1"}, {"d1", "a1"}, {"d1", "b2"},
                      {"c2", "a2"}, {"c2", "b2"}, {"d2", "a2"}, {"d2", "b1"}});
}

// the Z/4 action on the double cover: odd elements swap the sheets
GroupoidExtension mobius_extension(const FinitePoset& x) {
  FinitePoset total = double_cover_total();
  std::vector<int> proj(total.size());
  for (int p = 0; p < total.size(); ++p)
    proj[p] = x.point_index(total.point_name(p).substr(0, 1));
  EtaleSpace m = make_etale_space(x, std::move(total), std::move(proj));

  FiniteGroup z4 = cyclic_group(4);
  std::vector<int> swap_sheets(8);
  for (int p = 0; p < 8; ++p) swap_sheets[p] = (p + 4) % 8;
  std::vector<int> id(8);
  for (int p = 0; p < 8; ++p) id[p] = p;
  std::vector<std::vector<int>> action = {id, swap_sheets, id, swap_sheets};

  return make_extension(cyclic_group(2), z4, {0, 2}, std::move(m),
                        std::move(action));
}

}  // namespace

TEST_CASE("extension axioms are validated") {
  FinitePoset x = circle4();
  CHECK_NOTHROW(mobius_extension(x));

  // an action whose unit moves points is rejected
  FinitePoset total = double_cover_total();
  std::vector<int> proj(total.size());
  for (int p = 0; p < total.size(); ++p)
    proj[p] = x.point_index(total.point_name(p).substr(0, 1));
  EtaleSpace m = make_etale_space(x, std::move(total), std::move(proj));
  std::vector<int> swap_sheets(8), id(8);
  for (int p = 0; p < 8; ++p) swap_sheets[p] = (p + 4) % 8;
  for (int p = 0; p < 8; ++p) id[p] = p;
  CHECK_THROWS_AS(make_extension(cyclic_group(2), cyclic_group(4), {0, 2},
                                 std::move(m),
                                 {swap_sheets, id, swap_sheets, id}),
                  ValidationError);

  // j must be a group embedding: 1 has order 4 in Z/4
  FinitePoset total2 = double_cover_total();
  std::vector<int> proj2(total2.size());
  for (int p = 0; p < total2.size(); ++p)
    proj2[p] = x.point_index(total2.point_name(p).substr(0, 1));
  EtaleSpace m2 = make_etale_space(x, std::move(total2), std::move(proj2));
  CHECK_THROWS_AS(make_extension(cyclic_group(2), cyclic_group(4), {0, 1},
                                 std::move(m2),
                                 {id, swap_sheets, id, swap_sheets}),
                  ValidationError);
}

TEST_CASE("the split extension exists over any base and has trivial class") {
  FinitePoset x = circle4();
  GroupoidExtension ext = split_extension(cyclic_group(2), cyclic_group(2), x);
  CHECK(ext.g.order() == 4);
  CHECK(ext.m.total.size() == 8);

  Cover cover(x.whole(), {"U", "V"}, {x.minimal_open("c"), x.minimal_open("d")});
  ExtensionCharts charts{cover, {}, {}};
  // the identity sheet gives a section over each chart
  for (int a = 0; a < 2; ++a) {
    std::vector<int> s(x.size(), -1);
    for (int p : cover.members[a].points())
      s[p] = ext.m.total.point_index(x.point_name(p) + "@0");
    charts.sections.push_back(std::move(s));
  }
  // the sections agree on both components of U ∩ V, so the unit arrow works
  charts.arrows[{0, 1}] = {ext.g.unit(), ext.g.unit()};

  auto [band, c] = extension_to_cocycle(ext, charts);
  CHECK(band.cover_mode());
  for (const auto& p : band.nerve().tuples(2))
    for (int j = 0; j < band.components(p); ++j)
      for (int e = 0; e < 2; ++e)
        CHECK(band.lambda_map(p[0], p[1], j)[e] == e);
  CHECK(c.g == trivial_cocycle2(band).g);
}

TEST_CASE("the Moebius Z/4 extension yields a cocycle over its band") {
  FinitePoset x = circle4();
  GroupoidExtension ext = mobius_extension(x);

  Cover cover(x.whole(), {"U", "V"}, {x.minimal_open("c"), x.minimal_open("d")});
  ExtensionCharts charts{cover, {}, {}};
  // over U = {a, b, c} stay on sheet 1; over V = {a, b, d} the section must
  // follow the gluing at d, which sits below b2
  std::vector<int> su(x.size(), -1), sv(x.size(), -1);
  const FinitePoset& t = ext.m.total;
  su[x.point_index("a")] = t.point_index("a1");
  su[x.point_index("b")] = t.point_index("b1");
  su[x.point_index("c")] = t.point_index("c1");
  sv[x.point_index("a")] = t.point_index("a1");
  sv[x.point_index("b")] = t.point_index("b2");
  sv[x.point_index("d")] = t.point_index("d1");
  charts.sections = {su, sv};

  // U ∩ V = {a, b} is disconnected: the identity carries a1 to a1, while on
  // the b component only an odd element carries b2 to b1
  auto masks = x.components(cover.intersection({0, 1}).bits);
  std::vector<int> arrows(masks.size());
  for (size_t j = 0; j < masks.size(); ++j)
    arrows[j] = ((masks[j] >> x.point_index("a")) & 1u) ? 0 : 1;
  charts.arrows[{0, 1}] = arrows;

  auto [band, c] = extension_to_cocycle(ext, charts);
  CHECK(check_cocycle2(c).ok);
  // Z/4 is abelian, so conjugation along the arrows leaves lambda trivial
  for (int j = 0; j < band.components({0, 1}); ++j)
    for (int e = 0; e < 2; ++e)
      CHECK(band.lambda_map(0, 1, j)[e] == e);
  // a two-chart cover has no triple overlaps: the class is the unique one
  CHECK(c.g.empty());
  CHECK(h2(band, 1'000'000).size() == 1);

  // an arrow that fails to carry the sections into each other is rejected
  ExtensionCharts bad = charts;
  bad.arrows[{0, 1}] = {0, 0};
  CHECK_THROWS_AS(extension_to_cocycle(ext, bad), ValidationError);
}
