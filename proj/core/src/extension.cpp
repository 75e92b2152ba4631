#include "cech/extension.hpp"

#include <algorithm>

namespace cech {

namespace {

std::vector<int> j_image_sorted(const GroupoidExtension& ext) {
  std::vector<int> im = ext.j;
  std::sort(im.begin(), im.end());
  return im;
}

}  // namespace

GroupoidExtension make_extension(FiniteGroup l, FiniteGroup g, std::vector<int> j,
                                 EtaleSpace m, std::vector<std::vector<int>> action) {
  Homomorphism jh = make_homomorphism(l, g, j);
  {
    std::vector<int> im = j;
    std::sort(im.begin(), im.end());
    if (std::unique(im.begin(), im.end()) != im.end())
      throw ValidationError("extension: j is not an embedding");
  }
  const int np = m.total.size();
  for (int x = 0; x < m.base->size(); ++x)
    if (m.fiber(x).empty())
      throw ValidationError("extension: projection is not surjective");
  if (static_cast<int>(action.size()) != g.order())
    throw ValidationError("extension: need one permutation per group element");
  for (int e = 0; e < g.order(); ++e) {
    const auto& a = action[e];
    if (static_cast<int>(a.size()) != np)
      throw ValidationError("extension: action permutation has wrong size");
    std::vector<char> seen(np, 0);
    for (int p = 0; p < np; ++p) {
      if (a[p] < 0 || a[p] >= np || seen[a[p]])
        throw ValidationError("extension: action is not a permutation");
      seen[a[p]] = 1;
      if (m.projection[a[p]] != m.projection[p])
        throw ValidationError("extension: action does not commute with the "
                              "projection");
    }
    for (int p = 0; p < np; ++p)
      for (int q = 0; q < np; ++q)
        if (m.total.leq(p, q) != m.total.leq(a[p], a[q]))
          throw ValidationError("extension: action is not by homeomorphisms");
  }
  for (int p = 0; p < np; ++p)
    if (action[g.unit()][p] != p)
      throw ValidationError("extension: unit does not act as the identity");
  for (int e = 0; e < g.order(); ++e)
    for (int f = 0; f < g.order(); ++f)
      for (int p = 0; p < np; ++p)
        if (action[g.mul(e, f)][p] != action[e][action[f][p]])
          throw ValidationError("extension: action law fails");

  GroupoidExtension ext{std::move(l), std::move(g), std::move(j), std::move(m),
                        std::move(action)};
  std::vector<int> im = j_image_sorted(ext);
  for (int p = 0; p < np; ++p) {
    std::vector<int> stab;
    for (int e = 0; e < ext.g.order(); ++e)
      if (ext.action[e][p] == p) stab.push_back(e);
    if (stab != im)
      throw ValidationError("extension: j does not identify the vertex group at " +
                            ext.m.total.point_name(p) + " with L");
  }
  for (int x = 0; x < ext.m.base->size(); ++x) {
    auto fib = ext.m.fiber(x);
    for (int p : fib)
      for (int q : fib) {
        bool hit = false;
        for (int e = 0; e < ext.g.order() && !hit; ++e)
          if (ext.action[e][p] == q) hit = true;
        if (!hit)
          throw ValidationError("extension: (s,t) is not surjective onto the "
                                "fibered product");
      }
  }
  return ext;
}

GroupoidExtension split_extension(const FiniteGroup& l, const FiniteGroup& h,
                                  const FinitePoset& base) {
  std::vector<std::string> points;
  std::vector<std::pair<std::string, std::string>> leq;
  for (int k = 0; k < h.order(); ++k)
    for (int x = 0; x < base.size(); ++x)
      points.push_back(base.point_name(x) + "@" + h.element_name(k));
  for (int k = 0; k < h.order(); ++k)
    for (int x = 0; x < base.size(); ++x)
      for (int y = 0; y < base.size(); ++y)
        if (base.leq(x, y))
          leq.push_back({base.point_name(x) + "@" + h.element_name(k),
                         base.point_name(y) + "@" + h.element_name(k)});
  FinitePoset total(points, leq);
  std::vector<int> proj(total.size());
  for (int k = 0; k < h.order(); ++k)
    for (int x = 0; x < base.size(); ++x)
      proj[total.point_index(base.point_name(x) + "@" + h.element_name(k))] = x;
  EtaleSpace m = make_etale_space(base, std::move(total), std::move(proj));

  FiniteGroup g = direct_product(l, h);
  // element (a, b) of the product has index a * |h| + b when labels pair the
  // first factor outermost; recover indices by label lookup to stay robust
  std::vector<int> j(l.order());
  for (int a = 0; a < l.order(); ++a)
    j[a] = g.element_index("(" + l.element_name(a) + "," +
                           h.element_name(h.unit()) + ")");
  std::vector<std::vector<int>> action(g.order(), std::vector<int>(m.total.size()));
  for (int a = 0; a < l.order(); ++a)
    for (int b = 0; b < h.order(); ++b) {
      int e = g.element_index("(" + l.element_name(a) + "," + h.element_name(b) + ")");
      for (int k = 0; k < h.order(); ++k)
        for (int x = 0; x < base.size(); ++x) {
          int p = m.total.point_index(base.point_name(x) + "@" + h.element_name(k));
          int q = m.total.point_index(base.point_name(x) + "@" +
                                      h.element_name(h.mul(b, k)));
          action[e][p] = q;
        }
    }
  return make_extension(l, std::move(g), std::move(j), std::move(m),
                        std::move(action));
}

std::pair<BandPresentation, Cocycle2> extension_to_cocycle(
    const GroupoidExtension& ext, const ExtensionCharts& charts) {
  const FinitePoset& x = *ext.m.base;
  const Cover& cover = charts.cover;
  if (cover.of.space != &x)
    throw ValidationError("extension_to_cocycle: cover over a different space");
  const int n = cover.size();
  if (static_cast<int>(charts.sections.size()) != n)
    throw ValidationError("extension_to_cocycle: need one section per chart");

  for (int a = 0; a < n; ++a) {
    const Open& u = cover.members[a];
    if (!x.is_connected(u.bits))
      throw ValidationError("extension_to_cocycle: charts must be connected");
    const auto& s = charts.sections[a];
    if (static_cast<int>(s.size()) != x.size())
      throw ValidationError("extension_to_cocycle: section has wrong size");
    for (int p = 0; p < x.size(); ++p) {
      if (!u.contains(p)) {
        if (s[p] != -1)
          throw ValidationError("extension_to_cocycle: section defined outside "
                                "its chart");
        continue;
      }
      if (s[p] < 0 || s[p] >= ext.m.total.size() || ext.m.projection[s[p]] != p)
        throw ValidationError("extension_to_cocycle: not a section of the "
                              "projection");
      for (int q = 0; q < x.size(); ++q)
        if (u.contains(q) && x.leq(p, q) && !ext.m.total.leq(s[p], s[q]))
          throw ValidationError("extension_to_cocycle: section is not continuous");
    }
  }

  std::vector<int> jinv(ext.g.order(), -1);
  for (int a = 0; a < ext.l.order(); ++a) jinv[ext.j[a]] = a;

  AbstractNerve nv = nerve(cover, std::min(4, std::max(1, n)));
  auto comp_masks = [&](const std::vector<int>& t) {
    return x.components(cover.intersection(t).bits);
  };
  auto points_of = [&](std::uint64_t mask) {
    std::vector<int> out;
    for (int p = 0; p < x.size(); ++p)
      if ((mask >> p) & 1u) out.push_back(p);
    return out;
  };

  // validate the chosen arrows and extract lambda
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
  for (const auto& t : nv.tuples(2)) {
    int a = t[0], b = t[1];
    auto it = charts.arrows.find({a, b});
    auto masks = comp_masks(t);
    if (it == charts.arrows.end() || it->second.size() != masks.size())
      throw ValidationError("extension_to_cocycle: need one arrow per component "
                            "of " + tuple_name(nv, t));
    std::vector<std::vector<int>> maps;
    for (size_t j = 0; j < masks.size(); ++j) {
      int e = it->second[j];
      if (e < 0 || e >= ext.g.order())
        throw ValidationError("extension_to_cocycle: arrow out of range");
      for (int p : points_of(masks[j]))
        if (ext.action[e][charts.sections[b][p]] != charts.sections[a][p])
          throw ValidationError("extension_to_cocycle: arrow at " +
                                tuple_name(nv, t) +
                                " does not carry the sections into each other");
      std::vector<int> lm(ext.l.order());
      for (int v = 0; v < ext.l.order(); ++v) {
        int c = ext.g.mul(ext.g.mul(e, ext.j[v]), ext.g.inv(e));
        if (jinv[c] < 0)
          throw InternalError("extension_to_cocycle: conjugation left the "
                              "vertex group");
        lm[v] = jinv[c];
      }
      maps.push_back(std::move(lm));
    }
    lambda[{a, b}] = std::move(maps);
  }

  std::vector<FiniteGroup> groups(n, ext.l);
  BandPresentation band(cover, std::move(groups), std::move(lambda));

  Cocycle2 c{band, {}};
  for (const auto& t : nv.tuples(3)) {
    int a = t[0], b = t[1], d = t[2];
    auto masks = comp_masks(t);
    auto arrow_at = [&](int i1, int i2, std::uint64_t mask) {
      auto pmasks = comp_masks({i1, i2});
      for (size_t k = 0; k < pmasks.size(); ++k)
        if ((mask & ~pmasks[k]) == 0)
          return charts.arrows.at({i1, i2})[k];
      throw InternalError("extension_to_cocycle: component not in any parent");
    };
    BandPresentation::Value val(masks.size());
    for (size_t j = 0; j < masks.size(); ++j) {
      int h = ext.g.mul(ext.g.mul(arrow_at(a, b, masks[j]), arrow_at(b, d, masks[j])),
                        ext.g.inv(arrow_at(a, d, masks[j])));
      if (jinv[h] < 0)
        throw InternalError("extension_to_cocycle: cocycle value is not a vertex "
                            "loop");
      val[j] = jinv[h];
    }
    c.g[t] = val;
  }
  CheckResult r = check_cocycle2(c);
  if (!r.ok)
    throw InternalError("extension_to_cocycle: extracted data is not a cocycle: " +
                        r.diagnostic);
  return {std::move(band), std::move(c)};
}

}  // namespace cech
