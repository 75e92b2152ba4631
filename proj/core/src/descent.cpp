#include "cech/descent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cech/torsor.hpp"

namespace cech {

Presheaf hom_presheaf(const GroupoidPresheaf& f, const Open& u, int a, int b) {
  int ui = f.open_index(u);
  if (a < 0 || a >= f.at(ui).object_count() || b < 0 || b >= f.at(ui).object_count())
    throw ValidationError("hom_presheaf: objects not in F(U)");
  const FinitePoset& x = f.space();
  const auto& opens = x.all_opens();
  std::vector<std::vector<int>> homs(opens.size());
  std::vector<std::vector<std::string>> labels(opens.size());
  std::vector<int> cut(opens.size());  // open index of V /\ U
  for (size_t v = 0; v < opens.size(); ++v) {
    cut[v] = f.open_index(intersect(opens[v], u));
    int av = f.restrict_obj(ui, cut[v], a);
    int bv = f.restrict_obj(ui, cut[v], b);
    homs[v] = f.at(cut[v]).hom(av, bv);
    for (int h : homs[v]) labels[v].push_back(f.at(cut[v]).arrow_name(h));
  }
  return Presheaf(x, labels, [&](int v, int w, int e) {
    int img = f.restrict_arr(cut[v], cut[w], homs[v][e]);
    for (size_t i = 0; i < homs[w].size(); ++i)
      if (homs[w][i] == img) return static_cast<int>(i);
    throw InternalError("hom_presheaf: restricted arrow left the hom set");
  });
}

int DescentCategory::object_index(const DescentObject& o) const {
  auto it = obj_lookup.find({o.a, o.theta});
  if (it == obj_lookup.end())
    throw InternalError("DescentCategory: object not found");
  return it->second;
}

int DescentCategory::arrow_index(int src, int dst, const std::vector<int>& f) const {
  auto it = arr_lookup.find({src, dst, f});
  if (it == arr_lookup.end())
    throw InternalError("DescentCategory: arrow not found");
  return it->second;
}

DescentCategory descent_category(const Cover& cover, const GroupoidPresheaf& f,
                                 long long max_arrows, bool assemble_groupoid) {
  AbstractNerve nv = nerve(cover, 3);
  const int n = cover.size();
  std::vector<int> chart(n);
  for (int i = 0; i < n; ++i) chart[i] = f.open_index(cover.members[i]);

  std::vector<std::pair<int, int>> pairs;
  std::map<std::pair<int, int>, int> pair_pos, pair_open;
  for (const auto& t : nv.tuples(2)) {
    pair_pos[{t[0], t[1]}] = static_cast<int>(pairs.size());
    pairs.push_back({t[0], t[1]});
    pair_open[{t[0], t[1]}] = f.open_index(cover.intersection(t));
  }
  std::vector<std::vector<int>> triples = nv.tuples(3);

  double log_work = 0;
  for (int i = 0; i < n; ++i)
    log_work += std::log(std::max(1, f.at(chart[i]).object_count()));
  for (const auto& [p, w] : pair_open)
    log_work += std::log(std::max(1, f.at(w).arrow_count()));
  if (log_work > std::log(1e7))
    throw BudgetError("descent_category: object enumeration exceeds budget");

  DescentCategory dc{cover, pairs, {}, {}, false, terminal_groupoid()};

  // objects: families of objects plus gluing arrows satisfying the cocycle
  // condition on triple overlaps
  std::vector<int> a(n), theta(pairs.size());
  auto triple_ok = [&](int upto_pair) {
    const auto& p = pairs[upto_pair];
    for (const auto& t : triples) {
      if (t[1] != p.first || t[2] != p.second) continue;
      int w = f.open_index(cover.intersection(t));
      auto r = [&](int i, int j) {
        return f.restrict_arr(pair_open.at({i, j}), w, theta[pair_pos.at({i, j})]);
      };
      if (f.at(w).compose(r(t[0], t[1]), r(t[1], t[2])) != r(t[0], t[2]))
        return false;
    }
    return true;
  };
  auto theta_rec = [&](auto&& self, int k) -> void {
    if (k == static_cast<int>(pairs.size())) {
      dc.obj_lookup[{a, theta}] = static_cast<int>(dc.objects.size());
      dc.objects.push_back(DescentObject{a, theta});
      return;
    }
    auto [al, be] = pairs[k];
    int w = pair_open.at(pairs[k]);
    int src = f.restrict_obj(chart[be], w, a[be]);
    int dst = f.restrict_obj(chart[al], w, a[al]);
    for (int h = 0; h < f.at(w).arrow_count(); ++h) {
      if (f.at(w).src(h) != src || f.at(w).dst(h) != dst) continue;
      theta[k] = h;
      if (triple_ok(k)) self(self, k + 1);
    }
  };
  auto obj_rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      theta_rec(theta_rec, 0);
      return;
    }
    for (int o = 0; o < f.at(chart[i]).object_count(); ++o) {
      a[i] = o;
      self(self, i + 1);
    }
  };
  obj_rec(obj_rec, 0);

  // arrows: compatible families between each ordered pair of objects
  for (int i = 0; i < static_cast<int>(dc.objects.size()); ++i)
    for (int j = 0; j < static_cast<int>(dc.objects.size()); ++j) {
      const DescentObject& oi = dc.objects[i];
      const DescentObject& oj = dc.objects[j];
      std::vector<std::vector<int>> cand(n);
      for (int al = 0; al < n; ++al)
        cand[al] = f.at(chart[al]).hom(oi.a[al], oj.a[al]);
      std::vector<int> fam(n);
      auto ok_pair = [&](int k) {
        auto [al, be] = pairs[k];
        int w = pair_open.at(pairs[k]);
        int lhs = f.at(w).compose(f.restrict_arr(pair_open.at(pairs[k]), w, oj.theta[k]),
                                  f.restrict_arr(chart[be], w, fam[be]));
        int rhs = f.at(w).compose(f.restrict_arr(chart[al], w, fam[al]),
                                  f.restrict_arr(pair_open.at(pairs[k]), w, oi.theta[k]));
        return lhs == rhs;
      };
      auto rec = [&](auto&& self, int al) -> void {
        if (al == n) {
          for (size_t k = 0; k < pairs.size(); ++k)
            if (!ok_pair(static_cast<int>(k))) return;
          if (static_cast<long long>(dc.arrows.size()) >= max_arrows)
            throw BudgetError("descent_category: arrow count exceeds budget");
          dc.arr_lookup[{i, j, fam}] = static_cast<int>(dc.arrows.size());
          dc.arrows.push_back(DescentArrow{i, j, fam});
          return;
        }
        for (int h : cand[al]) {
          fam[al] = h;
          self(self, al + 1);
        }
      };
      rec(rec, 0);
    }

  if (!assemble_groupoid) return dc;

  // assemble the groupoid
  std::vector<std::string> onames, anames;
  for (const auto& o : dc.objects) {
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
      if (i) os << ";";
      os << cover.labels[i] << "=" << f.at(chart[i]).object_name(o.a[i]);
    }
    for (size_t k = 0; k < pairs.size(); ++k)
      os << ";theta(" << cover.labels[pairs[k].first] << ","
         << cover.labels[pairs[k].second]
         << ")=" << f.at(pair_open.at(pairs[k])).arrow_name(o.theta[k]);
    if (n == 0) os << "()";
    onames.push_back(os.str());
  }
  std::vector<int> src, dst, units(dc.objects.size(), -1);
  for (const auto& ar : dc.arrows) {
    std::ostringstream os;
    os << ar.src << "->" << ar.dst << ":";
    for (int i = 0; i < n; ++i) {
      if (i) os << ";";
      os << f.at(chart[i]).arrow_name(ar.f[i]);
    }
    anames.push_back(os.str());
    src.push_back(ar.src);
    dst.push_back(ar.dst);
  }
  for (int i = 0; i < static_cast<int>(dc.objects.size()); ++i) {
    std::vector<int> id(n);
    for (int al = 0; al < n; ++al)
      id[al] = f.at(chart[al]).unit(dc.objects[i].a[al]);
    units[i] = dc.arrow_index(i, i, id);
  }
  std::vector<std::vector<int>> arrows_by_src(dc.objects.size());
  for (size_t x = 0; x < dc.arrows.size(); ++x)
    arrows_by_src[dc.arrows[x].src].push_back(static_cast<int>(x));
  std::map<std::pair<int, int>, int> comp;
  for (size_t y = 0; y < dc.arrows.size(); ++y)
    for (int x : arrows_by_src[dc.arrows[y].dst]) {
      std::vector<int> cf(n);
      for (int al = 0; al < n; ++al)
        cf[al] = f.at(chart[al]).compose(dc.arrows[x].f[al], dc.arrows[y].f[al]);
      comp[{x, static_cast<int>(y)}] =
          dc.arrow_index(dc.arrows[y].src, dc.arrows[x].dst, cf);
    }
  dc.groupoid = FiniteGroupoid(onames, anames, src, dst, units, comp);
  dc.assembled = true;
  return dc;
}

std::pair<std::vector<int>, std::vector<int>> comparison_maps(
    const GroupoidPresheaf& f, const DescentCategory& dc) {
  int ui = f.open_index(dc.cover.of);
  const int n = dc.cover.size();
  std::vector<int> chart(n);
  for (int i = 0; i < n; ++i) chart[i] = f.open_index(dc.cover.members[i]);

  std::vector<int> obj_map, arr_map;
  for (int b = 0; b < f.at(ui).object_count(); ++b) {
    DescentObject o;
    o.a.resize(n);
    for (int i = 0; i < n; ++i) o.a[i] = f.restrict_obj(ui, chart[i], b);
    for (const auto& p : dc.pairs) {
      int w = f.open_index(dc.cover.intersection({p.first, p.second}));
      o.theta.push_back(f.at(w).unit(f.restrict_obj(ui, w, b)));
    }
    obj_map.push_back(dc.object_index(o));
  }
  for (int h = 0; h < f.at(ui).arrow_count(); ++h) {
    std::vector<int> fam(n);
    for (int i = 0; i < n; ++i) fam[i] = f.restrict_arr(ui, chart[i], h);
    arr_map.push_back(dc.arrow_index(obj_map[f.at(ui).src(h)],
                                     obj_map[f.at(ui).dst(h)], fam));
  }
  return {std::move(obj_map), std::move(arr_map)};
}

GroupoidFunctor comparison_functor(const GroupoidPresheaf& f,
                                   const DescentCategory& dc) {
  if (!dc.assembled)
    throw InternalError("comparison_functor: descent category not assembled");
  auto [obj_map, arr_map] = comparison_maps(f, dc);
  GroupoidFunctor d{&f.at(f.open_index(dc.cover.of)), &dc.groupoid,
                    std::move(obj_map), std::move(arr_map)};
  CheckResult r = check_functor(d);
  if (!r.ok) throw InternalError("comparison_functor: " + r.diagnostic);
  return d;
}

bool comparison_fully_faithful(const GroupoidPresheaf& f,
                               const DescentCategory& dc) {
  auto [obj_map, arr_map] = comparison_maps(f, dc);
  const FiniteGroupoid& s = f.at(f.open_index(dc.cover.of));
  std::map<std::pair<int, int>, long long> hom_count;
  for (const auto& ar : dc.arrows) ++hom_count[{ar.src, ar.dst}];
  for (int a = 0; a < s.object_count(); ++a)
    for (int b = 0; b < s.object_count(); ++b) {
      std::vector<int> image;
      for (int h : s.hom(a, b)) image.push_back(arr_map[h]);
      std::sort(image.begin(), image.end());
      if (std::unique(image.begin(), image.end()) != image.end()) return false;
      auto it = hom_count.find({obj_map[a], obj_map[b]});
      long long target = it == hom_count.end() ? 0 : it->second;
      if (static_cast<long long>(image.size()) != target) return false;
    }
  return true;
}

bool comparison_essentially_surjective(const GroupoidPresheaf& f,
                                       const DescentCategory& dc) {
  auto [obj_map, arr_map] = comparison_maps(f, dc);
  // connected components of the descent category via union-find; a groupoid's
  // isomorphism classes are exactly its connected components
  std::vector<int> parent(dc.objects.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& ar : dc.arrows) parent[find(ar.src)] = find(ar.dst);
  std::vector<char> hit(dc.objects.size(), 0);
  for (int o : obj_map) hit[find(o)] = 1;
  for (size_t i = 0; i < dc.objects.size(); ++i)
    if (!hit[find(static_cast<int>(i))]) return false;
  return true;
}

bool is_prestack(const GroupoidPresheaf& f, long long max_arrows) {
  bool hom_sheaf = true;
  for (int u = 0; u < f.open_count() && hom_sheaf; ++u)
    for (int a = 0; a < f.at(u).object_count() && hom_sheaf; ++a)
      for (int b = 0; b < f.at(u).object_count() && hom_sheaf; ++b)
        hom_sheaf = is_sheaf(hom_presheaf(f, f.open_at(u), a, b));

  bool ff = true;
  for (int u = 0; u < f.open_count() && ff; ++u) {
    DescentCategory dc =
        descent_category(minimal_cover(f.open_at(u)), f, max_arrows, false);
    ff = comparison_fully_faithful(f, dc);
  }
  if (hom_sheaf != ff)
    throw InternalError("is_prestack: Hom-sheaf and full-faithfulness criteria disagree");
  return hom_sheaf;
}

bool is_stack(const GroupoidPresheaf& f, long long max_arrows) {
  if (!is_prestack(f, max_arrows)) return false;
  for (int u = 0; u < f.open_count(); ++u) {
    DescentCategory dc =
        descent_category(minimal_cover(f.open_at(u)), f, max_arrows, false);
    if (!comparison_essentially_surjective(f, dc)) return false;
  }
  return true;
}

Stackification stackify(const GroupoidPresheaf& f, long long max_arrows) {
  if (!is_prestack(f, max_arrows))
    throw ValidationError("stackify: input is not a prestack");
  const FinitePoset& x = f.space();
  const auto& opens = x.all_opens();
  std::vector<DescentCategory> dcs;
  for (const auto& u : opens)
    dcs.push_back(descent_category(minimal_cover(u), f, max_arrows));

  auto project = [&](int v, int u, const std::vector<int>& full,
                     bool arrows) -> std::vector<int> {
    // charts are points, in canonical order; dropping points of v \ u keeps
    // the minimal opens (hence values) unchanged
    std::vector<int> vp = opens[v].points(), up = opens[u].points();
    std::vector<int> pos(up.size());
    for (size_t i = 0; i < up.size(); ++i)
      pos[i] = static_cast<int>(std::find(vp.begin(), vp.end(), up[i]) - vp.begin());
    std::vector<int> out;
    for (int p : pos) out.push_back(full[p]);
    if (!arrows) return out;
    return out;
  };
  auto project_theta = [&](int v, int u, const DescentObject& o) {
    std::vector<int> vp = opens[v].points(), up = opens[u].points();
    std::vector<int> theta;
    for (const auto& p : dcs[u].pairs) {
      int x1 = up[p.first], x2 = up[p.second];
      int j1 = static_cast<int>(std::find(vp.begin(), vp.end(), x1) - vp.begin());
      int j2 = static_cast<int>(std::find(vp.begin(), vp.end(), x2) - vp.begin());
      int k = -1;
      for (size_t q = 0; q < dcs[v].pairs.size(); ++q)
        if (dcs[v].pairs[q] == std::make_pair(j1, j2)) k = static_cast<int>(q);
      if (k < 0) throw InternalError("stackify: pair missing under restriction");
      theta.push_back(o.theta[k]);
    }
    return theta;
  };

  std::vector<FiniteGroupoid> values;
  for (const auto& dc : dcs) values.push_back(dc.groupoid);
  GroupoidPresheaf result(
      x, values,
      [&](int v, int u, int ob) {
        DescentObject o;
        o.a = project(v, u, dcs[v].objects[ob].a, false);
        o.theta = project_theta(v, u, dcs[v].objects[ob]);
        return dcs[u].object_index(o);
      },
      [&](int v, int u, int ar) {
        const DescentArrow& arrow = dcs[v].arrows[ar];
        DescentObject s, d;
        s.a = project(v, u, dcs[v].objects[arrow.src].a, false);
        s.theta = project_theta(v, u, dcs[v].objects[arrow.src]);
        d.a = project(v, u, dcs[v].objects[arrow.dst].a, false);
        d.theta = project_theta(v, u, dcs[v].objects[arrow.dst]);
        return dcs[u].arrow_index(dcs[u].object_index(s), dcs[u].object_index(d),
                                  project(v, u, arrow.f, true));
      });

  Stackification st{std::move(result), {}, {}};
  for (size_t u = 0; u < opens.size(); ++u) {
    GroupoidFunctor d = comparison_functor(f, dcs[u]);
    st.unit_obj.push_back(d.obj_map);
    st.unit_arr.push_back(d.arr_map);
  }
  return st;
}

}  // namespace cech
