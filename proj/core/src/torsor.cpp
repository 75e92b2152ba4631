#include "cech/torsor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cech {

namespace {

std::string open_name(const FinitePoset& x, const Open& u) {
  std::vector<int> pts = u.points();
  std::string s = "{";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ",";
    s += x.point_name(pts[i]);
  }
  return s + "}";
}

}  // namespace

CheckResult check_torsor(const Torsor& t) {
  const GroupPresheaf& g = *t.coeff;
  const Presheaf& s = t.carrier;
  if (&g.space() != &s.space())
    return CheckResult::fail("carrier and coefficients live over different spaces");
  if (static_cast<int>(t.action.size()) != s.open_count())
    return CheckResult::fail("action table missing opens");
  const FinitePoset& x = s.space();

  for (int u = 0; u < s.open_count(); ++u) {
    const auto& act = t.action[u];
    if (static_cast<int>(act.size()) != g.group_at(u).order())
      return CheckResult::fail("action table at " + open_name(x, s.open_at(u)) +
                               " has wrong group dimension");
    for (const auto& row : act)
      if (static_cast<int>(row.size()) != s.value_count(u))
        return CheckResult::fail("action table at " + open_name(x, s.open_at(u)) +
                                 " has wrong section dimension");
    const FiniteGroup& gu = g.group_at(u);
    for (int sec = 0; sec < s.value_count(u); ++sec) {
      if (t.act(u, gu.unit(), sec) != sec)
        return CheckResult::fail("unit does not act trivially at " +
                                 open_name(x, s.open_at(u)));
      for (int a = 0; a < gu.order(); ++a)
        for (int b = 0; b < gu.order(); ++b)
          if (t.act(u, gu.mul(a, b), sec) != t.act(u, a, t.act(u, b, sec)))
            return CheckResult::fail("action is not associative at " +
                                     open_name(x, s.open_at(u)));
    }
  }
  // naturality of the action
  for (int v = 0; v < s.open_count(); ++v)
    for (int u = 0; u < s.open_count(); ++u) {
      if (!s.open_at(u).subset_of(s.open_at(v))) continue;
      for (int a = 0; a < g.group_at(v).order(); ++a)
        for (int sec = 0; sec < s.value_count(v); ++sec)
          if (s.restrict(v, u, t.act(v, a, sec)) !=
              t.act(u, g.restrict(v, u, a), s.restrict(v, u, sec)))
            return CheckResult::fail("action does not commute with restriction " +
                                     open_name(x, s.open_at(v)) + " -> " +
                                     open_name(x, s.open_at(u)));
    }
  if (!is_sheaf(s)) return CheckResult::fail("carrier is not a sheaf");
  // axiom (1): opens with sections cover the space
  for (int pt = 0; pt < x.size(); ++pt)
    if (s.value_count(s.open_index(x.minimal_open(pt))) == 0)
      return CheckResult::fail("axiom (1): no sections near point " + x.point_name(pt));
  // axiom (2): free and transitive on nonempty section sets
  for (int u = 0; u < s.open_count(); ++u) {
    if (s.value_count(u) == 0) continue;
    const FiniteGroup& gu = g.group_at(u);
    if (s.value_count(u) != gu.order())
      return CheckResult::fail("axiom (2): section count differs from group order at " +
                               open_name(x, s.open_at(u)));
    for (int sec = 0; sec < s.value_count(u); ++sec) {
      std::vector<bool> hit(s.value_count(u), false);
      for (int a = 0; a < gu.order(); ++a) {
        int img = t.act(u, a, sec);
        if (hit[img])
          return CheckResult::fail("axiom (2): action is not free at " +
                                   open_name(x, s.open_at(u)));
        hit[img] = true;
      }
    }
  }
  return CheckResult::pass();
}

Torsor trivial_torsor(const GroupPresheaf& g) {
  std::vector<std::vector<std::vector<int>>> action(g.shape().open_count());
  for (int u = 0; u < g.shape().open_count(); ++u) action[u] = g.group_at(u).table();
  return Torsor{&g, g.shape(), std::move(action)};
}

std::vector<std::string> global_sections(const Torsor& t) {
  int w = t.carrier.whole_open_index();
  std::vector<std::string> out;
  for (int s = 0; s < t.carrier.value_count(w); ++s)
    out.push_back(t.carrier.value_name(w, s));
  return out;
}

// ---------------------------------------------------------------------------

Cocycle1::Cocycle1(Cover cover, const GroupPresheaf& coeff,
                   std::map<std::pair<int, int>, int> g)
    : cover_(std::move(cover)),
      nerve_(cech::nerve(*cover_, 3)),
      coeff_(&coeff),
      g_(std::move(g)) {
  if (&coeff.space() != cover_->of.space)
    throw ValidationError("Cocycle1: cover and coefficients live over different spaces");
  check();
}

Cocycle1::Cocycle1(AbstractNerve nv, FiniteGroup group,
                   std::map<std::pair<int, int>, int> g)
    : nerve_(std::move(nv)), group_(std::move(group)), g_(std::move(g)) {
  if (nerve_.depth() < 3)
    throw ValidationError("Cocycle1: nerve depth 3 required for the cocycle identity");
  check();
}

const FiniteGroup& Cocycle1::group_on(int a, int b) const {
  if (cover_mode()) {
    Open w = cover_->intersection(a == b ? std::vector<int>{a} : std::vector<int>{a, b});
    return coeff_->group_at(coeff_->shape().open_index(w));
  }
  return *group_;
}

const FiniteGroup& Cocycle1::group_at(int a) const { return group_on(a, a); }

int Cocycle1::at(int a, int b) const {
  if (!nerve_.inhabited({a, b}))
    throw ValidationError("Cocycle1: value requested on an empty intersection");
  if (a == b) return group_on(a, a).unit();
  if (a < b) return g_.at({a, b});
  return group_on(b, a).inv(g_.at({b, a}));
}

void Cocycle1::check() const {
  const int n = index_count();
  std::map<std::pair<int, int>, int> expected;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!nerve_.inhabited({a, b})) continue;
      if (!cover_mode() && !nerve_.connected({a, b}))
        throw ValidationError(
            "Cocycle1: disconnected intersection needs sheaf coefficients");
      auto it = g_.find({a, b});
      if (it == g_.end())
        throw ValidationError("Cocycle1: missing value on an inhabited pair");
      if (it->second < 0 || it->second >= group_on(a, b).order())
        throw ValidationError("Cocycle1: value out of range");
    }
  for (const auto& [k, v] : g_)
    if (!(k.first < k.second) || !nerve_.inhabited({k.first, k.second}))
      throw ValidationError("Cocycle1: value on a pair that is not sorted-inhabited");

  for (const auto& t : nerve_.tuples(3)) {
    int a = t[0], b = t[1], c = t[2];
    if (!cover_mode()) {
      if (!nerve_.connected(t))
        throw ValidationError(
            "Cocycle1: disconnected triple intersection needs sheaf coefficients");
      const FiniteGroup& g = *group_;
      if (g.mul(at(a, b), at(b, c)) != at(a, c))
        throw ValidationError("Cocycle1: cocycle identity fails on " +
                              tuple_name(nerve_, t));
    } else {
      Open w = cover_->intersection(t);
      const Presheaf& sh = coeff_->shape();
      int wi = sh.open_index(w);
      const FiniteGroup& g = coeff_->group_at(wi);
      auto r = [&](int i, int j, int e) {
        return sh.restrict(sh.open_index(cover_->intersection({i, j})), wi, e);
      };
      if (g.mul(r(a, b, at(a, b)), r(b, c, at(b, c))) != r(a, c, at(a, c)))
        throw ValidationError("Cocycle1: cocycle identity fails on " +
                              tuple_name(nerve_, t));
    }
  }
}

Cocycle1 trivial_cocycle1(const Cover& cover, const GroupPresheaf& coeff) {
  std::map<std::pair<int, int>, int> g;
  AbstractNerve nv = nerve(cover, 3);
  for (int a = 0; a < cover.size(); ++a)
    for (int b = a + 1; b < cover.size(); ++b)
      if (nv.inhabited({a, b})) {
        Open w = cover.intersection({a, b});
        g[{a, b}] = coeff.group_at(coeff.shape().open_index(w)).unit();
      }
  return Cocycle1(cover, coeff, std::move(g));
}

Cocycle1 trivial_cocycle1(const AbstractNerve& nv, const FiniteGroup& group) {
  std::map<std::pair<int, int>, int> g;
  for (const auto& t : nv.tuples(2)) g[{t[0], t[1]}] = group.unit();
  return Cocycle1(nv, group, std::move(g));
}

Cocycle1 torsor_to_cocycle(const Torsor& t, const Cover& cover,
                           const std::vector<int>& sections) {
  const GroupPresheaf& gp = *t.coeff;
  const Presheaf& sh = gp.shape();
  if (static_cast<int>(sections.size()) != cover.size())
    throw ValidationError("torsor_to_cocycle: need one section per cover member");
  for (int a = 0; a < cover.size(); ++a) {
    int u = t.carrier.open_index(cover.members[a]);
    if (t.carrier.value_count(u) == 0)
      throw ValidationError("torsor_to_cocycle: cover member " + cover.labels[a] +
                            " has no sections");
    if (sections[a] < 0 || sections[a] >= t.carrier.value_count(u))
      throw ValidationError("torsor_to_cocycle: section index out of range");
  }
  AbstractNerve nv = nerve(cover, 3);
  std::map<std::pair<int, int>, int> g;
  for (int a = 0; a < cover.size(); ++a)
    for (int b = a + 1; b < cover.size(); ++b) {
      if (!nv.inhabited({a, b})) continue;
      int w = sh.open_index(cover.intersection({a, b}));
      int sa = t.carrier.restrict(t.carrier.open_index(cover.members[a]), w, sections[a]);
      int sb = t.carrier.restrict(t.carrier.open_index(cover.members[b]), w, sections[b]);
      int found = -1;
      for (int e = 0; e < gp.group_at(w).order(); ++e)
        if (t.act(w, e, sb) == sa) {
          found = e;
          break;
        }
      if (found < 0)
        throw InternalError("torsor_to_cocycle: no transporter between sections");
      g[{a, b}] = found;
    }
  return Cocycle1(cover, gp, std::move(g));
}

Torsor cocycle_to_torsor(const Cocycle1& c) {
  if (!c.cover_mode())
    throw ValidationError("cocycle_to_torsor: needs a concrete cover over a space");
  const Cover& cover = c.cover();
  const GroupPresheaf& gp = c.coeff();
  const Presheaf& sh = gp.shape();
  const FinitePoset& x = gp.space();
  const auto& opens = x.all_opens();
  const int n = cover.size();

  // families t_a in G(W /\ U_a) with t_a g_ab = t_b on W /\ U_ab
  std::vector<std::vector<std::vector<int>>> fams(opens.size());
  std::vector<std::vector<std::string>> labels(opens.size());
  for (size_t w = 0; w < opens.size(); ++w) {
    std::vector<int> chart(n);  // open index of W /\ U_a
    for (int a = 0; a < n; ++a)
      chart[a] = sh.open_index(intersect(opens[w], cover.members[a]));
    std::vector<int> cur(n);
    auto ok_pair = [&](int a, int b) {
      Open wab = intersect(opens[w], cover.intersection({a, b}));
      int wi = sh.open_index(wab);
      const FiniteGroup& g = gp.group_at(wi);
      int ta = sh.restrict(chart[a], wi, cur[a]);
      int tb = sh.restrict(chart[b], wi, cur[b]);
      int gab;
      if (c.nerve().inhabited({a, b})) {
        int pij = sh.open_index(cover.intersection({a, b}));
        gab = sh.restrict(pij, wi, c.at(a, b));
      } else {
        gab = g.unit();  // W /\ U_ab is empty, G there is trivial
      }
      return g.mul(ta, gab) == tb;
    };
    auto rec = [&](auto&& self, int a) -> void {
      if (a == n) {
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < n; ++i) {
          if (opens[chart[i]].empty()) continue;
          if (!first) os << ";";
          first = false;
          os << cover.labels[i] << "=" << gp.group_at(chart[i]).element_name(cur[i]);
        }
        if (first) os << "()";
        fams[w].push_back(cur);
        labels[w].push_back(os.str());
        return;
      }
      for (int e = 0; e < gp.group_at(chart[a]).order(); ++e) {
        cur[a] = e;
        bool ok = true;
        for (int b = 0; b < a && ok; ++b) ok = ok_pair(b, a);
        if (ok) self(self, a + 1);
      }
    };
    rec(rec, 0);
  }

  auto family_index = [&](int w, const std::vector<int>& f) {
    for (size_t i = 0; i < fams[w].size(); ++i)
      if (fams[w][i] == f) return static_cast<int>(i);
    throw InternalError("cocycle_to_torsor: family not found");
  };

  Presheaf carrier(x, labels, [&](int v, int w, int f) {
    std::vector<int> sub(n);
    for (int a = 0; a < n; ++a) {
      int cv = sh.open_index(intersect(opens[v], cover.members[a]));
      int cw = sh.open_index(intersect(opens[w], cover.members[a]));
      sub[a] = sh.restrict(cv, cw, fams[v][f][a]);
    }
    return family_index(w, sub);
  });
  std::vector<std::vector<std::vector<int>>> action(opens.size());
  for (size_t w = 0; w < opens.size(); ++w) {
    const FiniteGroup& gw = gp.group_at(static_cast<int>(w));
    action[w].assign(gw.order(), std::vector<int>(fams[w].size()));
    for (int h = 0; h < gw.order(); ++h)
      for (size_t f = 0; f < fams[w].size(); ++f) {
        std::vector<int> img(n);
        for (int a = 0; a < n; ++a) {
          int cw = sh.open_index(intersect(opens[w], cover.members[a]));
          img[a] = gp.group_at(cw).mul(sh.restrict(static_cast<int>(w), cw, h),
                                       fams[w][f][a]);
        }
        action[w][h][f] = family_index(static_cast<int>(w), img);
      }
  }
  return Torsor{&gp, std::move(carrier), std::move(action)};
}

namespace {

bool same_site(const Cocycle1& g, const Cocycle1& h) {
  if (g.cover_mode() != h.cover_mode()) return false;
  if (g.index_count() != h.index_count()) return false;
  if (g.cover_mode()) {
    if (&g.coeff() != &h.coeff()) return false;
    for (int a = 0; a < g.index_count(); ++a)
      if (!(g.cover().members[a] == h.cover().members[a])) return false;
    return true;
  }
  return g.constant_group() == h.constant_group() &&
         g.nerve().tuples(2) == h.nerve().tuples(2);
}

}  // namespace

std::optional<std::vector<int>> cocycles1_equivalent(const Cocycle1& g,
                                                     const Cocycle1& h,
                                                     long long budget) {
  if (!same_site(g, h))
    throw ValidationError("cocycles1_equivalent: cocycles live on different covers");
  const int n = g.index_count();
  double log_total = 0;
  for (int a = 0; a < n; ++a) log_total += std::log(std::max(1, g.group_at(a).order()));
  if (log_total > std::log(static_cast<double>(budget)))
    throw BudgetError("cocycles1_equivalent: witness space exceeds budget");

  std::vector<std::pair<int, int>> pairs;
  for (const auto& t : g.nerve().tuples(2)) pairs.push_back({t[0], t[1]});

  std::vector<int> f(n, 0);
  while (true) {
    bool ok = true;
    for (const auto& [a, b] : pairs) {
      int lhs, rhs;
      if (g.cover_mode()) {
        const Presheaf& sh = g.coeff().shape();
        int w = sh.open_index(g.cover().intersection({a, b}));
        const FiniteGroup& gw = g.coeff().group_at(w);
        int fa = sh.restrict(sh.open_index(g.cover().members[a]), w, f[a]);
        int fb = sh.restrict(sh.open_index(g.cover().members[b]), w, f[b]);
        lhs = gw.mul(fa, g.at(a, b));
        rhs = gw.mul(h.at(a, b), fb);
      } else {
        const FiniteGroup& gw = g.constant_group();
        lhs = gw.mul(f[a], g.at(a, b));
        rhs = gw.mul(h.at(a, b), f[b]);
      }
      if (lhs != rhs) {
        ok = false;
        break;
      }
    }
    if (ok) return f;
    int i = n - 1;
    while (i >= 0 && ++f[i] == g.group_at(i).order()) f[i--] = 0;
    if (i < 0) break;
  }
  return std::nullopt;
}

namespace {

template <typename MakeCocycle>
std::vector<Cocycle1> h1_generic(const AbstractNerve& nv,
                                 const std::function<int(int, int)>& order_on,
                                 MakeCocycle make, long long budget) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& t : nv.tuples(2)) pairs.push_back({t[0], t[1]});
  const int m = static_cast<int>(pairs.size());
  double log_total = 0;
  for (const auto& [a, b] : pairs) log_total += std::log(std::max(1, order_on(a, b)));
  if (log_total > std::log(static_cast<double>(budget)))
    throw BudgetError("h1: cocycle space exceeds budget");

  std::vector<Cocycle1> reps;
  std::vector<int> cur(m, 0);
  while (true) {
    std::map<std::pair<int, int>, int> g;
    for (int i = 0; i < m; ++i) g[pairs[i]] = cur[i];
    std::optional<Cocycle1> cand = make(std::move(g));
    if (cand) {
      bool found = false;
      for (const auto& rep : reps)
        if (cocycles1_equivalent(rep, *cand, budget)) {
          found = true;
          break;
        }
      if (!found) reps.push_back(std::move(*cand));
    }
    int i = m - 1;
    while (i >= 0 && ++cur[i] == order_on(pairs[i].first, pairs[i].second)) cur[i--] = 0;
    if (i < 0) break;
    if (m == 0) break;
  }
  if (m == 0) {
    // no inhabited pairs: only the empty cocycle
    std::optional<Cocycle1> only = make({});
    reps.clear();
    if (only) reps.push_back(std::move(*only));
  }
  return reps;
}

}  // namespace

std::vector<Cocycle1> h1(const Cover& cover, const GroupPresheaf& coeff,
                         long long budget) {
  AbstractNerve nv = nerve(cover, 3);
  auto order_on = [&](int a, int b) {
    Open w = cover.intersection({a, b});
    return coeff.group_at(coeff.shape().open_index(w)).order();
  };
  auto make = [&](std::map<std::pair<int, int>, int> g) -> std::optional<Cocycle1> {
    try {
      return Cocycle1(cover, coeff, std::move(g));
    } catch (const ValidationError&) {
      return std::nullopt;
    }
  };
  return h1_generic(nv, order_on, make, budget);
}

std::vector<Cocycle1> h1(const AbstractNerve& nv, const FiniteGroup& group,
                         long long budget) {
  auto order_on = [&](int, int) { return group.order(); };
  auto make = [&](std::map<std::pair<int, int>, int> g) -> std::optional<Cocycle1> {
    try {
      return Cocycle1(nv, group, std::move(g));
    } catch (const ValidationError&) {
      return std::nullopt;
    }
  };
  return h1_generic(nv, order_on, make, budget);
}

std::vector<Cocycle1> h1_colim(const GroupPresheaf& coeff, long long budget) {
  return h1(minimal_cover(coeff.space().whole()), coeff, budget);
}

std::optional<std::vector<std::vector<int>>> torsor_isomorphism(const Torsor& s,
                                                                const Torsor& t,
                                                                long long budget) {
  if (s.coeff != t.coeff)
    throw ValidationError("torsor_isomorphism: different coefficient sheaves");
  const Presheaf& sc = s.carrier;
  const Presheaf& tc = t.carrier;
  const FinitePoset& x = sc.space();
  const GroupPresheaf& gp = *s.coeff;

  std::vector<int> mo(x.size());
  for (int p = 0; p < x.size(); ++p) mo[p] = sc.open_index(x.minimal_open(p));
  double log_total = 0;
  for (int p = 0; p < x.size(); ++p)
    log_total += std::log(std::max(1, tc.value_count(mo[p])));
  if (log_total > std::log(static_cast<double>(budget)))
    throw BudgetError("torsor_isomorphism: search exceeds budget");

  // per point: the equivariant map on the minimal open, as an image table
  std::vector<std::vector<int>> mx(x.size());
  std::vector<std::vector<int>> result;

  auto build_point_map = [&](int p, int image_of_first) {
    int u = mo[p];
    const FiniteGroup& gu = gp.group_at(u);
    std::vector<int> m(sc.value_count(u), -1);
    for (int sec = 0; sec < sc.value_count(u); ++sec)
      for (int e = 0; e < gu.order(); ++e)
        if (s.act(u, e, 0) == sec) {
          m[sec] = t.act(u, e, image_of_first);
          break;
        }
    return m;
  };

  auto consistent = [&](int p, int q) {  // maps at p and q agree on the overlap
    int up = mo[p], uq = mo[q];
    int v = sc.open_index(intersect(sc.open_at(up), sc.open_at(uq)));
    for (int a = 0; a < sc.value_count(up); ++a)
      for (int b = 0; b < sc.value_count(uq); ++b)
        if (sc.restrict(up, v, a) == sc.restrict(uq, v, b) &&
            tc.restrict(up, v, mx[p][a]) != tc.restrict(uq, v, mx[q][b]))
          return false;
    return true;
  };

  auto assemble = [&]() -> bool {
    result.assign(sc.open_count(), {});
    for (int u = 0; u < sc.open_count(); ++u) {
      result[u].assign(sc.value_count(u), -1);
      std::vector<int> pts = sc.open_at(u).points();
      for (int sec = 0; sec < sc.value_count(u); ++sec) {
        int found = -1;
        for (int cand = 0; cand < tc.value_count(u) && found < 0; ++cand) {
          bool match = true;
          for (int p : pts)
            if (tc.restrict(u, mo[p], cand) != mx[p][sc.restrict(u, mo[p], sec)]) {
              match = false;
              break;
            }
          if (match) found = cand;
        }
        if (found < 0) return false;
        result[u][sec] = found;
      }
      // bijectivity on this open
      if (sc.value_count(u) != tc.value_count(u)) return false;
      std::vector<bool> hit(tc.value_count(u), false);
      for (int v : result[u]) {
        if (hit[v]) return false;
        hit[v] = true;
      }
    }
    // equivariance of the assembled map
    for (int u = 0; u < sc.open_count(); ++u)
      for (int e = 0; e < gp.group_at(u).order(); ++e)
        for (int sec = 0; sec < sc.value_count(u); ++sec)
          if (result[u][s.act(u, e, sec)] != t.act(u, e, result[u][sec])) return false;
    return true;
  };

  auto rec = [&](auto&& self, int p) -> bool {
    if (p == x.size()) return assemble();
    if (sc.value_count(mo[p]) == 0) {
      mx[p].clear();
      return tc.value_count(mo[p]) == 0 && self(self, p + 1);
    }
    for (int img = 0; img < tc.value_count(mo[p]); ++img) {
      mx[p] = build_point_map(p, img);
      bool ok = true;
      for (int q = 0; q < p && ok; ++q) ok = consistent(p, q);
      if (ok && self(self, p + 1)) return true;
    }
    return false;
  };
  if (rec(rec, 0)) return result;
  return std::nullopt;
}

}  // namespace cech
