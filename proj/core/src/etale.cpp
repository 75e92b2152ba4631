#include "cech/etale.hpp"

#include <algorithm>
#include <sstream>

namespace cech {

std::vector<int> EtaleSpace::fiber(int base_point) const {
  std::vector<int> out;
  for (int e = 0; e < total.size(); ++e)
    if (projection[e] == base_point) out.push_back(e);
  return out;
}

EtaleSpace make_etale_space(const FinitePoset& base, FinitePoset total,
                            std::vector<int> projection) {
  if (static_cast<int>(projection.size()) != total.size())
    throw ValidationError("EtaleSpace: projection must assign every total point");
  for (int e = 0; e < total.size(); ++e)
    if (projection[e] < 0 || projection[e] >= base.size())
      throw ValidationError("EtaleSpace: projection image out of range");
  for (int d = 0; d < total.size(); ++d)
    for (int e = 0; e < total.size(); ++e)
      if (total.leq(d, e) && !base.leq(projection[d], projection[e]))
        throw ValidationError("EtaleSpace: projection is not monotone");
  // local homeomorphism: minimal open of e maps isomorphically onto the
  // minimal open of its image
  for (int e = 0; e < total.size(); ++e) {
    std::vector<int> up = total.minimal_open(e).points();
    std::vector<int> down = base.minimal_open(projection[e]).points();
    if (up.size() != down.size())
      throw ValidationError("EtaleSpace: projection is not a local homeomorphism");
    std::vector<int> image;
    for (int u : up) image.push_back(projection[u]);
    std::sort(image.begin(), image.end());
    if (image != down)
      throw ValidationError("EtaleSpace: projection is not a local homeomorphism");
    for (int u : up)
      for (int v : up)
        if (base.leq(projection[u], projection[v]) != total.leq(u, v))
          throw ValidationError("EtaleSpace: projection does not reflect order locally");
  }
  return EtaleSpace{&base, std::move(total), std::move(projection)};
}

EtaleSpace etale_space(const Presheaf& p) {
  const FinitePoset& x = p.space();
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> germs;  // (base point, stalk element)
  std::vector<int> proj;
  for (int pt = 0; pt < x.size(); ++pt) {
    int mo = stalk_open(p, pt);
    for (int s = 0; s < p.value_count(mo); ++s) {
      names.push_back(x.point_name(pt) + ":" + p.value_name(mo, s));
      germs.push_back({pt, s});
      proj.push_back(pt);
    }
  }
  std::vector<std::pair<std::string, std::string>> leq;
  for (size_t i = 0; i < germs.size(); ++i)
    for (size_t j = 0; j < germs.size(); ++j) {
      auto [xi, si] = germs[i];
      auto [xj, sj] = germs[j];
      if (!x.leq(xi, xj)) continue;
      if (p.restrict(stalk_open(p, xi), stalk_open(p, xj), si) == sj)
        leq.push_back({names[i], names[j]});
    }
  return make_etale_space(x, FinitePoset(std::move(names), leq), std::move(proj));
}

namespace {

// Monotone sections of the projection over the points of `u`, enumerated in
// canonical order; each section is one fiber element per point.
std::vector<std::vector<int>> sections_over(const EtaleSpace& e, const Open& u) {
  std::vector<int> pts = u.points();
  const int k = static_cast<int>(pts.size());
  std::vector<std::vector<int>> fibers(k);
  for (int i = 0; i < k; ++i) fibers[i] = e.fiber(pts[i]);
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (int cand : fibers[i]) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        if (e.base->leq(pts[j], pts[i]) && !e.total.leq(cur[j], cand)) ok = false;
        if (e.base->leq(pts[i], pts[j]) && !e.total.leq(cand, cur[j])) ok = false;
      }
      if (ok) {
        cur[i] = cand;
        self(self, i + 1);
      }
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

Presheaf sections_sheaf(const EtaleSpace& e) {
  const FinitePoset& x = *e.base;
  const auto& opens = x.all_opens();
  std::vector<std::vector<std::vector<int>>> secs(opens.size());
  std::vector<std::vector<std::string>> labels(opens.size());
  for (size_t u = 0; u < opens.size(); ++u) {
    secs[u] = sections_over(e, opens[u]);
    std::vector<int> pts = opens[u].points();
    for (const auto& s : secs[u]) {
      std::ostringstream os;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ";";
        os << x.point_name(pts[i]) << "=" << e.total.point_name(s[i]);
      }
      if (pts.empty()) os << "()";
      labels[u].push_back(os.str());
    }
  }
  return Presheaf(x, labels, [&](int v, int u, int s) {
    std::vector<int> vpts = opens[v].points();
    std::vector<int> upts = opens[u].points();
    std::vector<int> sub;
    for (int pt : upts) {
      auto it = std::find(vpts.begin(), vpts.end(), pt);
      sub.push_back(secs[v][s][it - vpts.begin()]);
    }
    for (size_t i = 0; i < secs[u].size(); ++i)
      if (secs[u][i] == sub) return static_cast<int>(i);
    throw InternalError("sections_sheaf: restricted section not found");
  });
}

bool etale_isomorphic(const EtaleSpace& a, const EtaleSpace& b, long long budget) {
  if (a.base != b.base)
    throw ValidationError("etale_isomorphic: different base spaces");
  const int n = a.total.size();
  if (n != b.total.size()) return false;
  for (int x = 0; x < a.base->size(); ++x)
    if (a.fiber(x).size() != b.fiber(x).size()) return false;

  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  long long nodes = 0;
  auto rec = [&](auto&& self, int e) -> bool {
    if (e == n) return true;
    for (int f : b.fiber(a.projection[e])) {
      if (used[f]) continue;
      if (++nodes > budget) throw BudgetError("etale_isomorphic: search exceeds budget");
      bool ok = true;
      for (int d = 0; d < e && ok; ++d)
        ok = (a.total.leq(d, e) == b.total.leq(map[d], f)) &&
             (a.total.leq(e, d) == b.total.leq(f, map[d]));
      if (!ok) continue;
      map[e] = f;
      used[f] = true;
      if (self(self, e + 1)) return true;
      used[f] = false;
      map[e] = -1;
    }
    return false;
  };
  return rec(rec, 0);
}

EtaleSpace fibered_product(const EtaleSpace& a, const EtaleSpace& b) {
  if (a.base != b.base)
    throw ValidationError("fibered_product: different base spaces");
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pts;
  std::vector<int> proj;
  for (int e = 0; e < a.total.size(); ++e)
    for (int f = 0; f < b.total.size(); ++f) {
      if (a.projection[e] != b.projection[f]) continue;
      names.push_back("(" + a.total.point_name(e) + "," + b.total.point_name(f) + ")");
      pts.push_back({e, f});
      proj.push_back(a.projection[e]);
    }
  std::vector<std::pair<std::string, std::string>> leq;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j)
      if (a.total.leq(pts[i].first, pts[j].first) &&
          b.total.leq(pts[i].second, pts[j].second))
        leq.push_back({names[i], names[j]});
  return make_etale_space(*a.base, FinitePoset(std::move(names), leq), std::move(proj));
}

}  // namespace cech
