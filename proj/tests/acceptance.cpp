// Acceptance suite: one line per numbered requirement, nonzero exit when any
// of them fails. Each check recomputes its expected values from independent
// first-principles enumerations rather than from the functions under test.
//
// Usage: acceptance [repo-root [cech-binary]]
//   repo-root    directory containing data/ and tests/goldens/ (for the
//                golden-report replay in requirement 9)
//   cech-binary  path to the CLI executable; replay is skipped when absent

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cech/cochain.hpp"
#include "cech/descent.hpp"
#include "cech/etale.hpp"
#include "cech/extension.hpp"
#include "cech/gerbe.hpp"
#include "cech/torsor.hpp"

using namespace cech;

namespace {

constexpr long long kBig = 4'000'000'000'000'000'000LL;
constexpr long long kEnumBudget = 10'000'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---------------------------------------------------------------------------
// shared example spaces

FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

FinitePoset hexagon() {
  return FinitePoset({"u0", "u1", "u2", "c01", "c12", "c20"},
                     {{"c01", "u0"}, {"c01", "u1"}, {"c12", "u1"}, {"c12", "u2"},
                      {"c20", "u2"}, {"c20", "u0"}});
}

// boundary of the 3-simplex: all pairs and triples, no quadruple
AbstractNerve sphere2() {
  std::vector<std::vector<int>> t;
  for (int i = 0; i < 4; ++i) t.push_back({i});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) t.push_back({i, j});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) t.push_back({i, j, k});
  return AbstractNerve({"A", "B", "C", "D"}, t, 4);
}

AbstractNerve simplex3() {
  std::vector<std::vector<int>> t;
  for (int i = 0; i < 4; ++i) t.push_back({i});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) t.push_back({i, j});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) t.push_back({i, j, k});
  t.push_back({0, 1, 2, 3});
  return AbstractNerve({"A", "B", "C", "D"}, t, 4);
}

// boundary of the 4-simplex: five indices, everything up to quadruples
AbstractNerve sphere3() {
  std::vector<std::vector<int>> t;
  for (int i = 0; i < 5; ++i) t.push_back({i});
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) t.push_back({i, j});
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k) t.push_back({i, j, k});
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k)
        for (int l = k + 1; l < 5; ++l) t.push_back({i, j, k, l});
  return AbstractNerve({"A", "B", "C", "D", "E"}, t, 4);
}

AbstractNerve triangle_nerve() {
  return AbstractNerve({"U", "V", "W"},
                       {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}, 3);
}

std::vector<int> idmap(const FiniteGroup& g) {
  std::vector<int> m(g.order());
  std::iota(m.begin(), m.end(), 0);
  return m;
}

BandPresentation constant_band(const AbstractNerve& nv, const FiniteGroup& k) {
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
  for (const auto& p : nv.tuples(2)) lambda[{p[0], p[1]}] = {idmap(k)};
  return BandPresentation(nv, std::vector<FiniteGroup>(nv.index_count(), k),
                          std::move(lambda));
}

// ---------------------------------------------------------------------------
// 1. every sheaf on every poset with at most 4 points (stalk sizes <= 3) is
//    recovered by the germ-space / sections round trips, in both directions

struct SmallPoset {
  int n = 0;
  std::vector<std::vector<bool>> lt;  // strict order
};

// all posets with up to `maxn` points, one representative per isomorphism type
std::vector<SmallPoset> small_posets(int maxn) {
  std::vector<SmallPoset> out;
  for (int n = 0; n <= maxn; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) slots.push_back({i, j});
    for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
      std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
      for (size_t s = 0; s < slots.size(); ++s)
        if ((mask >> s) & 1u) lt[slots[s].first][slots[s].second] = true;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j) {
          if (lt[i][j] && lt[j][i]) ok = false;
          for (int k = 0; k < n && ok; ++k)
            if (lt[i][j] && lt[j][k] && !lt[i][k]) ok = false;
        }
      if (!ok) continue;
      auto encode = [&](const std::vector<int>& perm) {
        std::string e(static_cast<size_t>(n) * n, '0');
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (lt[i][j]) e[static_cast<size_t>(perm[i]) * n + perm[j]] = '1';
        return e;
      };
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::string self = encode(perm), best = self;
      while (std::next_permutation(perm.begin(), perm.end()))
        best = std::min(best, encode(perm));
      if (self == best) out.push_back({n, lt});
    }
  }
  return out;
}

// one functor on a poset: a stalk size per point and a map per strict pair,
// composing along all chains
struct StalkFunctor {
  std::vector<int> sizes;
  std::map<std::pair<int, int>, std::vector<int>> maps;
};

// enumerate every functor with the given stalk sizes; calls sink for each
void for_each_functor(const SmallPoset& p, const std::vector<int>& sizes,
                      const std::function<void(const StalkFunctor&)>& sink) {
  const int n = p.n;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.lt[i][j]) pairs.push_back({i, j});
  // composition triples, checked once all three participating maps are set
  std::vector<std::vector<std::vector<int>>> checks(pairs.size() + 1);
  auto pair_idx = [&](int a, int b) {
    for (size_t k = 0; k < pairs.size(); ++k)
      if (pairs[k] == std::make_pair(a, b)) return static_cast<int>(k);
    return -1;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (p.lt[a][b] && p.lt[b][c]) {
          int i1 = pair_idx(a, b), i2 = pair_idx(b, c), i3 = pair_idx(a, c);
          int last = std::max({i1, i2, i3});
          checks[last + 1].push_back({i1, i2, i3});
        }
  StalkFunctor f;
  f.sizes = sizes;
  std::vector<std::vector<int>> cur(pairs.size());
  auto triple_ok = [&](const std::vector<int>& t) {
    auto [i1, i2, i3] = std::tuple{t[0], t[1], t[2]};
    const auto& m1 = cur[i1];
    const auto& m2 = cur[i2];
    const auto& m3 = cur[i3];
    for (size_t e = 0; e < m1.size(); ++e)
      if (m2[m1[e]] != m3[e]) return false;
    return true;
  };
  auto rec = [&](auto&& self, size_t k) -> void {
    if (k == pairs.size()) {
      f.maps.clear();
      for (size_t i = 0; i < pairs.size(); ++i) f.maps[pairs[i]] = cur[i];
      sink(f);
      return;
    }
    auto [x, y] = pairs[k];
    const int sx = sizes[x], sy = sizes[y];
    if (sx == 0) {
      cur[k].clear();
      bool ok = true;
      for (const auto& t : checks[k + 1])
        if (!triple_ok(t)) { ok = false; break; }
      if (ok) self(self, k + 1);
      return;
    }
    if (sy == 0) return;  // no map from a nonempty stalk into an empty one
    std::vector<int> m(sx, 0);
    while (true) {
      cur[k] = m;
      bool ok = true;
      for (const auto& t : checks[k + 1])
        if (!triple_ok(t)) { ok = false; break; }
      if (ok) self(self, k + 1);
      int i = 0;
      while (i < sx && ++m[i] == sy) m[i++] = 0;
      if (i == sx) break;
    }
  };
  rec(rec, 0);
}

// the germ space a functor presents, over the given base
EtaleSpace functor_space(const FinitePoset& base, const SmallPoset& p,
                         const StalkFunctor& f) {
  std::vector<std::string> names;
  std::vector<int> proj, offset(p.n, 0);
  for (int x = 0; x < p.n; ++x) {
    offset[x] = static_cast<int>(names.size());
    for (int s = 0; s < f.sizes[x]; ++s) {
      names.push_back(base.point_name(x) + "#" + std::to_string(s));
      proj.push_back(x);
    }
  }
  std::vector<std::pair<std::string, std::string>> leq;
  for (const auto& [pr, m] : f.maps) {
    auto [x, y] = pr;
    for (int s = 0; s < f.sizes[x]; ++s)
      leq.push_back({names[offset[x] + s], names[offset[y] + m[s]]});
  }
  return make_etale_space(base, FinitePoset(std::move(names), leq),
                          std::move(proj));
}

// the canonical comparison from a sheaf into the sections of its germ space
// must be a natural bijection on every open
bool unit_is_isomorphism(const Presheaf& p, const EtaleSpace& germs,
                         const Presheaf& q, std::string* why) {
  const FinitePoset& x = p.space();
  std::vector<int> mo(x.size()), offset(x.size(), 0);
  int acc = 0;
  for (int pt = 0; pt < x.size(); ++pt) {
    mo[pt] = stalk_open(p, pt);
    offset[pt] = acc;
    acc += p.value_count(mo[pt]);
  }
  PresheafMorphism m{&p, &q, std::vector<std::vector<int>>(p.open_count())};
  for (int u = 0; u < p.open_count(); ++u) {
    std::vector<int> pts = p.open_at(u).points();
    for (int e = 0; e < p.value_count(u); ++e) {
      std::ostringstream label;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (i) label << ";";
        int germ = p.restrict(u, mo[pts[i]], e);
        label << x.point_name(pts[i]) << "="
              << germs.total.point_name(offset[pts[i]] + germ);
      }
      if (pts.empty()) label << "()";
      try {
        m.component[u].push_back(q.value_index(u, label.str()));
      } catch (const ValidationError&) {
        if (why) *why = "section label " + label.str() + " not found";
        return false;
      }
    }
  }
  if (!m.is_isomorphism()) {
    if (why) *why = "comparison map is not bijective on some open";
    return false;
  }
  if (!naturality_holds(m)) {
    if (why) *why = "comparison map is not natural";
    return false;
  }
  return true;
}

// is this functor the least among all per-point relabelings of its stalks?
// the round-trip property is invariant under sheaf isomorphism, so checking
// one representative per relabeling orbit loses no coverage
bool canonical_functor(const SmallPoset& p, const StalkFunctor& f) {
  static const std::vector<std::vector<std::vector<int>>> perms = {
      {{}},
      {{0}},
      {{0, 1}, {1, 0}},
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const int n = p.n;
  std::vector<int> choice(n, 0);
  std::vector<const std::vector<int>*> sigma(n), sigma_inv(n);
  std::vector<std::vector<int>> inv_store(n);
  while (true) {
    size_t bump = 0;
    while (bump < choice.size() &&
           ++choice[bump] == static_cast<int>(perms[f.sizes[bump]].size()))
      choice[bump++] = 0;
    if (bump == choice.size()) return true;  // identity was least
    for (int x = 0; x < n; ++x) {
      sigma[x] = &perms[f.sizes[x]][choice[x]];
      inv_store[x].assign(f.sizes[x], 0);
      for (int e = 0; e < f.sizes[x]; ++e) inv_store[x][(*sigma[x])[e]] = e;
    }
    int cmp = 0;  // -1: relabeled smaller, +1: larger
    for (const auto& [pr, m] : f.maps) {
      auto [x, y] = pr;
      for (int e = 0; e < f.sizes[x] && cmp == 0; ++e) {
        int relabeled = (*sigma[y])[m[inv_store[x][e]]];
        if (relabeled != m[e]) cmp = relabeled < m[e] ? -1 : 1;
      }
      if (cmp != 0) break;
    }
    if (cmp < 0) return false;
  }
}

Outcome requirement1() {
  std::vector<SmallPoset> posets = small_posets(4);
  struct Task {
    const SmallPoset* p;
    std::vector<int> sizes;
  };
  std::vector<Task> tasks;
  for (const auto& p : posets) {
    std::vector<int> sizes(std::max(p.n, 1), 0);
    if (p.n == 0) {
      tasks.push_back({&p, {}});
      continue;
    }
    while (true) {
      tasks.push_back({&p, sizes});
      int i = 0;
      while (i < p.n && ++sizes[i] == 4) sizes[i++] = 0;
      if (i == p.n) break;
    }
  }
  std::atomic<long long> functors{0}, representatives{0}, failures{0};
  std::mutex mu;
  std::string first_why;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t ti; (ti = next.fetch_add(1)) < tasks.size();) {
      const Task& t = tasks[ti];
      const SmallPoset& sp = *t.p;
      std::vector<std::string> names;
      for (int i = 0; i < sp.n; ++i) names.push_back("p" + std::to_string(i));
      std::vector<std::pair<std::string, std::string>> leq;
      for (int i = 0; i < sp.n; ++i)
        for (int j = 0; j < sp.n; ++j)
          if (sp.lt[i][j]) leq.push_back({names[i], names[j]});
      FinitePoset base(names, leq);
      for_each_functor(sp, t.sizes, [&](const StalkFunctor& f) {
        functors.fetch_add(1);
        if (!canonical_functor(sp, f)) return;
        representatives.fetch_add(1);
        std::string why;
        try {
          EtaleSpace e = functor_space(base, sp, f);
          Presheaf p = sections_sheaf(e);
          EtaleSpace e2 = etale_space(p);
          if (!etale_isomorphic(e, e2, kBig)) {
            why = "germ space of the sections sheaf differs from the input";
          } else {
            Presheaf p2 = sections_sheaf(e2);
            std::string sub;
            if (!unit_is_isomorphism(p, e2, p2, &sub))
              why = "sections sheaf not recovered: " + sub;
          }
        } catch (const std::exception& ex) {
          why = std::string("exception: ") + ex.what();
        }
        if (!why.empty()) {
          failures.fetch_add(1);
          std::lock_guard<std::mutex> lk(mu);
          if (first_why.empty()) first_why = why;
        }
      });
    }
  };
  unsigned nthreads = std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  std::ostringstream os;
  os << "sheaf <-> germ-space round trips: " << posets.size() << " posets, "
     << functors.load() << " sheaf presentations ("
     << representatives.load() << " up to stalk relabeling), "
     << failures.load() << " failures";
  if (failures.load() > 0) os << " (first: " << first_why << ")";
  return {failures.load() == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 2. sheafification: the result is a sheaf, the unit is surjective on stalks,
//    and every morphism into a sheaf factors uniquely through the unit

Presheaf collapse_presheaf(const FinitePoset& x, int m) {
  const auto& opens = x.all_opens();
  std::uint64_t whole = x.whole().bits;
  std::vector<std::vector<std::string>> vals(opens.size());
  for (size_t u = 0; u < opens.size(); ++u) {
    if (opens[u].bits == whole && whole != 0) {
      for (int i = 0; i < m; ++i) vals[u].push_back("w" + std::to_string(i));
    } else {
      vals[u] = {"*"};
    }
  }
  return Presheaf(x, vals, [whole, &x](int v, int u, int e) {
    return x.all_opens()[v].bits == x.all_opens()[u].bits ? e : 0;
  });
}

Outcome requirement2() {
  std::deque<FinitePoset> spaces;
  spaces.push_back(circle4());
  spaces.push_back(hexagon());
  spaces.push_back(FinitePoset({"x", "y"}, {{"x", "y"}}));            // 2-chain
  spaces.push_back(FinitePoset({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}}));
  spaces.push_back(FinitePoset({"m", "p", "q"}, {{"m", "p"}, {"m", "q"}}));
  spaces.push_back(FinitePoset({"p", "q"}, {}));                      // 2 points
  spaces.push_back(FinitePoset({"pt"}, {}));
  const FinitePoset& hex = spaces[1];

  // corpus constraint: sheafified section sets stay small enough for the
  // exhaustive morphism enumeration (it iterates |target|^|source| candidate
  // maps per open), so larger value sets appear only on connected opens
  std::vector<std::pair<const FinitePoset*, Presheaf>> corpus;
  auto add = [&](const FinitePoset& x, Presheaf p) {
    corpus.push_back({&x, std::move(p)});
  };
  for (const FinitePoset& x : spaces) {
    add(x, constant_presheaf(x, {"s0"}));
    if (&x != &hex) add(x, constant_presheaf(x, {"s0", "s1"}));
    add(x, collapse_presheaf(x, 2));
    add(x, collapse_presheaf(x, 3));
    add(x, collapse_presheaf(x, 4));
    if (&x != &hex)
      add(x, product(collapse_presheaf(x, 2), constant_presheaf(x, {"s0", "s1"})));
  }
  for (const FinitePoset* x : {&spaces[2], &spaces[3], &spaces[6]}) {
    add(*x, constant_presheaf(*x, {"s0", "s1", "s2"}));
    add(*x, product(constant_presheaf(*x, {"s0", "s1"}),
                    constant_presheaf(*x, {"t0", "t1"})));
    add(*x, product(collapse_presheaf(*x, 2), collapse_presheaf(*x, 3)));
  }
  for (const FinitePoset* x : {&spaces[0], &spaces[4], &spaces[6]})
    add(*x, sections_sheaf(etale_space(constant_presheaf(*x, {"s0", "s1"}))));

  std::map<const FinitePoset*, Presheaf> second_target;
  for (const FinitePoset& x : spaces)
    second_target.insert({&x, sheafify(constant_presheaf(x, {"s", "t"})).result});

  int failures = 0;
  std::string why;
  for (const auto& [x, p] : corpus) {
    SheafificationStep sh = sheafify(p);
    if (!is_sheaf(sh.result)) {
      ++failures;
      if (why.empty()) why = "sheafify output fails the sheaf condition";
      continue;
    }
    bool locally_surjective = true;
    for (int pt = 0; pt < x->size(); ++pt) {
      int u = stalk_open(p, pt);
      std::vector<bool> hit(sh.result.value_count(u), false);
      for (int e = 0; e < p.value_count(u); ++e) hit[sh.unit[u][e]] = true;
      if (std::find(hit.begin(), hit.end(), false) != hit.end())
        locally_surjective = false;
    }
    if (!locally_surjective) {
      ++failures;
      if (why.empty()) why = "unit is not surjective on some stalk";
      continue;
    }
    for (const Presheaf* s : {&sh.result, &second_target.at(x)}) {
      auto into = all_morphisms(p, *s, kBig);
      auto from = all_morphisms(sh.result, *s, kBig);
      for (const auto& m : into) {
        int count = 0;
        for (const auto& f : from) {
          bool same = true;
          for (int u = 0; u < p.open_count() && same; ++u)
            for (int e = 0; e < p.value_count(u) && same; ++e)
              if (f.component[u][sh.unit[u][e]] != m.component[u][e]) same = false;
          if (same) ++count;
        }
        if (count != 1) {
          ++failures;
          if (why.empty())
            why = "a morphism into a sheaf has " + std::to_string(count) +
                  " factorizations through the unit";
          goto next_presheaf;
        }
      }
    }
  next_presheaf:;
  }
  std::ostringstream os;
  os << "sheafification universality: " << corpus.size() << " presheaves, "
     << failures << " failures";
  if (failures) os << " (first: " << why << ")";
  return {corpus.size() >= 50 && failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 3. degree-1 classification: cocycle classes = torsor isomorphism classes =
//    conjugacy classes of the constant group

// every torsor trivializes over a cover whose charts have minimum points, so
// enumerating all cocycles over such a cover reaches every torsor
int torsor_class_count(const Cover& cover, const GroupPresheaf& coeff,
                       std::string* why) {
  std::vector<std::pair<int, int>> prs;
  std::vector<int> radix;
  const Presheaf& shape = coeff.shape();
  for (int a = 0; a < cover.size(); ++a)
    for (int b = a + 1; b < cover.size(); ++b)
      if (!cover.intersection({a, b}).empty()) {
        prs.push_back({a, b});
        radix.push_back(
            coeff.group_at(shape.open_index(cover.intersection({a, b}))).order());
      }
  std::vector<Torsor> reps;
  std::vector<int> digits(prs.size(), 0);
  while (true) {
    std::map<std::pair<int, int>, int> g;
    for (size_t i = 0; i < prs.size(); ++i) g[prs[i]] = digits[i];
    bool valid = true;
    std::optional<Torsor> t;
    try {
      Cocycle1 c(cover, coeff, g);
      t = cocycle_to_torsor(c);
      if (!check_torsor(*t).ok) {
        if (why) *why = "glued cocycle fails the torsor axioms";
        return -1;
      }
    } catch (const ValidationError&) {
      valid = false;  // the assignment violates the cocycle identity
    }
    if (valid) {
      bool matched = false;
      for (const auto& r : reps)
        if (torsor_isomorphism(r, *t, kEnumBudget)) {
          matched = true;
          break;
        }
      if (!matched) reps.push_back(std::move(*t));
    }
    size_t i = 0;
    while (i < digits.size() && ++digits[i] == radix[i]) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return static_cast<int>(reps.size());
}

Outcome requirement3() {
  FinitePoset circ = circle4();
  FinitePoset hex = hexagon();
  Cover two_arcs(circ.whole(), {"U", "V"},
                 {circ.minimal_open("c"), circ.minimal_open("d")});
  Cover three_arcs(hex.whole(), {"U0", "U1", "U2"},
                   {hex.minimal_open("c01"), hex.minimal_open("c12"),
                    hex.minimal_open("c20")});
  AbstractNerve tri = triangle_nerve();
  std::vector<std::pair<std::string, FiniteGroup>> groups = {
      {"Z2", cyclic_group(2)},
      {"Z3", cyclic_group(3)},
      {"S3", symmetric3()},
      {"Z2xZ2", klein_four()}};
  int failures = 0;
  std::string why;
  for (const auto& [name, g] : groups) {
    int conj = conjugacy_class_count(g);
    size_t h1_tri = h1(tri, g, kEnumBudget).size();
    GroupPresheaf gc = constant_group_sheaf(circ, g);
    GroupPresheaf gh = constant_group_sheaf(hex, g);
    size_t h1_circ = h1_colim(gc, kEnumBudget).size();
    size_t h1_hex = h1(three_arcs, gh, kEnumBudget).size();
    int tor_circ = torsor_class_count(two_arcs, gc, &why);
    int tor_hex = torsor_class_count(three_arcs, gh, &why);
    if (static_cast<int>(h1_tri) != conj || static_cast<int>(h1_circ) != conj ||
        static_cast<int>(h1_hex) != conj || tor_circ != conj || tor_hex != conj) {
      ++failures;
      if (why.empty()) {
        std::ostringstream w;
        w << name << ": classes " << h1_tri << "/" << h1_circ << "/" << h1_hex
          << ", torsors " << tor_circ << "/" << tor_hex << ", conjugacy " << conj;
        why = w.str();
      }
    }
  }
  std::ostringstream os;
  os << "torsor classification matches conjugacy classes for Z2, Z3, S3, "
        "Z2xZ2 on the triangle nerve and both circles";
  if (failures) os << ": " << failures << " mismatches (" << why << ")";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 4. descent: global components of the stackified constant group match the
//    degree-1 classification, and full faithfulness of the comparison functor
//    is equivalent to the hom-sheaf condition

// number of connected components of the descent category over the cover of
// the whole space by minimal opens, without materializing its arrows
int minimal_descent_components(const FinitePoset& x, const GroupoidPresheaf& f) {
  Cover cov = minimal_cover(x.whole());
  const int n = cov.size();
  std::vector<int> chart(n);
  for (int i = 0; i < n; ++i) chart[i] = f.open_index(cov.members[i]);
  std::vector<std::pair<int, int>> prs;
  std::vector<int> pr_open;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Open w = intersect(cov.members[a], cov.members[b]);
      if (w.empty()) continue;
      prs.push_back({a, b});
      pr_open.push_back(f.open_index(w));
    }
  struct Triple {
    int pab, pbc, pac, open;
  };
  std::vector<Triple> triples;
  auto pidx = [&](int a, int b) {
    for (size_t k = 0; k < prs.size(); ++k)
      if (prs[k] == std::make_pair(a, b)) return static_cast<int>(k);
    return -1;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Open w = intersect(intersect(cov.members[a], cov.members[b]),
                           cov.members[c]);
        if (w.empty()) continue;
        triples.push_back({pidx(a, b), pidx(b, c), pidx(a, c), f.open_index(w)});
      }
  // objects: one gluing arrow per inhabited pair, matching on triples (the
  // coefficient groupoids here have a single object, so no object choices)
  std::vector<std::vector<int>> objects;
  std::map<std::vector<int>, int> lookup;
  std::vector<int> theta(prs.size(), 0);
  auto valid = [&]() {
    for (const auto& t : triples) {
      const FiniteGroupoid& gw = f.at(t.open);
      int ab = f.restrict_arr(pr_open[t.pab], t.open, theta[t.pab]);
      int bc = f.restrict_arr(pr_open[t.pbc], t.open, theta[t.pbc]);
      int ac = f.restrict_arr(pr_open[t.pac], t.open, theta[t.pac]);
      if (gw.compose(ab, bc) != ac) return false;
    }
    return true;
  };
  while (true) {
    if (valid()) {
      lookup[theta] = static_cast<int>(objects.size());
      objects.push_back(theta);
    }
    size_t i = 0;
    while (i < theta.size() &&
           ++theta[i] == f.at(pr_open[i]).arrow_count())
      theta[i++] = 0;
    if (i == theta.size()) break;
  }
  std::vector<int> parent(objects.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  // arrows act by conjugating the gluing data with a family of chart arrows
  std::vector<int> fam(n, 0);
  std::vector<int> dst(prs.size());
  for (int src = 0; src < static_cast<int>(objects.size()); ++src) {
    std::fill(fam.begin(), fam.end(), 0);
    while (true) {
      for (size_t k = 0; k < prs.size(); ++k) {
        auto [a, b] = prs[k];
        const FiniteGroupoid& gw = f.at(pr_open[k]);
        int fa = f.restrict_arr(chart[a], pr_open[k], fam[a]);
        int fb = f.restrict_arr(chart[b], pr_open[k], fam[b]);
        dst[k] = gw.compose(fa, gw.compose(objects[src][k], gw.inv(fb)));
      }
      auto it = lookup.find(dst);
      if (it == lookup.end())
        throw InternalError("descent action left the object set");
      int a = find(src), b = find(it->second);
      if (a != b) parent[a] = b;
      size_t i = 0;
      while (i < fam.size() && ++fam[i] == f.at(chart[i]).arrow_count())
        fam[i++] = 0;
      if (i == fam.size()) break;
    }
  }
  int comps = 0;
  for (size_t v = 0; v < objects.size(); ++v)
    if (find(static_cast<int>(v)) == static_cast<int>(v)) ++comps;
  return comps;
}

GroupoidPresheaf naive_constant_groupoids(const FinitePoset& x,
                                          const FiniteGroup& g) {
  std::vector<FiniteGroupoid> vals(x.all_opens().size(), one_object_groupoid(g));
  return GroupoidPresheaf(
      x, vals, [](int, int, int) { return 0; },
      [](int, int, int a) { return a; });
}

Outcome requirement4() {
  FinitePoset circ = circle4();
  std::vector<std::pair<std::string, FiniteGroup>> groups = {
      {"Z2", cyclic_group(2)},
      {"Z3", cyclic_group(3)},
      {"S3", symmetric3()},
      {"Z2xZ2", klein_four()}};
  int failures = 0;
  std::string why;

  // stackified constant groups on the four-point circle
  for (const auto& [name, g] : groups) {
    GroupPresheaf gp = constant_group_sheaf(circ, g);
    GroupoidPresheaf f = one_object_presheaf(gp);
    int comps = minimal_descent_components(circ, f);
    int classes = static_cast<int>(h1_colim(gp, kEnumBudget).size());
    if (comps != classes) {
      ++failures;
      if (why.empty())
        why = name + ": " + std::to_string(comps) + " global components vs " +
              std::to_string(classes) + " cocycle classes";
    }
  }
  // cross-check the component helper against the materialized categories
  {
    GroupoidPresheaf f2 =
        one_object_presheaf(constant_group_sheaf(circ, cyclic_group(2)));
    Stackification st = stackify(f2, 5'000'000);
    int via_stackify = static_cast<int>(
        st.result.at(st.result.open_index(circ.whole())).iso_classes().size());
    if (via_stackify != minimal_descent_components(circ, f2)) {
      ++failures;
      if (why.empty()) why = "stackify disagrees with the component helper";
    }
    GroupoidPresheaf f3 =
        one_object_presheaf(constant_group_sheaf(circ, cyclic_group(3)));
    DescentCategory dc =
        descent_category(minimal_cover(circ.whole()), f3, 5'000'000, false);
    std::vector<int> parent(dc.objects.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (const auto& a : dc.arrows) {
      int x = find(a.src), y = find(a.dst);
      if (x != y) parent[x] = y;
    }
    int comps = 0;
    for (size_t v = 0; v < dc.objects.size(); ++v)
      if (find(static_cast<int>(v)) == static_cast<int>(v)) ++comps;
    if (comps != minimal_descent_components(circ, f3)) {
      ++failures;
      if (why.empty()) why = "materialized category disagrees with the helper";
    }
  }

  // full faithfulness of the comparison functor vs the hom-sheaf condition,
  // over a corpus of sheaf-valued and deliberately broken presheaves
  std::deque<FinitePoset> spaces;
  spaces.push_back(circle4());
  spaces.push_back(hexagon());
  spaces.push_back(FinitePoset({"x", "y"}, {{"x", "y"}}));
  spaces.push_back(FinitePoset({"m", "p", "q"}, {{"m", "p"}, {"m", "q"}}));
  spaces.push_back(FinitePoset({"pt"}, {}));
  int corpus = 0;
  for (const FinitePoset& x : spaces) {
    std::vector<FiniteGroup> gs = {cyclic_group(2), cyclic_group(3)};
    if (x.size() <= 3) gs.push_back(klein_four());
    for (const FiniteGroup& g : gs) {
      for (int variant = 0; variant < 2; ++variant) {
        GroupoidPresheaf f =
            variant == 0
                ? one_object_presheaf(constant_group_sheaf(x, g))
                : naive_constant_groupoids(x, g);
        ++corpus;
        bool ff = true;
        for (const Open& u : x.all_opens()) {
          DescentCategory dc =
              descent_category(minimal_cover(u), f, 50'000'000, false);
          if (!comparison_fully_faithful(f, dc)) {
            ff = false;
            break;
          }
        }
        bool hom_sheaves = true;
        for (const Open& u : x.all_opens()) {
          const FiniteGroupoid& gu = f.at(f.open_index(u));
          for (int a = 0; a < gu.object_count() && hom_sheaves; ++a)
            for (int b = 0; b < gu.object_count() && hom_sheaves; ++b)
              if (!is_sheaf(hom_presheaf(f, u, a, b))) hom_sheaves = false;
          if (!hom_sheaves) break;
        }
        bool reported = is_prestack(f, 50'000'000);
        if (ff != hom_sheaves || reported != ff) {
          ++failures;
          if (why.empty()) why = "full faithfulness and the hom-sheaf condition disagree";
        }
        if ((variant == 0) != reported) {
          ++failures;
          if (why.empty()) why = "unexpected prestack verdict on the corpus";
        }
      }
    }
  }
  std::ostringstream os;
  os << "descent consistency: stackified components match degree-1 classes "
        "for 4 groups; comparison functor checked on " << corpus
     << " groupoid presheaves";
  if (failures) os << "; " << failures << " failures (" << why << ")";
  return {failures == 0 && corpus >= 20, os.str()};
}

// ---------------------------------------------------------------------------
// 5. degree-2 classes with constant coefficients match the abelian oracle

Outcome requirement5() {
  AbstractNerve nv = sphere2();
  long long oracle = cohomology_order(nv, cyclic_group(2), 2, kEnumBudget);
  size_t z2 = h2(constant_band(nv, cyclic_group(2)), kEnumBudget).size();
  size_t s3 = h2(constant_band(nv, symmetric3()), kEnumBudget).size();
  std::ostringstream os;
  os << "degree-2 classes on the tetrahedron nerve: Z2 -> " << z2
     << " (abelian oracle " << oracle << "), S3 -> " << s3 << " (expected 1)";
  return {z2 == 2 && oracle == 2 && s3 == 1, os.str()};
}

// ---------------------------------------------------------------------------
// 6. gerbe round trip with witnesses; associativity and its failure mode

bool groupoid_associative(const FiniteGroupoid& g) {
  for (int f1 = 0; f1 < g.arrow_count(); ++f1)
    for (int f2 = 0; f2 < g.arrow_count(); ++f2) {
      if (g.src(f1) != g.dst(f2)) continue;
      int c12 = g.compose(f1, f2);
      for (int f3 = 0; f3 < g.arrow_count(); ++f3) {
        if (g.src(f2) != g.dst(f3)) continue;
        if (g.compose(c12, f3) != g.compose(f1, g.compose(f2, f3)))
          return false;
      }
    }
  return true;
}

Outcome requirement6() {
  int failures = 0;
  std::string why;
  std::vector<Cocycle2> reps;
  for (auto& c : h2(constant_band(sphere2(), cyclic_group(2)), kEnumBudget))
    reps.push_back(std::move(c));
  for (auto& c : h2(constant_band(sphere2(), symmetric3()), kEnumBudget))
    reps.push_back(std::move(c));
  int witnessed = 0;
  for (const Cocycle2& c : reps) {
    GerbeGroupoid gg = cocycle_to_groupoid(c);
    for (const auto& stalk : gg.stalks)
      if (!groupoid_associative(stalk)) {
        ++failures;
        if (why.empty()) why = "a stalk composition is not associative";
      }
    BandedGerbePresentation pres = canonical_presentation(c.band);
    Cocycle2 back = groupoid_to_cocycle(gg, c.band, pres);
    auto witness = cocycles2_equivalent(c, back, kEnumBudget);
    if (!witness) {
      ++failures;
      if (why.empty()) why = "round trip left the equivalence class";
    } else {
      ++witnessed;
    }
  }
  // a single flipped value breaks associativity; exercised on the solid
  // simplex, whose inhabited quadruple is what turns the degree-2 identity
  // into an associativity constraint
  bool mutation_detected = false;
  Cocycle2 bad = trivial_cocycle2(constant_band(simplex3(), cyclic_group(2)));
  bad.g[{0, 1, 2}] = {1};
  try {
    cocycle_to_groupoid(bad, false);
  } catch (const ValidationError&) {
    mutation_detected = true;
  }
  if (!mutation_detected) {
    ++failures;
    if (why.empty()) why = "mutated data still assembled into a groupoid";
  }
  std::ostringstream os;
  os << "gerbe round trip: " << reps.size() << " class representatives, "
     << witnessed << " with equivalence witnesses; stalk compositions "
        "associative; mutation rejected on the solid simplex";
  if (failures) os << "; " << failures << " failures (" << why << ")";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 7. obstruction calculus on engineered band inputs

bool central_in(const FiniteGroup& k, const Subgroup& z, int zi) {
  int e = z.inclusion[zi];
  for (int a = 0; a < k.order(); ++a)
    if (k.mul(e, a) != k.mul(a, e)) return false;
  return true;
}

Outcome requirement7() {
  int failures = 0, inputs = 0;
  std::string why;
  auto record = [&](bool ok, const std::string& w) {
    if (!ok) {
      ++failures;
      if (why.empty()) why = w;
    }
  };
  FiniteGroup z2 = cyclic_group(2), z4 = cyclic_group(4), s3 = symmetric3(),
              q8 = quaternion8();
  AbstractNerve hollow = sphere2(), solid = simplex3(), big = sphere3();

  struct ValidInput {
    BandPresentation band;
    std::map<std::vector<int>, BandPresentation::Value> g;
    bool expect_corrected_equal;  // corrected cochain equals the input
  };
  std::vector<ValidInput> valids;
  auto unit_g = [](const BandPresentation& b) {
    std::map<std::vector<int>, BandPresentation::Value> g;
    for (const auto& t : b.nerve().tuples(3)) g[t] = b.unit_value(0, t);
    return g;
  };
  valids.push_back({constant_band(hollow, z2), unit_g(constant_band(hollow, z2)), true});
  {
    auto g = unit_g(constant_band(hollow, z2));
    g[{0, 1, 2}] = {1};
    valids.push_back({constant_band(hollow, z2), g, true});  // no quadruples
  }
  valids.push_back({constant_band(solid, z2), unit_g(constant_band(solid, z2)), true});
  {
    auto g = unit_g(constant_band(solid, z2));
    g[{0, 1, 2}] = {1};
    valids.push_back({constant_band(solid, z2), g, false});
  }
  {
    auto g = unit_g(constant_band(solid, q8));
    g[{0, 1, 2}] = {q8.element_index("-1")};
    valids.push_back({constant_band(solid, q8), g, false});
  }
  valids.push_back({constant_band(solid, s3), unit_g(constant_band(solid, s3)), true});
  {
    auto g = unit_g(constant_band(big, z2));
    g[{0, 1, 2}] = {1};
    valids.push_back({constant_band(big, z2), g, false});
  }
  {
    // inner twisting: gluing by conjugation, with the compatible cochain
    std::mt19937 rng(7);
    std::map<std::pair<int, int>, int> q;
    for (const auto& p : big.tuples(2))
      q[{p[0], p[1]}] = static_cast<int>(rng() % q8.order());
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
    for (const auto& [pr, e] : q) {
      std::vector<int> m(q8.order());
      for (int x = 0; x < q8.order(); ++x) m[x] = q8.conj(e, x);
      lambda[pr] = {m};
    }
    BandPresentation band(big, std::vector<FiniteGroup>(5, q8), lambda);
    std::map<std::vector<int>, BandPresentation::Value> g;
    for (const auto& t : big.tuples(3))
      g[t] = {q8.mul(q8.mul(q.at({t[0], t[1]}), q.at({t[1], t[2]})),
                     q8.inv(q.at({t[0], t[2]})))};
    // the obstruction of this compatible choice is the unit cochain, so the
    // first solution is the unit and the correction leaves g unchanged
    valids.push_back({band, g, true});
  }
  for (const auto& in : valids) {
    ++inputs;
    try {
      ObstructionResult res = band_obstruction(in.band, in.g, kEnumBudget);
      const FiniteGroup& k = in.band.group(0);
      for (const auto& [t, v] : res.xi.values)
        if (!central_in(k, res.center_of, v))
          record(false, "an obstruction value is not central");
      AbelianCochain dxi =
          cech_coboundary(in.band.nerve(), res.center_of.group, res.xi);
      record(is_unit_cochain(dxi, res.center_of.group),
             "the obstruction cochain is not closed");
      record(res.zeta.has_value() && res.corrected.has_value(),
             "an exact obstruction was not corrected");
      if (res.corrected) {
        record(check_cocycle2(*res.corrected).ok,
               "the corrected cochain fails the cocycle identities");
        bool equal = res.corrected->g == in.g;
        record(equal == in.expect_corrected_equal,
               "unexpected relation between input and corrected cochain");
      }
    } catch (const std::exception& ex) {
      record(false, std::string("valid input rejected: ") + ex.what());
    }
  }
  // invalid inputs: a value outside the center, and a gluing that moves it
  {
    ++inputs;
    auto g = unit_g(constant_band(solid, s3));
    g[{0, 1, 2}] = {1};  // a transposition: not central in S3
    bool threw = false;
    try {
      band_obstruction(constant_band(solid, s3), g, kEnumBudget);
    } catch (const ValidationError&) {
      threw = true;
    }
    record(threw, "a non-central cochain was accepted");
  }
  {
    ++inputs;
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
    std::vector<int> inv_map(z4.order());
    for (int x = 0; x < z4.order(); ++x) inv_map[x] = z4.inv(x);
    for (const auto& p : solid.tuples(2)) lambda[{p[0], p[1]}] = {inv_map};
    BandPresentation band(solid, std::vector<FiniteGroup>(4, z4), lambda);
    bool threw = false;
    try {
      band_obstruction(band, unit_g(band), kEnumBudget);
    } catch (const ValidationError&) {
      threw = true;
    }
    record(threw, "a gluing that moves central elements was accepted");
  }
  // search for an input whose obstruction class is the nonzero degree-3
  // class reported by the abelian oracle on the 4-simplex boundary
  long long h3 = cohomology_order(big, z2, 3, kEnumBudget);
  record(h3 == 2, "degree-3 oracle on the 4-simplex boundary is off");
  bool nontrivial_found = false;
  {
    std::mt19937 rng(2026);
    Subgroup zq8 = center(q8);
    for (int trial = 0; trial < 400 && !nontrivial_found; ++trial) {
      std::map<std::pair<int, int>, int> q;
      for (const auto& p : big.tuples(2))
        q[{p[0], p[1]}] = static_cast<int>(rng() % q8.order());
      std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
      for (const auto& [pr, e] : q) {
        std::vector<int> m(q8.order());
        for (int x = 0; x < q8.order(); ++x) m[x] = q8.conj(e, x);
        lambda[pr] = {m};
      }
      BandPresentation band(big, std::vector<FiniteGroup>(5, q8), lambda);
      std::map<std::vector<int>, BandPresentation::Value> g;
      for (const auto& t : big.tuples(3)) {
        int base = q8.mul(q8.mul(q.at({t[0], t[1]}), q.at({t[1], t[2]})),
                          q8.inv(q.at({t[0], t[2]})));
        int shift = zq8.inclusion[static_cast<int>(rng() % zq8.group.order())];
        g[t] = {q8.mul(shift, base)};
      }
      ++inputs;
      ObstructionResult res = band_obstruction(band, g, kEnumBudget);
      if (!res.zeta.has_value()) nontrivial_found = true;
    }
  }
  std::ostringstream os;
  os << "obstruction calculus: " << inputs
     << " engineered inputs; centrality, closedness and corrections verified";
  bool pass = failures == 0 && inputs >= 10;
  if (failures) os << "; " << failures << " failures (" << why << ")";
  if (!nontrivial_found) {
    os << "; NO input with a nonsolvable obstruction class was found: every "
          "gluing family over the 4-simplex boundary that admits a "
          "compatible cochain trivializes, so the nonzero degree-3 class "
          "(which the abelian oracle confirms exists) is never realized at "
          "this scale";
    pass = false;
  }
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// 8. extension classes over the four-point circle

Outcome requirement8() {
  FinitePoset x = circle4();
  int failures = 0;
  std::string why;

  GroupoidExtension split = split_extension(cyclic_group(2), cyclic_group(2), x);
  Cover cover(x.whole(), {"U", "V"}, {x.minimal_open("c"), x.minimal_open("d")});
  ExtensionCharts sc{cover, {}, {}};
  for (int a = 0; a < 2; ++a) {
    std::vector<int> s(x.size(), -1);
    for (int p : cover.members[a].points())
      s[p] = split.m.total.point_index(x.point_name(p) + "@0");
    sc.sections.push_back(std::move(s));
  }
  sc.arrows[{0, 1}] = {split.g.unit(), split.g.unit()};
  auto [sband, scocycle] = extension_to_cocycle(split, sc);
  if (!cocycles2_equivalent(scocycle, trivial_cocycle2(sband), kEnumBudget)) {
    ++failures;
    why = "the split extension class is not trivial";
  }

  // the twisted Z/2 -> Z/4 -> Z/2 extension: the double cover that swaps
  // sheets across d
  FinitePoset total({"a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2"},
                    {{"c1", "a1"}, {"c1", "b1"}, {"d1", "a1"}, {"d1", "b2"},
                     {"c2", "a2"}, {"c2", "b2"}, {"d2", "a2"}, {"d2", "b1"}});
  std::vector<int> proj(total.size());
  for (int p = 0; p < total.size(); ++p)
    proj[p] = x.point_index(total.point_name(p).substr(0, 1));
  EtaleSpace m = make_etale_space(x, std::move(total), std::move(proj));
  std::vector<int> swap_sheets(8), id8(8);
  for (int p = 0; p < 8; ++p) swap_sheets[p] = (p + 4) % 8;
  std::iota(id8.begin(), id8.end(), 0);
  GroupoidExtension twisted =
      make_extension(cyclic_group(2), cyclic_group(4), {0, 2}, std::move(m),
                     {id8, swap_sheets, id8, swap_sheets});
  ExtensionCharts tc{cover, {}, {}};
  std::vector<int> su(x.size(), -1), sv(x.size(), -1);
  const FinitePoset& tt = twisted.m.total;
  su[x.point_index("a")] = tt.point_index("a1");
  su[x.point_index("b")] = tt.point_index("b1");
  su[x.point_index("c")] = tt.point_index("c1");
  sv[x.point_index("a")] = tt.point_index("a1");
  sv[x.point_index("b")] = tt.point_index("b2");
  sv[x.point_index("d")] = tt.point_index("d1");
  tc.sections = {su, sv};
  auto masks = x.components(cover.intersection({0, 1}).bits);
  std::vector<int> arrows(masks.size());
  for (size_t j = 0; j < masks.size(); ++j)
    arrows[j] = ((masks[j] >> x.point_index("a")) & 1u) ? 0 : 1;
  tc.arrows[{0, 1}] = arrows;
  auto [tband, tcocycle] = extension_to_cocycle(twisted, tc);
  if (!check_cocycle2(tcocycle).ok) {
    ++failures;
    if (why.empty()) why = "the twisted extension cocycle is invalid";
  }
  std::vector<Cocycle2> classes = h2(tband, kEnumBudget);
  bool trivial =
      cocycles2_equivalent(tcocycle, trivial_cocycle2(tband), kEnumBudget)
          .has_value();
  std::ostringstream os;
  os << "extension classes: split class trivial";
  bool pass = failures == 0;
  if (failures) os << "; " << why;
  os << "; twisted Z/4 class over the circle lies among " << classes.size()
     << " class(es) and is " << (trivial ? "trivial" : "nontrivial");
  if (trivial || classes.size() < 2) {
    os << " — the expected NONTRIVIAL class cannot exist here: a "
          "one-dimensional base admits no inhabited triple overlaps on any "
          "trivializing cover, so the enumeration finds a single class";
    pass = false;
  }
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// 9. determinism: parallel enumeration and golden CLI reports

std::optional<std::string> run_command(const std::string& cmd) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return std::nullopt;
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
  if (pclose(p) != 0) return std::nullopt;
  return out;
}

Outcome requirement9(const std::string& root, const std::string& cli) {
  int failures = 0;
  std::string why;
  // in-process: a threaded enumeration must reproduce the sequential one
  BandPresentation band = constant_band(sphere2(), cyclic_group(2));
  std::vector<Cocycle2> seq = h2(band, kEnumBudget, 1);
  std::vector<Cocycle2> par = h2(band, kEnumBudget, 3);
  bool same = seq.size() == par.size();
  for (size_t i = 0; same && i < seq.size(); ++i) same = seq[i].g == par[i].g;
  if (!same) {
    ++failures;
    why = "threaded degree-2 enumeration differs from the sequential one";
  }
  auto r1 = h1(triangle_nerve(), symmetric3(), kEnumBudget);
  auto r2 = h1(triangle_nerve(), symmetric3(), kEnumBudget);
  bool stable = r1.size() == r2.size();
  for (size_t i = 0; stable && i < r1.size(); ++i)
    stable = r1[i].pairs() == r2[i].pairs();
  if (!stable) {
    ++failures;
    if (why.empty()) why = "repeated degree-1 enumeration is unstable";
  }
  int replayed = 0;
  if (!cli.empty()) {
    const std::vector<std::pair<std::string, std::string>> goldens = {
        {"h1 --nerve data/triangle-nerve.json --group Z2", "h1-triangle-z2.txt"},
        {"h1 --space data/circle.json --group Z3", "h1-circle-z3.txt"},
        {"h2 --nerve data/tetrahedron-nerve.json --band data/band-z2-trivial.json",
         "h2-tetrahedron-z2.txt"},
        {"h2 --nerve data/tetrahedron-nerve.json --band data/band-z2-trivial.json "
         "--threads 3",
         "h2-tetrahedron-z2.txt"},
        {"h2 --nerve data/tetrahedron-nerve.json --band data/band-z2-trivial.json "
         "--format json",
         "h2-tetrahedron-z2.json"},
        {"h2 --nerve data/tetrahedron-nerve.json --band data/band-s3-trivial.json",
         "h2-tetrahedron-s3.txt"},
        {"classify-torsors --space data/circle.json --group Z2",
         "classify-torsors-circle-z2.txt"},
        {"descent-check --space data/circle.json --group Z2",
         "descent-check-circle-z2.txt"},
        {"stackify --space data/circle.json --group Z2", "stackify-circle-z2.txt"},
        {"obstruction --cocycle2 data/cocycle2-bad.json", "obstruction-simplex.txt"},
        {"gerbe-roundtrip --nerve data/tetrahedron-nerve.json "
         "--band data/band-z2-trivial.json",
         "gerbe-roundtrip-z2.txt"},
        {"extension-class --extension data/z4-extension.json",
         "extension-class-z4.txt"},
    };
    for (const auto& [args, golden] : goldens) {
      std::ifstream gf(root + "/tests/goldens/" + golden, std::ios::binary);
      std::stringstream gs;
      gs << gf.rdbuf();
      std::string expected = gs.str();
      std::string cmd = "cd '" + root + "' && '" + cli + "' " + args;
      auto first = run_command(cmd);
      auto second = run_command(cmd);
      if (!gf || !first || !second || *first != expected || *second != expected) {
        ++failures;
        if (why.empty()) why = "golden report mismatch for: " + args;
      } else {
        ++replayed;
      }
    }
  }
  std::ostringstream os;
  os << "determinism: threaded and repeated enumerations byte-stable";
  if (!cli.empty())
    os << "; " << replayed << "/12 golden reports reproduced twice";
  else
    os << "; golden replay skipped (no CLI path given)";
  if (failures) os << "; " << failures << " failures (" << why << ")";
  return {failures == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::string root = argc > 1 ? argv[1] : "";
  std::string cli = argc > 2 ? argv[2] : "";
  std::vector<std::pair<int, std::function<Outcome()>>> checks = {
      {1, requirement1},
      {2, requirement2},
      {3, requirement3},
      {4, requirement4},
      {5, requirement5},
      {6, requirement6},
      {7, requirement7},
      {8, requirement8},
      {9, [&] { return requirement9(root, cli); }},
  };
  int failed = 0;
  for (const auto& [id, fn] : checks) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome r = fn();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cout << "criterion " << id << ": " << (r.pass ? "PASS" : "FAIL")
              << " — " << r.detail << std::endl;
    std::cerr << "  [criterion " << id << " took " << ms << " ms]" << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed;
}
