#include "cech/presheaf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cech {

Presheaf::Presheaf(const FinitePoset& space,
                   std::vector<std::vector<std::string>> values,
                   const std::function<int(int, int, int)>& restrict_fn)
    : space_(&space), opens_(space.all_opens()), values_(std::move(values)) {
  if (values_.size() != opens_.size())
    throw ValidationError("Presheaf: need one value set per open of the space");
  for (size_t i = 0; i < opens_.size(); ++i) open_lookup_[opens_[i].bits] = static_cast<int>(i);
  const int m = open_count();
  for (int v = 0; v < m; ++v) {
    for (int u = 0; u < m; ++u) {
      if (!opens_[u].subset_of(opens_[v])) continue;
      std::vector<int> r(values_[v].size());
      for (size_t e = 0; e < values_[v].size(); ++e) {
        int img = restrict_fn(v, u, static_cast<int>(e));
        if (img < 0 || img >= static_cast<int>(values_[u].size()))
          throw ValidationError("Presheaf: restriction image out of range");
        r[e] = img;
      }
      res_[{v, u}] = std::move(r);
    }
  }
  validate();
}

int Presheaf::open_index(const Open& u) const {
  if (u.space != space_) throw ValidationError("Presheaf: open over a different space");
  auto it = open_lookup_.find(u.bits);
  if (it == open_lookup_.end()) throw InternalError("Presheaf: open not in lattice");
  return it->second;
}

int Presheaf::value_index(int open_idx, const std::string& name) const {
  const auto& vs = values_[open_idx];
  for (size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == name) return static_cast<int>(i);
  throw ValidationError("Presheaf: unknown section label '" + name + "'");
}

int Presheaf::restrict(int v_open, int u_open, int elem) const {
  auto it = res_.find({v_open, u_open});
  if (it == res_.end())
    throw ValidationError("Presheaf: restriction requested along a non-inclusion");
  return it->second.at(elem);
}

void Presheaf::validate() const {
  const int m = open_count();
  for (int v = 0; v < m; ++v) {
    const auto& idm = res_.at({v, v});
    for (size_t e = 0; e < idm.size(); ++e)
      if (idm[e] != static_cast<int>(e))
        throw ValidationError("Presheaf: identity restriction is not the identity");
  }
  for (int w = 0; w < m; ++w)
    for (int v = 0; v < m; ++v) {
      if (!opens_[v].subset_of(opens_[w])) continue;
      for (int u = 0; u < m; ++u) {
        if (!opens_[u].subset_of(opens_[v])) continue;
        for (int e = 0; e < static_cast<int>(values_[w].size()); ++e)
          if (restrict(v, u, restrict(w, v, e)) != restrict(w, u, e))
            throw ValidationError("Presheaf: restrictions do not compose functorially");
      }
    }
}

bool PresheafMorphism::is_isomorphism() const {
  for (size_t u = 0; u < component.size(); ++u) {
    if (source->value_count(static_cast<int>(u)) !=
        target->value_count(static_cast<int>(u)))
      return false;
    std::vector<bool> hit(component[u].size(), false);
    for (int v : component[u]) {
      if (hit[v]) return false;
      hit[v] = true;
    }
  }
  return true;
}

bool naturality_holds(const PresheafMorphism& m) {
  const Presheaf& p = *m.source;
  const Presheaf& q = *m.target;
  for (int v = 0; v < p.open_count(); ++v)
    for (int u = 0; u < p.open_count(); ++u) {
      if (!p.open_at(u).subset_of(p.open_at(v))) continue;
      for (int e = 0; e < p.value_count(v); ++e)
        if (q.restrict(v, u, m.component[v][e]) != m.component[u][p.restrict(v, u, e)])
          return false;
    }
  return true;
}

std::vector<PresheafMorphism> all_morphisms(const Presheaf& p, const Presheaf& q,
                                            long long budget) {
  if (&p.space() != &q.space())
    throw ValidationError("all_morphisms: presheaves over different spaces");
  const int m = p.open_count();
  double log_total = 0;
  for (int u = 0; u < m; ++u)
    if (p.value_count(u) > 0)
      log_total += p.value_count(u) * std::log(std::max(1, q.value_count(u)));
  if (log_total > std::log(static_cast<double>(budget)))
    throw BudgetError("all_morphisms: search space exceeds budget");

  std::vector<PresheafMorphism> out;
  PresheafMorphism cur{&p, &q, std::vector<std::vector<int>>(m)};
  auto compatible_with_chosen = [&](int k) {
    for (int j = 0; j <= k; ++j) {
      int v = -1, u = -1;
      if (p.open_at(j).subset_of(p.open_at(k))) v = k, u = j;
      else if (p.open_at(k).subset_of(p.open_at(j))) v = j, u = k;
      else continue;
      for (int e = 0; e < p.value_count(v); ++e)
        if (q.restrict(v, u, cur.component[v][e]) != cur.component[u][p.restrict(v, u, e)])
          return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int k) -> void {
    if (k == m) {
      out.push_back(cur);
      return;
    }
    const int pc = p.value_count(k), qc = q.value_count(k);
    if (pc == 0) {
      cur.component[k].clear();
      if (compatible_with_chosen(k)) self(self, k + 1);
      return;
    }
    if (qc == 0) return;  // no map into an empty set
    std::vector<int> f(pc, 0);
    while (true) {
      cur.component[k] = f;
      if (compatible_with_chosen(k)) self(self, k + 1);
      int i = 0;
      while (i < pc && ++f[i] == qc) f[i++] = 0;
      if (i == pc) break;
    }
  };
  rec(rec, 0);
  return out;
}

std::optional<PresheafMorphism> find_isomorphism(const Presheaf& a, const Presheaf& b,
                                                 long long budget) {
  for (int u = 0; u < a.open_count(); ++u)
    if (a.value_count(u) != b.value_count(u)) return std::nullopt;
  for (auto& m : all_morphisms(a, b, budget))
    if (m.is_isomorphism()) return m;
  return std::nullopt;
}

namespace {

// Compatible families over the minimal cover of a nonempty open, enumerated
// by backtracking in canonical point order. Calls sink(family) for each.
void for_each_minimal_family(const Presheaf& p, int open_idx,
                             const std::function<void(const std::vector<int>&)>& sink) {
  const Open& u = p.open_at(open_idx);
  std::vector<int> pts = u.points();
  const int k = static_cast<int>(pts.size());
  std::vector<int> mins(k), family(k);
  for (int i = 0; i < k; ++i) mins[i] = p.open_index(p.space().minimal_open(pts[i]));
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      sink(family);
      return;
    }
    for (int a = 0; a < p.value_count(mins[i]); ++a) {
      family[i] = a;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        int inter = p.open_index(intersect(p.open_at(mins[i]), p.open_at(mins[j])));
        ok = p.restrict(mins[i], inter, a) == p.restrict(mins[j], inter, family[j]);
      }
      if (ok) self(self, i + 1);
    }
  };
  rec(rec, 0);
}

std::vector<int> restrict_to_minimal_family(const Presheaf& p, int open_idx, int elem) {
  const Open& u = p.open_at(open_idx);
  std::vector<int> pts = u.points();
  std::vector<int> fam(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    int m = p.open_index(p.space().minimal_open(pts[i]));
    fam[i] = p.restrict(open_idx, m, elem);
  }
  return fam;
}

}  // namespace

bool is_separated(const Presheaf& p) {
  if (p.value_count(p.empty_open_index()) > 1) return false;  // empty cover of the empty open
  for (int u = 0; u < p.open_count(); ++u) {
    if (p.open_at(u).empty()) continue;
    for (int a = 0; a < p.value_count(u); ++a)
      for (int b = a + 1; b < p.value_count(u); ++b)
        if (restrict_to_minimal_family(p, u, a) == restrict_to_minimal_family(p, u, b))
          return false;
  }
  return true;
}

bool is_sheaf(const Presheaf& p) {
  if (p.value_count(p.empty_open_index()) != 1) return false;
  if (!is_separated(p)) return false;
  for (int u = 0; u < p.open_count(); ++u) {
    if (p.open_at(u).empty()) continue;
    bool all_hit = true;
    for_each_minimal_family(p, u, [&](const std::vector<int>& fam) {
      bool hit = false;
      for (int a = 0; a < p.value_count(u) && !hit; ++a)
        hit = restrict_to_minimal_family(p, u, a) == fam;
      if (!hit) all_hit = false;
    });
    if (!all_hit) return false;
  }
  return true;
}

namespace {

// All covers of an open: families of sub-opens whose union is the open.
// The empty open is covered by the empty family (and by {empty}).
std::vector<std::vector<int>> all_covers_of(const Presheaf& p, int open_idx) {
  std::vector<int> subs;
  for (int v = 0; v < p.open_count(); ++v)
    if (p.open_at(v).subset_of(p.open_at(open_idx))) subs.push_back(v);
  const int k = static_cast<int>(subs.size());
  if (k > 20) throw BudgetError("all_covers_of: open lattice too large for full cover enumeration");
  std::vector<std::vector<int>> covers;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::uint64_t un = 0;
    std::vector<int> fam;
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1u) {
        un |= p.open_at(subs[i]).bits;
        fam.push_back(subs[i]);
      }
    if (un == p.open_at(open_idx).bits) covers.push_back(fam);
  }
  return covers;
}

void for_each_cover_family(const Presheaf& p, const std::vector<int>& cover,
                           const std::function<void(const std::vector<int>&)>& sink) {
  const int k = static_cast<int>(cover.size());
  std::vector<int> family(k);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      sink(family);
      return;
    }
    for (int a = 0; a < p.value_count(cover[i]); ++a) {
      family[i] = a;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        int inter = p.open_index(intersect(p.open_at(cover[i]), p.open_at(cover[j])));
        ok = p.restrict(cover[i], inter, a) == p.restrict(cover[j], inter, family[j]);
      }
      if (ok) self(self, i + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

bool is_separated_full(const Presheaf& p) {
  for (int u = 0; u < p.open_count(); ++u) {
    for (const auto& cover : all_covers_of(p, u)) {
      for (int a = 0; a < p.value_count(u); ++a)
        for (int b = a + 1; b < p.value_count(u); ++b) {
          bool agree = true;
          for (int c : cover)
            if (p.restrict(u, c, a) != p.restrict(u, c, b)) {
              agree = false;
              break;
            }
          if (agree) return false;
        }
    }
  }
  return true;
}

bool is_sheaf_full(const Presheaf& p) {
  if (!is_separated_full(p)) return false;
  for (int u = 0; u < p.open_count(); ++u) {
    for (const auto& cover : all_covers_of(p, u)) {
      bool all_hit = true;
      for_each_cover_family(p, cover, [&](const std::vector<int>& fam) {
        for (int a = 0; a < p.value_count(u); ++a) {
          bool match = true;
          for (size_t i = 0; i < cover.size(); ++i)
            if (p.restrict(u, cover[i], a) != fam[i]) {
              match = false;
              break;
            }
          if (match) return;
        }
        all_hit = false;
      });
      if (!all_hit) return false;
    }
  }
  return true;
}

SheafificationStep separate(const Presheaf& p) {
  const int m = p.open_count();
  std::vector<std::vector<int>> cls(m);          // element -> class id
  std::vector<std::vector<std::string>> labels(m);
  std::vector<std::vector<int>> rep(m);          // class id -> representative element
  for (int u = 0; u < m; ++u) {
    const bool empty_open = p.open_at(u).empty();
    std::vector<std::vector<int>> keys;
    cls[u].assign(p.value_count(u), -1);
    for (int e = 0; e < p.value_count(u); ++e) {
      std::vector<int> key =
          empty_open ? std::vector<int>{} : restrict_to_minimal_family(p, u, e);
      int found = -1;
      for (size_t c = 0; c < keys.size(); ++c)
        if (keys[c] == key) {
          found = static_cast<int>(c);
          break;
        }
      if (found < 0) {
        found = static_cast<int>(keys.size());
        keys.push_back(key);
        rep[u].push_back(e);
        labels[u].push_back("[" + p.value_name(u, e) + "]");
      }
      cls[u][e] = found;
    }
  }
  Presheaf result(p.space(), labels, [&](int v, int u, int c) {
    return cls[u][p.restrict(v, u, rep[v][c])];
  });
  return SheafificationStep{std::move(result), std::move(cls)};
}

SheafificationStep sheafify(const Presheaf& p) {
  SheafificationStep sep = separate(p);
  const Presheaf& s = sep.result;
  const int m = s.open_count();

  // elements of the sheafification: compatible families over the minimal cover
  std::vector<std::vector<std::vector<int>>> fams(m);
  std::vector<std::vector<std::string>> labels(m);
  for (int u = 0; u < m; ++u) {
    const Open& uu = s.open_at(u);
    if (uu.empty()) {
      fams[u].push_back({});
      labels[u].push_back("()");
      continue;
    }
    for_each_minimal_family(s, u, [&](const std::vector<int>& fam) {
      std::ostringstream os;
      std::vector<int> pts = uu.points();
      for (size_t i = 0; i < pts.size(); ++i) {
        int mo = s.open_index(s.space().minimal_open(pts[i]));
        if (i) os << ";";
        os << s.space().point_name(pts[i]) << "=" << s.value_name(mo, fam[i]);
      }
      fams[u].push_back(fam);
      labels[u].push_back(os.str());
    });
  }
  auto family_index = [&](int u, const std::vector<int>& fam) {
    for (size_t i = 0; i < fams[u].size(); ++i)
      if (fams[u][i] == fam) return static_cast<int>(i);
    throw InternalError("sheafify: restricted family not found");
  };
  Presheaf result(s.space(), labels, [&](int v, int u, int f) {
    // restrict a family on V to the points of U
    std::vector<int> vpts = s.open_at(v).points();
    std::vector<int> upts = s.open_at(u).points();
    std::vector<int> sub;
    for (int x : upts) {
      auto it = std::find(vpts.begin(), vpts.end(), x);
      sub.push_back(fams[v][f][it - vpts.begin()]);
    }
    return family_index(u, sub);
  });

  // unit: quotient map followed by restriction to the minimal family
  std::vector<std::vector<int>> unit(m);
  for (int u = 0; u < m; ++u) {
    unit[u].resize(p.value_count(u));
    for (int e = 0; e < p.value_count(u); ++e) {
      int c = sep.unit[u][e];
      std::vector<int> fam = s.open_at(u).empty()
                                 ? std::vector<int>{}
                                 : restrict_to_minimal_family(s, u, c);
      unit[u][e] = family_index(u, fam);
    }
  }
  return SheafificationStep{std::move(result), std::move(unit)};
}

int stalk_open(const Presheaf& p, int x) {
  return p.open_index(p.space().minimal_open(x));
}

std::vector<std::string> stalk(const Presheaf& p, int x) {
  int u = stalk_open(p, x);
  std::vector<std::string> out;
  for (int e = 0; e < p.value_count(u); ++e) out.push_back(p.value_name(u, e));
  return out;
}

Presheaf constant_presheaf(const FinitePoset& space, const std::vector<std::string>& values) {
  std::vector<std::vector<std::string>> vals(space.all_opens().size(), values);
  return Presheaf(space, vals, [](int, int, int e) { return e; });
}

Presheaf product(const Presheaf& p, const Presheaf& q) {
  if (&p.space() != &q.space())
    throw ValidationError("product: presheaves over different spaces");
  const int m = p.open_count();
  std::vector<std::vector<std::string>> labels(m);
  for (int u = 0; u < m; ++u)
    for (int a = 0; a < p.value_count(u); ++a)
      for (int b = 0; b < q.value_count(u); ++b)
        labels[u].push_back("(" + p.value_name(u, a) + "," + q.value_name(u, b) + ")");
  return Presheaf(p.space(), labels, [&](int v, int u, int e) {
    int a = e / q.value_count(v), b = e % q.value_count(v);
    return p.restrict(v, u, a) * q.value_count(u) + q.restrict(v, u, b);
  });
}

GroupPresheaf::GroupPresheaf(Presheaf shape, std::vector<FiniteGroup> groups)
    : shape_(std::move(shape)), groups_(std::move(groups)) {
  if (static_cast<int>(groups_.size()) != shape_.open_count())
    throw ValidationError("GroupPresheaf: need one group per open");
  for (int u = 0; u < shape_.open_count(); ++u) {
    if (groups_[u].order() != shape_.value_count(u))
      throw ValidationError("GroupPresheaf: group order does not match section count");
    for (int e = 0; e < groups_[u].order(); ++e)
      if (groups_[u].element_name(e) != shape_.value_name(u, e))
        throw ValidationError("GroupPresheaf: element labels out of sync with sections");
  }
  for (int v = 0; v < shape_.open_count(); ++v)
    for (int u = 0; u < shape_.open_count(); ++u) {
      if (!shape_.open_at(u).subset_of(shape_.open_at(v))) continue;
      for (int a = 0; a < groups_[v].order(); ++a) {
        if (shape_.restrict(v, u, groups_[v].unit()) != groups_[u].unit())
          throw ValidationError("GroupPresheaf: restriction does not preserve the unit");
        for (int b = 0; b < groups_[v].order(); ++b)
          if (shape_.restrict(v, u, groups_[v].mul(a, b)) !=
              groups_[u].mul(shape_.restrict(v, u, a), shape_.restrict(v, u, b)))
            throw ValidationError("GroupPresheaf: restriction is not a homomorphism");
      }
    }
}

GroupPresheaf constant_group_sheaf(const FinitePoset& space, const FiniteGroup& g) {
  const auto& opens = space.all_opens();
  const int m = static_cast<int>(opens.size());
  std::vector<std::vector<std::uint64_t>> comps(m);
  for (int u = 0; u < m; ++u) comps[u] = space.components(opens[u].bits);

  // tuples of G-elements, one per component, in mixed-radix canonical order
  auto tuple_count = [&](int u) {
    long long c = 1;
    for (size_t i = 0; i < comps[u].size(); ++i) c *= g.order();
    return c;
  };
  auto digits = [&](int u, long long e) {
    std::vector<int> d(comps[u].size());
    for (int i = static_cast<int>(comps[u].size()) - 1; i >= 0; --i) {
      d[i] = static_cast<int>(e % g.order());
      e /= g.order();
    }
    return d;
  };
  auto undigits = [&](int u, const std::vector<int>& d) {
    long long e = 0;
    for (size_t i = 0; i < d.size(); ++i) e = e * g.order() + d[i];
    return static_cast<int>(e);
  };

  std::vector<std::vector<std::string>> labels(m);
  for (int u = 0; u < m; ++u) {
    for (long long e = 0; e < tuple_count(u); ++e) {
      auto d = digits(u, e);
      std::string s;
      for (size_t i = 0; i < d.size(); ++i) {
        if (i) s += "|";
        s += g.element_name(d[i]);
      }
      if (d.empty()) s = "()";
      labels[u].push_back(s);
    }
  }
  Presheaf shape(space, labels, [&](int v, int u, int e) {
    auto d = digits(v, e);
    std::vector<int> out(comps[u].size());
    for (size_t i = 0; i < comps[u].size(); ++i) {
      int parent = -1;
      for (size_t j = 0; j < comps[v].size(); ++j)
        if ((comps[u][i] & comps[v][j]) == comps[u][i]) {
          parent = static_cast<int>(j);
          break;
        }
      if (parent < 0) throw InternalError("constant_group_sheaf: component not nested");
      out[i] = d[parent];
    }
    return undigits(u, out);
  });

  std::vector<FiniteGroup> groups;
  for (int u = 0; u < m; ++u) {
    const long long n = tuple_count(u);
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (long long a = 0; a < n; ++a)
      for (long long b = 0; b < n; ++b) {
        auto da = digits(u, a), db = digits(u, b);
        std::vector<int> dc(da.size());
        for (size_t i = 0; i < da.size(); ++i) dc[i] = g.mul(da[i], db[i]);
        table[a][b] = undigits(u, dc);
      }
    groups.emplace_back(labels[u], table);
  }
  return GroupPresheaf(std::move(shape), std::move(groups));
}

}  // namespace cech
