#include "cech/group.hpp"

#include <algorithm>
#include <numeric>

namespace cech {

FiniteGroup::FiniteGroup(std::vector<std::string> elements,
                         std::vector<std::vector<int>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
  const int n = order();
  if (n == 0) throw ValidationError("FiniteGroup: empty element list");
  if (static_cast<int>(table_.size()) != n)
    throw ValidationError("FiniteGroup: table has wrong number of rows");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("FiniteGroup: table has wrong number of columns");
    for (int v : row)
      if (v < 0 || v >= n) throw ValidationError("FiniteGroup: table entry out of range");
  }
  {
    std::vector<std::string> sorted = elements_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("FiniteGroup: duplicate element label");
  }
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) {
      unit_ = e;
      break;
    }
  }
  if (unit_ < 0) throw ValidationError("FiniteGroup: no two-sided unit");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == unit_ && table_[b][a] == unit_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw ValidationError("FiniteGroup: element without two-sided inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw ValidationError("FiniteGroup: multiplication not associative");
}

int FiniteGroup::element_index(const std::string& name) const {
  for (int i = 0; i < order(); ++i)
    if (elements_[i] == name) return i;
  throw ValidationError("unknown group element '" + name + "'");
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool Homomorphism::is_bijective() const {
  if (source->order() != target->order()) return false;
  std::vector<bool> hit(target->order(), false);
  for (int v : map) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

Homomorphism make_homomorphism(const FiniteGroup& src, const FiniteGroup& dst,
                               std::vector<int> map) {
  if (static_cast<int>(map.size()) != src.order())
    throw ValidationError("Homomorphism: map has wrong size");
  for (int v : map)
    if (v < 0 || v >= dst.order())
      throw ValidationError("Homomorphism: image out of range");
  if (map[src.unit()] != dst.unit())
    throw ValidationError("Homomorphism: unit not preserved");
  for (int a = 0; a < src.order(); ++a)
    for (int b = 0; b < src.order(); ++b)
      if (map[src.mul(a, b)] != dst.mul(map[a], map[b]))
        throw ValidationError("Homomorphism: multiplicativity fails");
  return Homomorphism{&src, &dst, std::move(map)};
}

Homomorphism identity_homomorphism(const FiniteGroup& g) {
  std::vector<int> m(g.order());
  std::iota(m.begin(), m.end(), 0);
  return Homomorphism{&g, &g, std::move(m)};
}

Homomorphism compose(const Homomorphism& f, const Homomorphism& g) {
  if (g.target != f.source) throw ValidationError("compose: homomorphisms not composable");
  std::vector<int> m(g.map.size());
  for (size_t i = 0; i < m.size(); ++i) m[i] = f.map[g.map[i]];
  return Homomorphism{g.source, f.target, std::move(m)};
}

Homomorphism inverse(const Homomorphism& f) {
  if (!f.is_bijective()) throw ValidationError("inverse: homomorphism not bijective");
  std::vector<int> m(f.map.size());
  for (size_t i = 0; i < m.size(); ++i) m[f.map[i]] = static_cast<int>(i);
  return Homomorphism{f.target, f.source, std::move(m)};
}

namespace {

// Backtracking over element images in canonical order, pruning on every
// already-determined product.
void automorphism_search(const FiniteGroup& g, std::vector<int>& map,
                         std::vector<bool>& used, int next,
                         std::vector<Homomorphism>& out) {
  const int n = g.order();
  if (next == n) {
    out.push_back(Homomorphism{&g, &g, map});
    return;
  }
  if (next == g.unit()) {
    map[next] = g.unit();
    if (!used[g.unit()]) {
      used[g.unit()] = true;
      automorphism_search(g, map, used, next + 1, out);
      used[g.unit()] = false;
    }
    map[next] = -1;
    return;
  }
  for (int img = 0; img < n; ++img) {
    if (used[img]) continue;
    map[next] = img;
    bool ok = true;
    for (int a = 0; a <= next && ok; ++a) {
      if (map[a] < 0) continue;
      int p1 = g.mul(a, next), p2 = g.mul(next, a);
      if (p1 <= next && map[p1] >= 0 && map[p1] != g.mul(map[a], img)) ok = false;
      if (ok && p2 <= next && map[p2] >= 0 && map[p2] != g.mul(img, map[a])) ok = false;
    }
    if (ok) {
      used[img] = true;
      automorphism_search(g, map, used, next + 1, out);
      used[img] = false;
    }
    map[next] = -1;
  }
}

}  // namespace

std::vector<Homomorphism> automorphisms(const FiniteGroup& g) {
  std::vector<Homomorphism> out;
  std::vector<int> map(g.order(), -1);
  std::vector<bool> used(g.order(), false);
  automorphism_search(g, map, used, 0, out);
  // The search can admit maps that are bijective and unit-preserving but fail
  // multiplicativity on pairs checked out of order; filter exactly.
  std::vector<Homomorphism> checked;
  for (auto& h : out) {
    bool ok = true;
    for (int a = 0; a < g.order() && ok; ++a)
      for (int b = 0; b < g.order() && ok; ++b)
        if (h.map[g.mul(a, b)] != g.mul(h.map[a], h.map[b])) ok = false;
    if (ok) checked.push_back(std::move(h));
  }
  return checked;
}

Homomorphism inner_automorphism(const FiniteGroup& g, int elem) {
  if (elem < 0 || elem >= g.order())
    throw ValidationError("inner_automorphism: element out of range");
  std::vector<int> m(g.order());
  for (int x = 0; x < g.order(); ++x) m[x] = g.conj(elem, x);
  return Homomorphism{&g, &g, std::move(m)};
}

std::vector<std::vector<int>> outer_classes(const FiniteGroup& g) {
  const auto aut = automorphisms(g);
  // index lookup by map
  auto find_index = [&](const std::vector<int>& m) {
    for (size_t i = 0; i < aut.size(); ++i)
      if (aut[i].map == m) return static_cast<int>(i);
    throw InternalError("outer_classes: composite automorphism not in enumeration");
  };
  std::vector<bool> assigned(aut.size(), false);
  std::vector<std::vector<int>> classes;
  for (size_t i = 0; i < aut.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<int> cls;
    for (int e = 0; e < g.order(); ++e) {
      auto inn = inner_automorphism(g, e);
      int j = find_index(compose(inn, aut[i]).map);
      if (!assigned[j]) {
        assigned[j] = true;
        cls.push_back(j);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

Subgroup center(const FiniteGroup& g) {
  std::vector<int> zelems;
  for (int z = 0; z < g.order(); ++z) {
    bool central = true;
    for (int x = 0; x < g.order() && central; ++x)
      central = g.mul(z, x) == g.mul(x, z);
    if (central) zelems.push_back(z);
  }
  std::vector<std::string> names;
  for (int z : zelems) names.push_back(g.element_name(z));
  const int m = static_cast<int>(zelems.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  auto pos = [&](int e) {
    for (int i = 0; i < m; ++i)
      if (zelems[i] == e) return i;
    throw InternalError("center: not closed under multiplication");
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[i][j] = pos(g.mul(zelems[i], zelems[j]));
  return Subgroup{FiniteGroup(names, table), zelems};
}

int conjugacy_class_count(const FiniteGroup& g) {
  std::vector<bool> seen(g.order(), false);
  int count = 0;
  for (int x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    ++count;
    for (int h = 0; h < g.order(); ++h) seen[g.conj(h, x)] = true;
  }
  return count;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw ValidationError("cyclic_group: order must be positive");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return FiniteGroup(names, table);
}

FiniteGroup symmetric3() {
  // permutations of {0,1,2} in one-line notation
  const std::vector<std::vector<int>> perms = {
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::string> names;
  for (const auto& p : perms) {
    std::string s;
    for (int v : p) s += static_cast<char>('0' + v);
    names.push_back(s);
  }
  auto index_of = [&](const std::vector<int>& p) {
    for (size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<int>(i);
    throw InternalError("symmetric3: composition escaped the table");
  };
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::vector<int> comp(3);
      for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
      table[i][j] = index_of(comp);
    }
  return FiniteGroup(names, table);
}

FiniteGroup klein_four() {
  return direct_product(cyclic_group(2), cyclic_group(2));
}

FiniteGroup quaternion8() {
  // {1,-1,i,-i,j,-j,k,-k}
  const std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  auto neg = [](int a) { return a ^ 1; };
  auto base = [](int a) { return a >> 1; };  // 0:1, 1:i, 2:j, 3:k
  auto make = [&](int b, bool negative) { return 2 * b + (negative ? 1 : 0); };
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  // base multiplication with sign: 1*x=x; i*i=j*j=k*k=-1; i*j=k, j*k=i, k*i=j
  auto basemul = [&](int x, int y) -> std::pair<int, bool> {
    if (x == 0) return {y, false};
    if (y == 0) return {x, false};
    if (x == y) return {0, true};
    // cyclic: (1,2)->3 +, (2,3)->1 +, (3,1)->2 +, reversed negative
    static const int nxt[4] = {0, 2, 3, 1};
    if (nxt[x] == y) return {6 - x - y, false};
    return {6 - x - y, true};
  };
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      auto [c, negsign] = basemul(base(a), base(b));
      bool s = negsign ^ ((a & 1) != 0) ^ ((b & 1) != 0);
      int prod = make(c, false);
      table[a][b] = s ? neg(prod) : prod;
    }
  return FiniteGroup(names, table);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  std::vector<std::string> names;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < b.order(); ++j)
      names.push_back("(" + a.element_name(i) + "," + b.element_name(j) + ")");
  const int n = a.order() * b.order();
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  auto id = [&](int i, int j) { return i * b.order() + j; };
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < b.order(); ++j)
      for (int k = 0; k < a.order(); ++k)
        for (int l = 0; l < b.order(); ++l)
          table[id(i, j)][id(k, l)] = id(a.mul(i, k), b.mul(j, l));
  return FiniteGroup(names, table);
}

FiniteGroup group_by_name(const std::string& name) {
  if (name == "S3") return symmetric3();
  if (name == "Z2xZ2") return klein_four();
  if (name == "Q8") return quaternion8();
  if (name.size() >= 2 && name[0] == 'Z') {
    try {
      int n = std::stoi(name.substr(1));
      if (n >= 1 && n <= 64) return cyclic_group(n);
    } catch (const std::exception&) {
    }
  }
  throw ValidationError("unknown group name '" + name +
                        "' (expected Zn, S3, Z2xZ2 or Q8)");
}

}  // namespace cech
