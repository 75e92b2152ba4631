#include "cech/groupoid.hpp"

#include <algorithm>

namespace cech {

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> objects,
                               std::vector<std::string> arrows,
                               std::vector<int> src, std::vector<int> dst,
                               std::vector<int> units,
                               std::map<std::pair<int, int>, int> comp)
    : objects_(std::move(objects)),
      arrows_(std::move(arrows)),
      src_(std::move(src)),
      dst_(std::move(dst)),
      units_(std::move(units)),
      comp_(std::move(comp)) {
  const int n = object_count(), m = arrow_count();
  if (static_cast<int>(src_.size()) != m || static_cast<int>(dst_.size()) != m ||
      static_cast<int>(units_.size()) != n)
    throw ValidationError("FiniteGroupoid: inconsistent table sizes");
  from_.assign(n, {});
  into_.assign(n, {});
  for (int f = 0; f < m; ++f) {
    if (src_[f] < 0 || src_[f] >= n || dst_[f] < 0 || dst_[f] >= n)
      throw ValidationError("FiniteGroupoid: arrow endpoint out of range");
    from_[src_[f]].push_back(f);
    into_[dst_[f]].push_back(f);
  }
  for (int a = 0; a < n; ++a) {
    int e = units_[a];
    if (e < 0 || e >= m || src_[e] != a || dst_[e] != a)
      throw ValidationError("FiniteGroupoid: bad unit arrow");
  }
  // the composition map covers exactly the composable pairs
  long long expected = 0;
  for (int a = 0; a < n; ++a)
    expected += static_cast<long long>(from_[a].size()) * into_[a].size();
  if (static_cast<long long>(comp_.size()) != expected)
    throw ValidationError("FiniteGroupoid: composition defined on wrong pairs");
  for (const auto& [fg, c] : comp_) {
    auto [f, g] = fg;
    if (f < 0 || f >= m || g < 0 || g >= m || src_[f] != dst_[g])
      throw ValidationError("FiniteGroupoid: composition defined on wrong pairs");
    if (c < 0 || c >= m || src_[c] != src_[g] || dst_[c] != dst_[f])
      throw ValidationError("FiniteGroupoid: composite has wrong endpoints");
  }
  for (int f = 0; f < m; ++f)
    if (compose(f, units_[src_[f]]) != f || compose(units_[dst_[f]], f) != f)
      throw ValidationError("FiniteGroupoid: units are not neutral");
  for (const auto& [fg, c] : comp_) {
    auto [f, g] = fg;
    for (int h : into_[src_[g]])
      if (compose(c, h) != compose(f, compose(g, h)))
        throw ValidationError("FiniteGroupoid: composition not associative");
  }
  inv_.assign(m, -1);
  for (int f = 0; f < m; ++f) {
    for (int g : from_[dst_[f]])
      if (dst_[g] == src_[f] && compose(g, f) == units_[src_[f]] &&
          compose(f, g) == units_[dst_[f]]) {
        inv_[f] = g;
        break;
      }
    if (inv_[f] < 0) throw ValidationError("FiniteGroupoid: arrow without inverse");
  }
}

int FiniteGroupoid::compose(int f, int g) const {
  auto it = comp_.find({f, g});
  if (it == comp_.end())
    throw ValidationError("FiniteGroupoid: arrows not composable");
  return it->second;
}

std::vector<int> FiniteGroupoid::hom(int a, int b) const {
  std::vector<int> out;
  for (int f : from_[a])
    if (dst_[f] == b) out.push_back(f);
  return out;
}

std::vector<std::vector<int>> FiniteGroupoid::iso_classes() const {
  std::vector<int> cls(object_count(), -1);
  std::vector<std::vector<int>> out;
  for (int a = 0; a < object_count(); ++a) {
    if (cls[a] >= 0) continue;
    cls[a] = static_cast<int>(out.size());
    out.push_back({a});
    for (int b = a + 1; b < object_count(); ++b)
      if (cls[b] < 0 && isomorphic_objects(a, b)) {
        cls[b] = cls[a];
        out.back().push_back(b);
      }
  }
  return out;
}

FiniteGroupoid one_object_groupoid(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<int> src(n, 0), dst(n, 0);
  std::map<std::pair<int, int>, int> comp;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) comp[{a, b}] = g.mul(a, b);
  return FiniteGroupoid({"*"}, g.elements(), src, dst, {g.unit()}, std::move(comp));
}

FiniteGroupoid terminal_groupoid() {
  return FiniteGroupoid({"*"}, {"1"}, {0}, {0}, {0}, {{{0, 0}, 0}});
}

CheckResult check_functor(const GroupoidFunctor& f) {
  const FiniteGroupoid& s = *f.source;
  const FiniteGroupoid& t = *f.target;
  if (static_cast<int>(f.obj_map.size()) != s.object_count() ||
      static_cast<int>(f.arr_map.size()) != s.arrow_count())
    return CheckResult::fail("functor: map sizes do not match the source");
  for (int a = 0; a < s.arrow_count(); ++a) {
    if (t.src(f.arr_map[a]) != f.obj_map[s.src(a)] ||
        t.dst(f.arr_map[a]) != f.obj_map[s.dst(a)])
      return CheckResult::fail("functor: endpoints not preserved at arrow " +
                               s.arrow_name(a));
  }
  for (int o = 0; o < s.object_count(); ++o)
    if (f.arr_map[s.unit(o)] != t.unit(f.obj_map[o]))
      return CheckResult::fail("functor: unit not preserved at " + s.object_name(o));
  for (int a = 0; a < s.arrow_count(); ++a)
    for (int b = 0; b < s.arrow_count(); ++b) {
      if (s.src(a) != s.dst(b)) continue;
      if (f.arr_map[s.compose(a, b)] != t.compose(f.arr_map[a], f.arr_map[b]))
        return CheckResult::fail("functor: composition not preserved");
    }
  return CheckResult::pass();
}

bool fully_faithful(const GroupoidFunctor& f) {
  const FiniteGroupoid& s = *f.source;
  const FiniteGroupoid& t = *f.target;
  for (int a = 0; a < s.object_count(); ++a)
    for (int b = 0; b < s.object_count(); ++b) {
      std::vector<int> sh = s.hom(a, b);
      std::vector<int> th = t.hom(f.obj_map[a], f.obj_map[b]);
      std::vector<int> image;
      for (int x : sh) image.push_back(f.arr_map[x]);
      std::sort(image.begin(), image.end());
      if (std::unique(image.begin(), image.end()) != image.end()) return false;
      std::sort(th.begin(), th.end());
      if (image != th) return false;
    }
  return true;
}

bool essentially_surjective(const GroupoidFunctor& f) {
  const FiniteGroupoid& t = *f.target;
  for (int b = 0; b < t.object_count(); ++b) {
    bool hit = false;
    for (int a : f.obj_map)
      if (t.isomorphic_objects(a, b)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

GroupoidPresheaf::GroupoidPresheaf(
    const FinitePoset& space, std::vector<FiniteGroupoid> values,
    const std::function<int(int, int, int)>& restrict_obj_fn,
    const std::function<int(int, int, int)>& restrict_arr_fn)
    : space_(&space), opens_(space.all_opens()), values_(std::move(values)) {
  if (values_.size() != opens_.size())
    throw ValidationError("GroupoidPresheaf: need one groupoid per open");
  for (size_t i = 0; i < opens_.size(); ++i)
    open_lookup_[opens_[i].bits] = static_cast<int>(i);
  for (int v = 0; v < open_count(); ++v)
    for (int u = 0; u < open_count(); ++u) {
      if (!opens_[u].subset_of(opens_[v])) continue;
      std::vector<int> om(values_[v].object_count()), am(values_[v].arrow_count());
      for (int o = 0; o < values_[v].object_count(); ++o) {
        om[o] = restrict_obj_fn(v, u, o);
        if (om[o] < 0 || om[o] >= values_[u].object_count())
          throw ValidationError("GroupoidPresheaf: object restriction out of range");
      }
      for (int a = 0; a < values_[v].arrow_count(); ++a) {
        am[a] = restrict_arr_fn(v, u, a);
        if (am[a] < 0 || am[a] >= values_[u].arrow_count())
          throw ValidationError("GroupoidPresheaf: arrow restriction out of range");
      }
      obj_res_[{v, u}] = std::move(om);
      arr_res_[{v, u}] = std::move(am);
    }
  validate();
}

int GroupoidPresheaf::open_index(const Open& u) const {
  if (u.space != space_)
    throw ValidationError("GroupoidPresheaf: open over a different space");
  auto it = open_lookup_.find(u.bits);
  if (it == open_lookup_.end())
    throw InternalError("GroupoidPresheaf: open not in lattice");
  return it->second;
}

int GroupoidPresheaf::restrict_obj(int v, int u, int obj) const {
  auto it = obj_res_.find({v, u});
  if (it == obj_res_.end())
    throw ValidationError("GroupoidPresheaf: restriction along a non-inclusion");
  return it->second.at(obj);
}

int GroupoidPresheaf::restrict_arr(int v, int u, int arrow) const {
  auto it = arr_res_.find({v, u});
  if (it == arr_res_.end())
    throw ValidationError("GroupoidPresheaf: restriction along a non-inclusion");
  return it->second.at(arrow);
}

void GroupoidPresheaf::validate() const {
  for (int v = 0; v < open_count(); ++v) {
    for (int o = 0; o < values_[v].object_count(); ++o)
      if (restrict_obj(v, v, o) != o)
        throw ValidationError("GroupoidPresheaf: identity restriction not identity");
    for (int a = 0; a < values_[v].arrow_count(); ++a)
      if (restrict_arr(v, v, a) != a)
        throw ValidationError("GroupoidPresheaf: identity restriction not identity");
  }
  for (int v = 0; v < open_count(); ++v)
    for (int u = 0; u < open_count(); ++u) {
      if (!opens_[u].subset_of(opens_[v])) continue;
      // each restriction is a functor
      GroupoidFunctor f{&values_[v], &values_[u], obj_res_.at({v, u}),
                       arr_res_.at({v, u})};
      CheckResult r = check_functor(f);
      if (!r.ok)
        throw ValidationError("GroupoidPresheaf: restriction is not a functor: " +
                              r.diagnostic);
      // strictness: restrictions compose on the nose
      for (int w = 0; w < open_count(); ++w) {
        if (!opens_[w].subset_of(opens_[u])) continue;
        for (int o = 0; o < values_[v].object_count(); ++o)
          if (restrict_obj(u, w, restrict_obj(v, u, o)) != restrict_obj(v, w, o))
            throw ValidationError("GroupoidPresheaf: restrictions do not compose");
        for (int a = 0; a < values_[v].arrow_count(); ++a)
          if (restrict_arr(u, w, restrict_arr(v, u, a)) != restrict_arr(v, w, a))
            throw ValidationError("GroupoidPresheaf: restrictions do not compose");
      }
    }
}

GroupoidPresheaf one_object_presheaf(const GroupPresheaf& g) {
  std::vector<FiniteGroupoid> values;
  for (int u = 0; u < g.shape().open_count(); ++u)
    values.push_back(one_object_groupoid(g.group_at(u)));
  return GroupoidPresheaf(
      g.space(), std::move(values), [](int, int, int) { return 0; },
      [&](int v, int u, int a) { return g.restrict(v, u, a); });
}

}  // namespace cech
