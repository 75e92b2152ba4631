#include "cech/cochain.hpp"

#include <cmath>
#include <set>

namespace cech {

namespace {

std::vector<std::vector<int>> cochain_tuples(const AbstractNerve& nv, int degree) {
  if (degree < 0) throw ValidationError("cochain: negative degree");
  if (degree + 1 > nv.depth()) return {};
  return nv.tuples(degree + 1);
}

void require_abelian(const FiniteGroup& a) {
  if (!a.is_abelian())
    throw ValidationError("cochain: coefficient group must be abelian");
}

void check_shape(const AbstractNerve& nv, const FiniteGroup& a,
                 const AbelianCochain& c) {
  auto tuples = cochain_tuples(nv, c.degree);
  if (c.values.size() != tuples.size())
    throw ValidationError("cochain: values do not match the inhabited tuples");
  for (const auto& t : tuples) {
    auto it = c.values.find(t);
    if (it == c.values.end())
      throw ValidationError("cochain: missing value at " + tuple_name(nv, t));
    if (it->second < 0 || it->second >= a.order())
      throw ValidationError("cochain: value out of range at " + tuple_name(nv, t));
  }
}

}  // namespace

AbelianCochain unit_cochain(const AbstractNerve& nv, const FiniteGroup& a, int degree) {
  require_abelian(a);
  AbelianCochain c{degree, {}};
  for (const auto& t : cochain_tuples(nv, degree)) c.values[t] = a.unit();
  return c;
}

bool is_unit_cochain(const AbelianCochain& c, const FiniteGroup& a) {
  for (const auto& [t, v] : c.values)
    if (v != a.unit()) return false;
  return true;
}

AbelianCochain cech_coboundary(const AbstractNerve& nv, const FiniteGroup& a,
                               const AbelianCochain& c) {
  require_abelian(a);
  check_shape(nv, a, c);
  AbelianCochain d{c.degree + 1, {}};
  for (const auto& t : cochain_tuples(nv, c.degree + 1)) {
    int acc = a.unit();
    for (size_t i = 0; i < t.size(); ++i) {
      std::vector<int> face = t;
      face.erase(face.begin() + static_cast<long>(i));
      int v = c.values.at(face);
      acc = a.mul(acc, i % 2 == 0 ? v : a.inv(v));
    }
    d.values[t] = acc;
  }
  return d;
}

std::vector<AbelianCochain> all_cochains(const AbstractNerve& nv, const FiniteGroup& a,
                                         int degree, long long budget) {
  require_abelian(a);
  auto tuples = cochain_tuples(nv, degree);
  double log_count = tuples.size() * std::log(std::max(1, a.order()));
  if (log_count > std::log(static_cast<double>(budget)))
    throw BudgetError("all_cochains: enumeration exceeds budget");

  std::vector<AbelianCochain> out;
  AbelianCochain c{degree, {}};
  for (const auto& t : tuples) c.values[t] = a.unit();
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == tuples.size()) {
      out.push_back(c);
      return;
    }
    for (int v = 0; v < a.order(); ++v) {
      c.values[tuples[i]] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

long long cohomology_order(const AbstractNerve& nv, const FiniteGroup& a, int degree,
                           long long budget) {
  require_abelian(a);
  long long kernel = 0;
  for (const auto& c : all_cochains(nv, a, degree, budget))
    if (is_unit_cochain(cech_coboundary(nv, a, c), a)) ++kernel;

  std::set<AbelianCochain> image;
  if (degree == 0) {
    image.insert(unit_cochain(nv, a, 0));
  } else {
    for (const auto& c : all_cochains(nv, a, degree - 1, budget))
      image.insert(cech_coboundary(nv, a, c));
  }
  if (kernel % static_cast<long long>(image.size()) != 0)
    throw InternalError("cohomology_order: image does not divide kernel");
  return kernel / static_cast<long long>(image.size());
}

std::optional<AbelianCochain> solve_coboundary(const AbstractNerve& nv,
                                               const FiniteGroup& a,
                                               const AbelianCochain& xi,
                                               long long budget) {
  require_abelian(a);
  check_shape(nv, a, xi);
  if (xi.degree < 1) throw ValidationError("solve_coboundary: degree must be >= 1");
  for (const auto& z : all_cochains(nv, a, xi.degree - 1, budget))
    if (cech_coboundary(nv, a, z) == xi) return z;
  return std::nullopt;
}

}  // namespace cech
