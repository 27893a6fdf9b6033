#include "gradflow/catalog.hpp"

#include <algorithm>
#include <string>

#include "gradflow/error.hpp"

namespace gradflow {

const std::vector<FieldTemplate>& harmonic_templates() {
  static const std::vector<FieldTemplate> kTemplates = {
      {"linear", "random linear function c.x", 2, true},
      {"x2-y2", "x1^2 - x2^2", 2, true},
      {"xy", "x1 x2", 2, true},
      {"re-z3", "Re((x1 + i x2)^3) = x1^3 - 3 x1 x2^2", 2, true},
      {"saddle3", "x1^2 + x2^2 - 2 x3^2", 3, true},
      {"product", "x1 x2 ... xn", 2, true},
      {"multi-index", "random sum of Re/Im (x_i + i x_j)^k, k in 2..4", 2, true},
      {"newtonian", "||p - c||^(2-n) (log ||p - c|| for n = 2), c outside the box", 2, true},
      {"dipole", "Newtonian dipole with random unit direction, c outside the box", 2, true},
      {"combo3", "weighted sum of three random harmonic templates", 2, true},
  };
  return kTemplates;
}

const std::vector<FieldTemplate>& nonharmonic_templates() {
  static const std::vector<FieldTemplate> kTemplates = {
      {"sphere", "x1^2 + ... + xn^2", 2, false},
      {"mixed-cubic", "x1^3 + x1 x2^2 + x2^2 + 0.5 x1 xn", 2, false},
  };
  return kTemplates;
}

const FieldTemplate& find_template(std::string_view name) {
  for (const auto* list : {&harmonic_templates(), &nonharmonic_templates()}) {
    for (const auto& t : *list) {
      if (t.name == name) return t;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown field template '" + std::string(name) + "'");
}

std::vector<Monomial> complex_power_terms(int dimension, int i, int j, int k, bool imaginary,
                                          double scale) {
  std::vector<Monomial> out;
  double binom = 1.0;
  for (int m = 0; m <= k; ++m) {
    if (m > 0) binom = binom * (k - m + 1) / m;
    // i^m contributes to the real part for even m, imaginary part for odd m
    const bool odd = (m % 2) == 1;
    if (odd == imaginary) {
      const int quarter = odd ? (m - 1) / 2 : m / 2;
      const double sign = (quarter % 2 == 0) ? 1.0 : -1.0;
      std::vector<int> e(static_cast<std::size_t>(dimension), 0);
      e[static_cast<std::size_t>(i)] += k - m;
      e[static_cast<std::size_t>(j)] += m;
      out.push_back(Monomial{scale * sign * binom, std::move(e)});
    }
  }
  return out;
}

namespace {

std::vector<int> unit_exponents(int n, std::initializer_list<std::pair<int, int>> entries) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (auto [i, a] : entries) e[static_cast<std::size_t>(i)] = a;
  return e;
}

Vector center_outside(int n, const SamplingBox& box, Rng& rng) {
  Vector c(n);
  for (int i = 0; i < n; ++i) c[i] = box.lo - 0.5 - rng.uniform(0.0, 0.5);
  return c;
}

Vector random_unit(int n, Rng& rng) {
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
  } while (v.norm() < 1e-3);
  return v.normalized();
}

ScalarField instantiate_leaf(std::string_view name, int n, const SamplingBox& box, Rng& rng) {
  if (name == "linear") {
    return make_linear(rng.uniform(0.5, 2.0) * random_unit(n, rng));
  }
  if (name == "x2-y2") {
    return make_harmonic_polynomial(
        n, {{1.0, unit_exponents(n, {{0, 2}})}, {-1.0, unit_exponents(n, {{1, 2}})}});
  }
  if (name == "xy") {
    return make_harmonic_polynomial(n, {{1.0, unit_exponents(n, {{0, 1}, {1, 1}})}});
  }
  if (name == "re-z3") {
    return make_harmonic_polynomial(n, complex_power_terms(n, 0, 1, 3, false));
  }
  if (name == "saddle3") {
    return make_harmonic_polynomial(n, {{1.0, unit_exponents(n, {{0, 2}})},
                                        {1.0, unit_exponents(n, {{1, 2}})},
                                        {-2.0, unit_exponents(n, {{2, 2}})}});
  }
  if (name == "product") {
    return make_harmonic_polynomial(n, {{1.0, std::vector<int>(static_cast<std::size_t>(n), 1)}});
  }
  if (name == "multi-index") {
    std::vector<Monomial> terms;
    for (int t = 0; t < 3; ++t) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      const int k = 2 + static_cast<int>(rng.below(3));
      const bool imaginary = rng.below(2) == 1;
      auto part = complex_power_terms(n, i, j, k, imaginary, rng.uniform(0.5, 1.5));
      terms.insert(terms.end(), part.begin(), part.end());
    }
    return make_harmonic_polynomial(n, std::move(terms));
  }
  if (name == "newtonian") {
    return make_newtonian(center_outside(n, box, rng), n);
  }
  if (name == "dipole") {
    Vector c = center_outside(n, box, rng);
    return make_dipole(std::move(c), random_unit(n, rng));
  }
  if (name == "sphere") {
    std::vector<Monomial> terms;
    for (int i = 0; i < n; ++i) terms.push_back({1.0, unit_exponents(n, {{i, 2}})});
    return make_polynomial(n, std::move(terms));
  }
  if (name == "mixed-cubic") {
    return make_polynomial(n, {{1.0, unit_exponents(n, {{0, 3}})},
                               {1.0, unit_exponents(n, {{0, 1}, {1, 2}})},
                               {1.0, unit_exponents(n, {{1, 2}})},
                               {0.5, n == 2 ? unit_exponents(n, {{0, 1}, {1, 1}})
                                            : unit_exponents(n, {{0, 1}, {n - 1, 1}})}});
  }
  throw Error(ErrorCode::invalid_argument, "unknown field template '" + std::string(name) + "'");
}

}  // namespace

ScalarField instantiate_template(std::string_view name, int dimension, const SamplingBox& box,
                                 Rng& rng) {
  const FieldTemplate& t = find_template(name);
  if (dimension < t.min_dimension) {
    throw Error(ErrorCode::invalid_argument, "template '" + t.name + "' needs dimension >= " +
                                                 std::to_string(t.min_dimension));
  }
  if (name != "combo3") return instantiate_leaf(name, dimension, box, rng);

  std::vector<std::string_view> pool;
  for (const auto& h : harmonic_templates()) {
    if (h.name != "combo3" && dimension >= h.min_dimension) pool.push_back(h.name);
  }
  std::vector<WeightedField> terms;
  for (int k = 0; k < 3; ++k) {
    const auto pick = pool[rng.below(pool.size())];
    const double sign = rng.below(2) == 0 ? 1.0 : -1.0;
    const double weight = sign * rng.uniform(0.5, 1.5);
    terms.push_back({weight, instantiate_leaf(pick, dimension, box, rng)});
  }
  return combine(std::move(terms));
}

}  // namespace gradflow
