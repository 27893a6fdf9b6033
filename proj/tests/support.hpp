#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gradflow/catalog.hpp"
#include "gradflow/fields.hpp"
#include "gradflow/random.hpp"

namespace gradflow::testing {

struct NamedField {
  std::string name;
  ScalarField field;
};

inline const SamplingBox kBox{1.0, 2.0};

/// Every catalog template valid in dimension n, one random instance each.
inline std::vector<NamedField> catalog_fields(int n, Rng& rng, bool include_nonharmonic = true) {
  std::vector<NamedField> out;
  for (const auto* list : {&harmonic_templates(), &nonharmonic_templates()}) {
    if (list == &nonharmonic_templates() && !include_nonharmonic) continue;
    for (const auto& t : *list) {
      if (n < t.min_dimension) continue;
      out.push_back({t.name, instantiate_template(t.name, n, kBox, rng)});
    }
  }
  return out;
}

inline Vector random_point(int n, Rng& rng, double lo = kBox.lo, double hi = kBox.hi) {
  Vector p(n);
  for (int i = 0; i < n; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline std::vector<int> exps(std::initializer_list<int> e) { return std::vector<int>(e); }

inline ScalarField sphere_quadratic(int n) {
  std::vector<Monomial> terms;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 2;
    terms.push_back({1.0, e});
  }
  return make_polynomial(n, terms);
}

/// p^T A p + b^T p as monomials (A symmetric).
inline ScalarField quadratic_form_field(const Matrix& a, const Vector& b) {
  const int n = static_cast<int>(b.size());
  std::vector<Monomial> terms;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 2;
    terms.push_back({a(i, i), e});
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> f(static_cast<std::size_t>(n), 0);
      f[static_cast<std::size_t>(i)] = 1;
      f[static_cast<std::size_t>(j)] = 1;
      terms.push_back({2.0 * a(i, j), f});
    }
    std::vector<int> g(static_cast<std::size_t>(n), 0);
    g[static_cast<std::size_t>(i)] = 1;
    terms.push_back({b[i], g});
  }
  return make_polynomial(n, terms);
}

/// Random orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_rotation(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// max|a - b| / max(max|b|, floor)
inline double max_rel(const Matrix& a, const Matrix& b, double floor) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), floor);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace gradflow::testing
