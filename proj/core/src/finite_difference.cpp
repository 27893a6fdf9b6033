#include "gradflow/finite_difference.hpp"

#include <algorithm>
#include <string>

#include "gradflow/error.hpp"

namespace gradflow {

namespace {

Jet2 central_differences(const ScalarField& field, const Vector& p, double hg, double hh) {
  if (!(hg > 0.0) || !(hh > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "finite-difference step must be positive");
  }
  const int n = field.dimension();
  if (p.size() != n) {
    throw Error(ErrorCode::dimension_mismatch,
                "point has length " + std::to_string(p.size()) + ", field dimension is " +
                    std::to_string(n));
  }
  auto f = [&](const Vector& q) { return field.value(q); };
  auto shifted = [&](int i, double di, int j, double dj) {
    Vector q = p;
    q[i] += di;
    if (j >= 0) q[j] += dj;
    return f(q);
  };

  Jet2 jet{p, f(p), Vector::Zero(n), Matrix::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    jet.gradient[i] = (shifted(i, hg, -1, 0.0) - shifted(i, -hg, -1, 0.0)) / (2.0 * hg);
  }
  for (int i = 0; i < n; ++i) {
    jet.hessian(i, i) =
        (shifted(i, hh, -1, 0.0) - 2.0 * jet.value + shifted(i, -hh, -1, 0.0)) / (hh * hh);
    for (int j = i + 1; j < n; ++j) {
      const double hij = (shifted(i, hh, j, hh) - shifted(i, hh, j, -hh) -
                          shifted(i, -hh, j, hh) + shifted(i, -hh, j, -hh)) /
                         (4.0 * hh * hh);
      jet.hessian(i, j) = hij;
      jet.hessian(j, i) = hij;
    }
  }
  return jet;
}

}  // namespace

Jet2 fd_jet(const ScalarField& field, const Vector& p, const FdSteps& steps) {
  const double scale = p.size() > 0 ? std::max(1.0, p.cwiseAbs().maxCoeff()) : 1.0;
  return central_differences(field, p, steps.gradient * scale, steps.hessian * scale);
}

Jet2 fd_jet(const ScalarField& field, const Vector& p, double h) {
  return central_differences(field, p, h, h);
}

}  // namespace gradflow
