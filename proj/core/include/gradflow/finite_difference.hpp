#pragma once

#include "gradflow/fields.hpp"

namespace gradflow {

/// Derivative-checking oracle built only from ScalarField::value.
/// Central first and second differences, both O(h^2).
struct FdSteps {
  double gradient = 1e-5;
  double hessian = 1e-4;
};

/// Steps are multiplied by max(1, ||p||_inf).
Jet2 fd_jet(const ScalarField& field, const Vector& p, const FdSteps& steps = {});

/// Same step for gradient and Hessian, used unscaled.
Jet2 fd_jet(const ScalarField& field, const Vector& p, double h);

}  // namespace gradflow
