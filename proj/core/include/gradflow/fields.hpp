#pragma once

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gradflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Points closer than this to a potential's center are rejected by evaluation.
inline constexpr double kSingularTolerance = 1e-9;

/// Second-order jet of a scalar field at a point.
struct Jet2 {
  Vector point;
  double value = 0.0;
  Vector gradient;
  Matrix hessian;

  int dimension() const { return static_cast<int>(point.size()); }
};

/// Trace of the Hessian.
double laplacian(const Jet2& jet);

enum class FieldKind { linear, polynomial, newtonian, dipole, combine };

std::string_view to_string(FieldKind kind);

/// coeff * prod_i x_i^exponents[i]
struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

struct FieldDescriptor;

/// Immutable, cheaply copyable handle to an exactly differentiable field on R^n.
///
/// Value, gradient and Hessian come from closed forms. Copies share the
/// underlying representation, so a field may be evaluated concurrently.
class ScalarField {
 public:
  class Impl;

  explicit ScalarField(std::shared_ptr<const Impl> impl);

  int dimension() const;
  bool harmonic() const;
  FieldKind kind() const;
  const FieldDescriptor& descriptor() const;

  /// Centers of the field's poles (empty for polynomial fields).
  const std::vector<Vector>& singular_centers() const;

  double value(const Vector& p) const;
  Jet2 jet(const Vector& p) const;

 private:
  std::shared_ptr<const Impl> impl_;
};

struct LinearSpec {
  Vector coeffs;
};

struct PolynomialSpec {
  int dimension = 0;
  std::vector<Monomial> terms;
};

/// ||p - c||^(2-n) for n >= 3, log ||p - c|| for n = 2.
struct NewtonianSpec {
  Vector center;
};

/// Directional derivative of the Newtonian potential along a unit direction.
struct DipoleSpec {
  Vector center;
  Vector direction;
};

struct WeightedField {
  double weight = 1.0;
  ScalarField field;
};

struct CombineSpec {
  std::vector<WeightedField> terms;
};

struct FieldDescriptor {
  std::variant<LinearSpec, PolynomialSpec, NewtonianSpec, DipoleSpec, CombineSpec> spec;
};

/// Throws DimensionMismatch, SingularPoint or NonfiniteValue.
Jet2 eval_jet(const ScalarField& field, const Vector& p);

ScalarField make_linear(Vector coeffs);

/// Any polynomial; the harmonic flag is set iff its Laplacian vanishes identically.
ScalarField make_polynomial(int dimension, std::vector<Monomial> terms);

/// Like make_polynomial but throws InvalidFieldSpec unless the Laplacian vanishes.
ScalarField make_harmonic_polynomial(int dimension, std::vector<Monomial> terms);

ScalarField make_newtonian(Vector center, int dimension);
ScalarField make_dipole(Vector center, Vector direction);
ScalarField combine(std::vector<WeightedField> terms);

/// Symbolic Laplacian by exponent arithmetic; like terms are merged and
/// cancelled terms dropped.
std::vector<Monomial> polynomial_laplacian(int dimension, const std::vector<Monomial>& terms);

}  // namespace gradflow
