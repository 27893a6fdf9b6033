#include "gradflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "gradflow/error.hpp"

namespace gradflow {

class ScalarField::Impl {
 public:
  Impl(FieldKind kind, int dimension, bool harmonic, FieldDescriptor descriptor,
       std::vector<Vector> centers)
      : kind_(kind),
        dimension_(dimension),
        harmonic_(harmonic),
        descriptor_(std::move(descriptor)),
        centers_(std::move(centers)) {}
  virtual ~Impl() = default;

  FieldKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  bool harmonic() const { return harmonic_; }
  const FieldDescriptor& descriptor() const { return descriptor_; }
  const std::vector<Vector>& centers() const { return centers_; }

  // Both assume p has the right size; singular checks happen here.
  virtual double value(const Vector& p) const = 0;
  virtual void accumulate_jet(const Vector& p, double weight, Jet2& out) const = 0;

 private:
  FieldKind kind_;
  int dimension_;
  bool harmonic_;
  FieldDescriptor descriptor_;
  std::vector<Vector> centers_;
};

namespace {

void require_dimension(int n, const char* what) {
  if (n < 2) {
    throw Error(ErrorCode::invalid_field_spec,
                std::string(what) + " requires dimension >= 2, got " + std::to_string(n));
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::invalid_field_spec, std::string(what) + " has non-finite entries");
  }
}

void check_size(const Vector& p, int n) {
  if (p.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "point has length " + std::to_string(p.size()) +
                                                   ", field dimension is " + std::to_string(n));
  }
}

class LinearImpl final : public ScalarField::Impl {
 public:
  explicit LinearImpl(Vector coeffs)
      : Impl(FieldKind::linear, static_cast<int>(coeffs.size()), true,
             FieldDescriptor{LinearSpec{coeffs}}, {}),
        coeffs_(std::move(coeffs)) {}

  double value(const Vector& p) const override { return coeffs_.dot(p); }

  void accumulate_jet(const Vector& p, double weight, Jet2& out) const override {
    out.value += weight * coeffs_.dot(p);
    out.gradient += weight * coeffs_;
  }

 private:
  Vector coeffs_;
};

class PolynomialImpl final : public ScalarField::Impl {
 public:
  PolynomialImpl(int dimension, std::vector<Monomial> terms, bool harmonic)
      : Impl(FieldKind::polynomial, dimension, harmonic,
             FieldDescriptor{PolynomialSpec{dimension, terms}}, {}),
        terms_(std::move(terms)) {
    for (const auto& m : terms_) {
      for (int e : m.exponents) max_degree_ = std::max(max_degree_, e);
    }
  }

  double value(const Vector& p) const override {
    const Matrix pw = powers(p);
    double v = 0.0;
    for (const auto& m : terms_) {
      double t = m.coeff;
      for (int i = 0; i < dimension(); ++i) t *= pw(i, m.exponents[i]);
      v += t;
    }
    return v;
  }

  void accumulate_jet(const Vector& p, double weight, Jet2& out) const override {
    const int n = dimension();
    const Matrix pw = powers(p);
    // x_i^(a_i - k), zero when the exponent would go negative
    auto pow_or_zero = [&](int i, int e) { return e < 0 ? 0.0 : pw(i, e); };

    for (const auto& m : terms_) {
      const auto& a = m.exponents;
      const double c = weight * m.coeff;

      double full = c;
      for (int i = 0; i < n; ++i) full *= pw(i, a[i]);
      out.value += full;

      for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        double others = c;
        for (int j = 0; j < n; ++j) {
          if (j != i) others *= pw(j, a[j]);
        }
        out.gradient[i] += others * a[i] * pw(i, a[i] - 1);
        if (a[i] >= 2) {
          out.hessian(i, i) += others * a[i] * (a[i] - 1) * pow_or_zero(i, a[i] - 2);
        }
        for (int j = i + 1; j < n; ++j) {
          if (a[j] == 0) continue;
          double rest = c;
          for (int k = 0; k < n; ++k) {
            if (k != i && k != j) rest *= pw(k, a[k]);
          }
          const double hij = rest * a[i] * pw(i, a[i] - 1) * a[j] * pw(j, a[j] - 1);
          out.hessian(i, j) += hij;
          out.hessian(j, i) += hij;
        }
      }
    }
  }

 private:
  Matrix powers(const Vector& p) const {
    Matrix pw(dimension(), max_degree_ + 1);
    for (int i = 0; i < dimension(); ++i) {
      pw(i, 0) = 1.0;
      for (int k = 1; k <= max_degree_; ++k) pw(i, k) = pw(i, k - 1) * p[i];
    }
    return pw;
  }

  std::vector<Monomial> terms_;
  int max_degree_ = 0;
};

// Shared radial machinery: for x = p - c, r = ||x||, the base potential has
// gradient s * r^-n * x with s = 2 - n (n >= 3) or s = 1 (n = 2, log r).
double radial_scale(int n) { return n == 2 ? 1.0 : static_cast<double>(2 - n); }

double checked_radius(const Vector& x) {
  const double r = x.norm();
  if (r < kSingularTolerance) {
    throw Error(ErrorCode::singular_point, "point coincides with a potential center");
  }
  return r;
}

class NewtonianImpl final : public ScalarField::Impl {
 public:
  explicit NewtonianImpl(Vector center)
      : Impl(FieldKind::newtonian, static_cast<int>(center.size()), true,
             FieldDescriptor{NewtonianSpec{center}}, {center}),
        center_(std::move(center)) {}

  double value(const Vector& p) const override {
    const double r = checked_radius(p - center_);
    const int n = dimension();
    return n == 2 ? std::log(r) : std::pow(r, 2 - n);
  }

  void accumulate_jet(const Vector& p, double weight, Jet2& out) const override {
    const int n = dimension();
    const Vector x = p - center_;
    const double r = checked_radius(x);
    const double s = radial_scale(n);
    const double rn = std::pow(r, -n);

    out.value += weight * (n == 2 ? std::log(r) : std::pow(r, 2 - n));
    out.gradient += (weight * s * rn) * x;
    // s r^-n I - s n r^-(n+2) x x^T
    const double a = weight * s * rn;
    const double b = -weight * s * n * rn / (r * r);
    for (int i = 0; i < n; ++i) {
      out.hessian(i, i) += a + b * x[i] * x[i];
      for (int j = i + 1; j < n; ++j) {
        const double hij = b * x[i] * x[j];
        out.hessian(i, j) += hij;
        out.hessian(j, i) += hij;
      }
    }
  }

 private:
  Vector center_;
};

class DipoleImpl final : public ScalarField::Impl {
 public:
  DipoleImpl(Vector center, Vector direction)
      : Impl(FieldKind::dipole, static_cast<int>(center.size()), true,
             FieldDescriptor{DipoleSpec{center, direction}}, {center}),
        center_(std::move(center)),
        direction_(std::move(direction)) {}

  double value(const Vector& p) const override {
    const Vector x = p - center_;
    const double r = checked_radius(x);
    return radial_scale(dimension()) * std::pow(r, -dimension()) * direction_.dot(x);
  }

  void accumulate_jet(const Vector& p, double weight, Jet2& out) const override {
    const int n = dimension();
    const Vector x = p - center_;
    const double r = checked_radius(x);
    const double r2 = r * r;
    const double c = weight * radial_scale(n) * std::pow(r, -n);
    const double dx = direction_.dot(x);
    const double nd = static_cast<double>(n);

    out.value += c * dx;
    out.gradient += c * direction_ - (c * nd * dx / r2) * x;
    // -c n r^-2 (d x^T + x d^T + (d.x) I) + c n (n+2) r^-4 (d.x) x x^T
    const double a = -c * nd / r2;
    const double b = c * nd * (nd + 2.0) * dx / (r2 * r2);
    for (int i = 0; i < n; ++i) {
      out.hessian(i, i) += a * (2.0 * direction_[i] * x[i] + dx) + b * x[i] * x[i];
      for (int j = i + 1; j < n; ++j) {
        const double hij = a * (direction_[i] * x[j] + x[i] * direction_[j]) + b * x[i] * x[j];
        out.hessian(i, j) += hij;
        out.hessian(j, i) += hij;
      }
    }
  }

 private:
  Vector center_;
  Vector direction_;
};

class CombineImpl final : public ScalarField::Impl {
 public:
  CombineImpl(int dimension, bool harmonic, std::vector<WeightedField> terms,
              std::vector<Vector> centers)
      : Impl(FieldKind::combine, dimension, harmonic, FieldDescriptor{CombineSpec{terms}},
             std::move(centers)),
        terms_(std::move(terms)) {}

  double value(const Vector& p) const override {
    double v = 0.0;
    for (const auto& t : terms_) v += t.weight * t.field.value(p);
    return v;
  }

  void accumulate_jet(const Vector& p, double weight, Jet2& out) const override {
    for (const auto& t : terms_) {
      const Jet2 j = t.field.jet(p);
      out.value += weight * t.weight * j.value;
      out.gradient += (weight * t.weight) * j.gradient;
      out.hessian += (weight * t.weight) * j.hessian;
    }
  }

 private:
  std::vector<WeightedField> terms_;
};

using ExponentKey = std::vector<int>;

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::linear: return "linear";
    case FieldKind::polynomial: return "polynomial";
    case FieldKind::newtonian: return "newtonian";
    case FieldKind::dipole: return "dipole";
    case FieldKind::combine: return "combine";
  }
  return "unknown";
}

double laplacian(const Jet2& jet) { return jet.hessian.trace(); }

ScalarField::ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

int ScalarField::dimension() const { return impl_->dimension(); }
bool ScalarField::harmonic() const { return impl_->harmonic(); }
FieldKind ScalarField::kind() const { return impl_->kind(); }
const FieldDescriptor& ScalarField::descriptor() const { return impl_->descriptor(); }
const std::vector<Vector>& ScalarField::singular_centers() const { return impl_->centers(); }

double ScalarField::value(const Vector& p) const {
  check_size(p, dimension());
  const double v = impl_->value(p);
  if (!std::isfinite(v)) throw Error(ErrorCode::nonfinite_value, "field value is not finite");
  return v;
}

Jet2 ScalarField::jet(const Vector& p) const {
  const int n = dimension();
  check_size(p, n);
  Jet2 out{p, 0.0, Vector::Zero(n), Matrix::Zero(n, n)};
  impl_->accumulate_jet(p, 1.0, out);
  if (!std::isfinite(out.value) || !out.gradient.allFinite() || !out.hessian.allFinite()) {
    throw Error(ErrorCode::nonfinite_value, "jet has non-finite entries");
  }
  return out;
}

Jet2 eval_jet(const ScalarField& field, const Vector& p) { return field.jet(p); }

ScalarField make_linear(Vector coeffs) {
  require_dimension(static_cast<int>(coeffs.size()), "linear field");
  require_finite(coeffs, "linear coefficients");
  return ScalarField(std::make_shared<LinearImpl>(std::move(coeffs)));
}

std::vector<Monomial> polynomial_laplacian(int dimension, const std::vector<Monomial>& terms) {
  // sum and sum of magnitudes per exponent, so cancellation can be judged relatively
  std::map<ExponentKey, std::pair<double, double>> acc;
  for (const auto& m : terms) {
    for (int i = 0; i < dimension; ++i) {
      const int a = m.exponents[static_cast<std::size_t>(i)];
      if (a < 2) continue;
      ExponentKey key = m.exponents;
      key[static_cast<std::size_t>(i)] -= 2;
      const double c = m.coeff * a * (a - 1);
      auto& [sum, mag] = acc[key];
      sum += c;
      mag += std::abs(c);
    }
  }
  std::vector<Monomial> out;
  for (auto& [key, sm] : acc) {
    if (std::abs(sm.first) > 1e-12 * sm.second) out.push_back(Monomial{sm.first, key});
  }
  return out;
}

namespace {

void validate_polynomial(int dimension, const std::vector<Monomial>& terms) {
  require_dimension(dimension, "polynomial field");
  for (const auto& m : terms) {
    if (static_cast<int>(m.exponents.size()) != dimension) {
      throw Error(ErrorCode::dimension_mismatch,
                  "monomial has " + std::to_string(m.exponents.size()) +
                      " exponents, polynomial dimension is " + std::to_string(dimension));
    }
    if (std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e < 0; })) {
      throw Error(ErrorCode::invalid_field_spec, "monomial exponents must be non-negative");
    }
    if (!std::isfinite(m.coeff)) {
      throw Error(ErrorCode::invalid_field_spec, "monomial coefficient is not finite");
    }
  }
}

}  // namespace

ScalarField make_polynomial(int dimension, std::vector<Monomial> terms) {
  validate_polynomial(dimension, terms);
  const bool harmonic = polynomial_laplacian(dimension, terms).empty();
  return ScalarField(std::make_shared<PolynomialImpl>(dimension, std::move(terms), harmonic));
}

ScalarField make_harmonic_polynomial(int dimension, std::vector<Monomial> terms) {
  ScalarField f = make_polynomial(dimension, std::move(terms));
  if (!f.harmonic()) {
    throw Error(ErrorCode::invalid_field_spec,
                "polynomial declared harmonic has a non-vanishing Laplacian");
  }
  return f;
}

ScalarField make_newtonian(Vector center, int dimension) {
  if (center.size() != dimension) {
    throw Error(ErrorCode::dimension_mismatch, "newtonian center has length " +
                                                   std::to_string(center.size()) + ", expected " +
                                                   std::to_string(dimension));
  }
  require_dimension(dimension, "newtonian field");
  require_finite(center, "newtonian center");
  return ScalarField(std::make_shared<NewtonianImpl>(std::move(center)));
}

ScalarField make_dipole(Vector center, Vector direction) {
  if (center.size() != direction.size()) {
    throw Error(ErrorCode::dimension_mismatch, "dipole center and direction differ in length");
  }
  require_dimension(static_cast<int>(center.size()), "dipole field");
  require_finite(center, "dipole center");
  require_finite(direction, "dipole direction");
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_field_spec, "dipole direction must be a unit vector");
  }
  return ScalarField(std::make_shared<DipoleImpl>(std::move(center), std::move(direction)));
}

ScalarField combine(std::vector<WeightedField> terms) {
  if (terms.empty()) throw Error(ErrorCode::invalid_field_spec, "combine needs at least one term");
  const int n = terms.front().field.dimension();
  bool harmonic = true;
  std::vector<Vector> centers;
  for (const auto& t : terms) {
    if (t.field.dimension() != n) {
      throw Error(ErrorCode::dimension_mismatch, "combined fields have different dimensions");
    }
    if (!std::isfinite(t.weight)) {
      throw Error(ErrorCode::invalid_field_spec, "combine weight is not finite");
    }
    harmonic = harmonic && t.field.harmonic();
    const auto& c = t.field.singular_centers();
    centers.insert(centers.end(), c.begin(), c.end());
  }
  return ScalarField(
      std::make_shared<CombineImpl>(n, harmonic, std::move(terms), std::move(centers)));
}

}  // namespace gradflow
