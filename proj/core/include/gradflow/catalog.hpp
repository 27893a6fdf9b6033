#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gradflow/fields.hpp"
#include "gradflow/random.hpp"

namespace gradflow {

/// Named families of test fields that can be instantiated in any supported
/// dimension. Singular centers are placed outside the sampling box.
struct FieldTemplate {
  std::string name;
  std::string description;
  int min_dimension = 2;
  bool harmonic = true;
};

/// Harmonic families used by the random scenario generator.
const std::vector<FieldTemplate>& harmonic_templates();

/// Non-harmonic families, used by derivative and curvature checks.
const std::vector<FieldTemplate>& nonharmonic_templates();

const FieldTemplate& find_template(std::string_view name);

struct SamplingBox {
  double lo = 1.0;
  double hi = 2.0;
};

/// Throws InvalidArgument for unknown names or unsupported dimensions.
ScalarField instantiate_template(std::string_view name, int dimension, const SamplingBox& box,
                                 Rng& rng);

/// Re((x_i + i x_j)^k) or Im(...) expanded into monomials.
std::vector<Monomial> complex_power_terms(int dimension, int i, int j, int k, bool imaginary,
                                          double scale = 1.0);

}  // namespace gradflow
