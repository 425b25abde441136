#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "specclass/spectral_model.hpp"

namespace specclass {

// Smoothing kernel for the discrete density estimator. Only symmetric,
// unit-integral kernels are admissible; both properties are verified
// numerically when a kernel is constructed.
//
// The Cauchy kernel is the standard density 1/(pi*(1+x^2)). Its tails decay
// like x^-2, so it never gets a truncation fast path.
class Kernel {
public:
  enum class Shape { Gaussian, Cauchy };

  static Kernel gaussian() { return Kernel(Shape::Gaussian); }
  static Kernel cauchy() { return Kernel(Shape::Cauchy); }
  static Kernel from_name(std::string_view name);

  double evaluate(double x) const;
  Shape shape() const { return shape_; }
  const std::string& name() const { return name_; }

private:
  explicit Kernel(Shape shape);

  Shape shape_;
  std::string name_;
};

struct KdeConfig {
  // bandwidth is in normalised-axis units: the energy grid is mapped to
  // [0,1] before any kernel evaluation.
  KdeConfig(Kernel kernel, double bandwidth, std::optional<double> cutoff_radius = std::nullopt);

  Kernel kernel;
  double bandwidth;
  // Gaussian-only truncation window, in bandwidth multiples (>= 8). The
  // Gaussian tail beyond 10 sigma is below 1e-22, so a radius of 10 keeps the
  // truncated result within 1e-12 of the exact double loop.
  std::optional<double> cutoff_radius;
};

// Discrete kernel density estimate of a fully measured spectrum:
// weight every channel j by sum_i c_i * k((g_j - g_i)/h) over the source
// channels with c_i > 0, then normalise the weights to a unit-sum
// distribution on the same grid.
DiscreteDistribution estimate_density(const Spectrum& s, const KdeConfig& config);

// Same estimate; named separately for callers that consume the floored
// log-probabilities (classifier training). Probabilities are identical to
// estimate_density; logs are floored at kLogFloor.
DiscreteDistribution estimate_log_density(const Spectrum& s, const KdeConfig& config);

}  // namespace specclass
