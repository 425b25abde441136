#include "specclass/kde.hpp"

#include <cmath>
#include <vector>

#include "specclass/errors.hpp"
#include "specclass/numerics.hpp"

namespace specclass {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kPi = 3.14159265358979323846;

double gaussian_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double cauchy_pdf(double x) { return 1.0 / (kPi * (1.0 + x * x)); }

// Integral of k over the real line through the substitution x = tan(theta),
// dx = sec^2(theta) dtheta, evaluated with composite Simpson. A finite
// window would undercount the Cauchy kernel's tails by ~1e-2, so the whole
// line is integrated.
template <typename Fn>
double whole_line_integral(Fn k) {
  const int intervals = 1 << 12;
  const double lo = -kPi / 2.0;
  const double step = kPi / intervals;
  auto integrand = [&](double theta) {
    const double c = std::cos(theta);
    const double value = k(std::tan(theta)) / (c * c);
    return std::isfinite(value) ? value : 0.0;
  };
  double acc = integrand(lo) + integrand(lo + intervals * step);
  for (int i = 1; i < intervals; ++i) {
    acc += integrand(lo + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * step / 3.0;
}

template <typename Fn>
void verify_kernel(const std::string& name, Fn k) {
  const double probes[] = {0.0, 0.1, 0.7, 1.3, 2.5, 10.0, 37.5};
  for (double x : probes) {
    const double left = k(-x);
    const double right = k(x);
    if (!(left >= 0.0) || !(right >= 0.0) || left != right) {
      throw ValueError("kernel '" + name + "' is not symmetric and non-negative");
    }
  }
  const double integral = whole_line_integral(k);
  if (std::abs(integral - 1.0) > 1e-6) {
    throw ValueError("kernel '" + name + "' integrates to " + std::to_string(integral) +
                     ", expected 1 within 1e-6");
  }
}

struct Source {
  double position;  // normalised energy
  double weight;    // channel count
};

template <typename Fn>
std::vector<double> kernel_weights(const std::vector<double>& positions, const std::vector<Source>& sources,
                                   double bandwidth, std::optional<double> cutoff_radius, Fn k) {
  const double inv_h = 1.0 / bandwidth;
  std::vector<double> weights(positions.size());
  std::vector<double> terms;
  terms.reserve(sources.size());

  std::size_t lo = 0;
  std::size_t hi = sources.size();
  const double radius = cutoff_radius ? *cutoff_radius * bandwidth : 0.0;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const double x = positions[j];
    if (cutoff_radius) {
      // Sources and outputs are both in ascending position order, so the
      // truncation window advances monotonically.
      while (lo < sources.size() && sources[lo].position < x - radius) ++lo;
      hi = lo;
      while (hi < sources.size() && sources[hi].position <= x + radius) ++hi;
    }
    terms.clear();
    for (std::size_t t = lo; t < hi; ++t) {
      terms.push_back(sources[t].weight * k((x - sources[t].position) * inv_h));
    }
    weights[j] = pairwise_sum(terms);
    if (!std::isfinite(weights[j])) {
      throw NonFiniteDensity("non-finite kernel weight at channel " + std::to_string(j));
    }
  }
  return weights;
}

}  // namespace

Kernel::Kernel(Shape shape) : shape_(shape), name_(shape == Shape::Gaussian ? "gaussian" : "cauchy") {
  if (shape_ == Shape::Gaussian) {
    verify_kernel(name_, gaussian_pdf);
  } else {
    verify_kernel(name_, cauchy_pdf);
  }
}

Kernel Kernel::from_name(std::string_view name) {
  if (name == "gaussian") return gaussian();
  if (name == "cauchy") return cauchy();
  throw ValueError("unknown kernel '" + std::string(name) + "' (expected 'gaussian' or 'cauchy')");
}

double Kernel::evaluate(double x) const {
  return shape_ == Shape::Gaussian ? gaussian_pdf(x) : cauchy_pdf(x);
}

KdeConfig::KdeConfig(Kernel kernel_in, double bandwidth_in, std::optional<double> cutoff_radius_in)
    : kernel(kernel_in), bandwidth(bandwidth_in), cutoff_radius(cutoff_radius_in) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValueError("bandwidth must be a positive finite value");
  }
  if (cutoff_radius) {
    if (!(*cutoff_radius >= 8.0)) {
      throw ValueError("cutoff radius must be at least 8 bandwidth multiples");
    }
    if (kernel.shape() != Kernel::Shape::Gaussian) {
      throw ValueError("cutoff is only available for the gaussian kernel; the cauchy kernel's tails are too heavy to truncate");
    }
  }
}

DiscreteDistribution estimate_density(const Spectrum& s, const KdeConfig& config) {
  if (total_counts(s) == 0) {
    throw EmptySpectrum("cannot estimate a density from a spectrum with zero total counts");
  }
  const std::size_t n = s.grid->channel_count();
  if (n == 1) {
    return DiscreteDistribution(s.grid, {1.0});
  }

  const std::vector<double>& positions = s.grid->normalized();
  std::vector<Source> sources;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.counts[i] > 0) {
      sources.push_back({positions[i], static_cast<double>(s.counts[i])});
    }
  }

  std::vector<double> weights;
  if (config.kernel.shape() == Kernel::Shape::Gaussian) {
    weights = kernel_weights(positions, sources, config.bandwidth, config.cutoff_radius, gaussian_pdf);
  } else {
    weights = kernel_weights(positions, sources, config.bandwidth, std::nullopt, cauchy_pdf);
  }

  const double total = pairwise_sum(weights);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NonFiniteDensity("kernel weights sum to a non-positive or non-finite total");
  }
  for (double& w : weights) {
    w /= total;
  }
  return DiscreteDistribution(s.grid, std::move(weights));
}

DiscreteDistribution estimate_log_density(const Spectrum& s, const KdeConfig& config) {
  return estimate_density(s, config);
}

}  // namespace specclass
