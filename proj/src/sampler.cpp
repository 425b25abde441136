#include "specclass/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "specclass/errors.hpp"
#include "specclass/numerics.hpp"

namespace specclass {

namespace detail {

namespace {

// Zig-zag inversion: enumerate the support outward from the start index,
// subtracting pmf terms from u until it is exhausted. pmf values are obtained
// by recurrence from the starting value, so nothing underflows as long as the
// start is at (or near) the mode. `down_ratio(k)` is pmf(k-1)/pmf(k) and
// `up_ratio(k)` is pmf(k+1)/pmf(k).
template <typename DownRatio, typename UpRatio>
std::int64_t invert_from_mode(double u, std::int64_t mode, std::int64_t lo, std::int64_t hi, double pmf_at_mode,
                              DownRatio down_ratio, UpRatio up_ratio) {
  double acc = pmf_at_mode;
  if (u <= acc) return mode;
  std::int64_t down = mode;
  std::int64_t up = mode;
  double pmf_down = pmf_at_mode;
  double pmf_up = pmf_at_mode;
  while (down > lo || up < hi) {
    if (up < hi) {
      pmf_up *= up_ratio(up);
      ++up;
      acc += pmf_up;
      if (u <= acc) return up;
    }
    if (down > lo) {
      pmf_down *= down_ratio(down);
      --down;
      acc += pmf_down;
      if (u <= acc) return down;
    }
  }
  // u fell into the sliver of rounding error above the accumulated total.
  return mode;
}

}  // namespace

std::int64_t sample_binomial(Xoshiro256pp& rng, std::int64_t n, double p) {
  if (n <= 0) {
    if (n == 0) return 0;
    throw ValueError("binomial draw count must be non-negative");
  }
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - sample_binomial(rng, n, 1.0 - p);

  const double u = rng.next_unit();
  const double nd = static_cast<double>(n);
  const std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * p);
  double log_pmf;
  if (mode == 0) {
    log_pmf = nd * std::log1p(-p);
  } else {
    const double kd = static_cast<double>(mode);
    log_pmf = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
              (nd - kd) * std::log1p(-p);
  }
  const double odds = p / (1.0 - p);
  auto down_ratio = [&](std::int64_t k) {
    return static_cast<double>(k) / (static_cast<double>(n - k + 1) * odds);
  };
  auto up_ratio = [&](std::int64_t k) {
    return static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
  };
  return invert_from_mode(u, mode, 0, n, std::exp(log_pmf), down_ratio, up_ratio);
}

std::int64_t sample_hypergeometric(Xoshiro256pp& rng, std::int64_t population, std::int64_t marked_count,
                                   std::int64_t sample_size) {
  if (population < 0 || marked_count < 0 || marked_count > population || sample_size < 0 ||
      sample_size > population) {
    throw ValueError("invalid hypergeometric parameters");
  }
  const std::int64_t lo = std::max<std::int64_t>(0, sample_size + marked_count - population);
  const std::int64_t hi = std::min(sample_size, marked_count);
  if (lo == hi) return lo;

  const double u = rng.next_unit();
  const double N = static_cast<double>(population);
  const double K = static_cast<double>(marked_count);
  const double n = static_cast<double>(sample_size);
  std::int64_t mode = static_cast<std::int64_t>((n + 1.0) * (K + 1.0) / (N + 2.0));
  mode = std::clamp(mode, lo, hi);
  auto log_choose = [](double total, double take) {
    return std::lgamma(total + 1.0) - std::lgamma(take + 1.0) - std::lgamma(total - take + 1.0);
  };
  const double kd = static_cast<double>(mode);
  const double log_pmf = log_choose(K, kd) + log_choose(N - K, n - kd) - log_choose(N, n);
  auto down_ratio = [&](std::int64_t k) {
    const double x = static_cast<double>(k);
    return x * (N - K - n + x) / ((K - x + 1.0) * (n - x + 1.0));
  };
  auto up_ratio = [&](std::int64_t k) {
    const double x = static_cast<double>(k);
    return (K - x) * (n - x) / ((x + 1.0) * (N - K - n + x + 1.0));
  };
  return invert_from_mode(u, mode, lo, hi, std::exp(log_pmf), down_ratio, up_ratio);
}

std::vector<std::int64_t> multinomial_counts(const std::vector<double>& probabilities, std::int64_t draw_count,
                                             Xoshiro256pp& rng) {
  const std::size_t n = probabilities.size();
  std::vector<std::int64_t> counts(n, 0);
  if (draw_count <= 0) return counts;

  // Suffix masses computed right-to-left keep the conditional probabilities
  // stable near the end of the axis.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = suffix[i + 1] + probabilities[i];
  }

  std::int64_t remaining = draw_count;
  for (std::size_t i = 0; i < n && remaining > 0; ++i) {
    const double p = probabilities[i];
    if (p <= 0.0) continue;
    const double conditional = std::min(1.0, p / suffix[i]);
    const std::int64_t c = detail::sample_binomial(rng, remaining, conditional);
    counts[i] = c;
    remaining -= c;
  }
  // Rounding in the suffix masses can strand a few draws past the last
  // positive-probability channel; they belong to it.
  if (remaining > 0) {
    for (std::size_t i = n; i-- > 0;) {
      if (probabilities[i] > 0.0) {
        counts[i] += remaining;
        break;
      }
    }
  }
  return counts;
}

}  // namespace detail

Spectrum sample_spectrum(const DiscreteDistribution& dist, std::int64_t draw_count, std::uint64_t seed) {
  if (draw_count < 0) {
    throw ValueError("draw count must be non-negative");
  }
  Xoshiro256pp rng(seed);
  return Spectrum(dist.grid(), detail::multinomial_counts(dist.probabilities(), draw_count, rng));
}

Spectrum simulate_measurement(const DiscreteDistribution& dist, double duration_seconds, const SamplerConfig& config) {
  if (!(duration_seconds > 0.0) || !std::isfinite(duration_seconds)) {
    throw ValueError("measurement duration must be positive");
  }
  if (config.counts_per_second < 1) {
    throw ValueError("counts per second must be at least 1");
  }
  const double product = duration_seconds * static_cast<double>(config.counts_per_second);
  if (product > kMaxDrawCount) {
    throw ValueError("duration times rate exceeds the representable draw count");
  }
  const std::int64_t draws = round_half_even(product);
  Spectrum result = sample_spectrum(dist, draws, config.seed);
  result.live_time_seconds = duration_seconds;
  return result;
}

std::pair<Spectrum, Spectrum> split_train_test(const Spectrum& s, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw ValueError("train fraction must lie strictly between 0 and 1");
  }
  const std::uint64_t total = total_counts(s);
  if (total < 2) {
    throw EmptySpectrum("cannot split a spectrum with fewer than 2 counts");
  }

  Xoshiro256pp rng(seed);
  std::int64_t train_remaining = round_half_even(train_fraction * static_cast<double>(total));
  std::int64_t population = static_cast<std::int64_t>(total);
  std::vector<std::int64_t> train_counts(s.counts.size(), 0);
  std::vector<std::int64_t> test_counts(s.counts.size(), 0);
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    const std::int64_t c = s.counts[i];
    if (c == 0) continue;
    const std::int64_t taken = detail::sample_hypergeometric(rng, population, c, train_remaining);
    train_counts[i] = taken;
    test_counts[i] = c - taken;
    train_remaining -= taken;
    population -= c;
  }

  Spectrum train(s.grid, std::move(train_counts));
  Spectrum test(s.grid, std::move(test_counts));
  train.label = s.label;
  test.label = s.label;
  return {std::move(train), std::move(test)};
}

}  // namespace specclass
