#include "specclass/classifier.hpp"

#include <cmath>
#include <limits>

#include "specclass/errors.hpp"
#include "specclass/numerics.hpp"

namespace specclass {

namespace {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!same_grid(a, b)) {
    throw GridMismatch(std::string("energy grids differ between ") + what);
  }
}

// Score of one model against pre-gathered (channel, count) pairs.
double sparse_score(const std::vector<std::pair<std::size_t, double>>& nonzero, const DiscreteDistribution& model,
                    std::vector<double>& terms) {
  const std::vector<double>& logs = model.log_probabilities();
  terms.clear();
  for (const auto& [channel, count] : nonzero) {
    terms.push_back(count * logs[channel]);
  }
  return pairwise_sum(terms);
}

// Row of the log-density matrix times the full count vector.
double dense_score(const std::vector<double>& count_vector, const DiscreteDistribution& model,
                   std::vector<double>& terms) {
  const std::vector<double>& logs = model.log_probabilities();
  terms.resize(count_vector.size());
  for (std::size_t i = 0; i < count_vector.size(); ++i) {
    terms[i] = count_vector[i] * logs[i];
  }
  return pairwise_sum(terms);
}

ClassificationReport report_from_scores(std::vector<double> scores, const ClassLibrary& library) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < scores.size(); ++j) {
    if (scores[j] > scores[best]) best = j;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (j != best && scores[j] > second) second = scores[j];
  }
  ClassificationReport report;
  report.scores = std::move(scores);
  report.predicted_index = best;
  report.predicted_label = library.entries()[best].name;
  report.margin = report.scores.size() > 1 ? report.scores[best] - second : 0.0;
  return report;
}

}  // namespace

double log_likelihood(const Spectrum& short_spectrum, const DiscreteDistribution& model) {
  require_same_grid(short_spectrum.grid, model.grid(), "spectrum and model");
  const std::vector<double>& logs = model.log_probabilities();
  std::vector<double> terms;
  for (std::size_t i = 0; i < short_spectrum.counts.size(); ++i) {
    if (short_spectrum.counts[i] > 0) {
      terms.push_back(static_cast<double>(short_spectrum.counts[i]) * logs[i]);
    }
  }
  return pairwise_sum(terms);
}

ClassificationReport classify(const Spectrum& short_spectrum, const ClassLibrary& library) {
  require_same_grid(short_spectrum.grid, library.grid(), "spectrum and library");
  const std::size_t n = short_spectrum.counts.size();

  std::vector<std::pair<std::size_t, double>> nonzero;
  for (std::size_t i = 0; i < n; ++i) {
    if (short_spectrum.counts[i] > 0) {
      nonzero.emplace_back(i, static_cast<double>(short_spectrum.counts[i]));
    }
  }

  std::vector<double> scores(library.size());
  std::vector<double> terms;
  if (nonzero.size() * 4 <= n) {
    for (std::size_t j = 0; j < library.size(); ++j) {
      scores[j] = sparse_score(nonzero, library.entries()[j].model, terms);
    }
  } else {
    std::vector<double> count_vector(n);
    for (std::size_t i = 0; i < n; ++i) {
      count_vector[i] = static_cast<double>(short_spectrum.counts[i]);
    }
    for (std::size_t j = 0; j < library.size(); ++j) {
      scores[j] = dense_score(count_vector, library.entries()[j].model, terms);
    }
  }
  return report_from_scores(std::move(scores), library);
}

std::vector<ClassificationReport> classify_batch(const std::vector<Spectrum>& shorts, const ClassLibrary& library) {
  std::vector<ClassificationReport> reports;
  reports.reserve(shorts.size());
  for (const Spectrum& s : shorts) {
    reports.push_back(classify(s, library));
  }
  return reports;
}

ReliabilityTrace reliability_trace(const DiscreteDistribution& source, const ClassLibrary& library, std::size_t k,
                                   std::size_t l, const std::vector<double>& time_grid, const SamplerConfig& config,
                                   std::uint64_t seed) {
  if (k >= library.size() || l >= library.size()) {
    throw IndexOutOfRange("reliability trace class index out of range");
  }
  if (k == l) {
    throw IndexOutOfRange("reliability trace needs two distinct classes");
  }
  require_same_grid(source.grid(), library.grid(), "source distribution and library");
  if (config.counts_per_second < 1) {
    throw ValueError("counts per second must be at least 1");
  }
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (!(time_grid[i] >= 0.0) || !std::isfinite(time_grid[i])) {
      throw ValueError("trace times must be finite and non-negative");
    }
    if (i > 0 && !(time_grid[i - 1] < time_grid[i])) {
      throw ValueError("trace times must be strictly increasing");
    }
    if (time_grid[i] * static_cast<double>(config.counts_per_second) > kMaxDrawCount) {
      throw ValueError("trace time times rate exceeds the representable draw count");
    }
  }

  const DiscreteDistribution& model_k = library.entries()[k].model;
  const DiscreteDistribution& model_l = library.entries()[l].model;

  Xoshiro256pp rng(seed);
  std::vector<std::int64_t> cumulative(source.size(), 0);
  ReliabilityTrace trace;
  trace.class_pair = {k, l};
  trace.times = time_grid;
  trace.differences.reserve(time_grid.size());

  std::int64_t drawn = 0;
  for (double t : time_grid) {
    const std::int64_t target = round_half_even(t * static_cast<double>(config.counts_per_second));
    if (target > drawn) {
      // Extend the photon stream; multinomial increments drawn from one
      // stream compose into a multinomial of the total, which is what makes
      // the prefix property hold.
      const std::vector<std::int64_t> increment =
          detail::multinomial_counts(source.probabilities(), target - drawn, rng);
      for (std::size_t i = 0; i < cumulative.size(); ++i) {
        cumulative[i] += increment[i];
      }
      drawn = target;
    }
    const Spectrum at_time(source.grid(), cumulative);
    trace.differences.push_back(log_likelihood(at_time, model_k) - log_likelihood(at_time, model_l));
  }
  return trace;
}

}  // namespace specclass
