#include <cmath>
#include <vector>

#include <doctest.h>

#include "specclass/errors.hpp"
#include "specclass/evaluation.hpp"
#include "testutil.hpp"

using namespace specclass;

namespace {

// Three classes on disjoint channel ranges: misclassification is impossible.
ClassLibrary disjoint_library(const GridPtr& grid) {
  const std::size_t n = grid->channel_count();
  std::vector<ClassLibrary::Entry> entries;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> p(n, 0.0);
    const std::size_t lo = k * n / 3;
    const std::size_t hi = (k + 1) * n / 3;
    for (std::size_t i = lo; i < hi; ++i) {
      p[i] = 1.0 / static_cast<double>(hi - lo);
    }
    entries.push_back({"mat" + std::to_string(k), DiscreteDistribution(grid, std::move(p))});
  }
  return ClassLibrary(grid, std::move(entries), "cauchy", 0.00065);
}

TruthModels truths_of(const ClassLibrary& lib) {
  TruthModels truths;
  for (const auto& entry : lib.entries()) {
    truths.emplace_back(entry.name, entry.model);
  }
  return truths;
}

}  // namespace

TEST_CASE("disjoint supports classify perfectly") {
  const GridPtr grid = testutil::uniform_grid(30);
  const ClassLibrary lib = disjoint_library(grid);
  const ConfusionMatrix cm = evaluate(lib, truths_of(lib), 50, 0.01, {50000, 7});

  CHECK(cm.overall_accuracy == 1.0);
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    CHECK(cm.per_class_accuracy[i] == 1.0);
    for (std::size_t j = 0; j < cm.labels.size(); ++j) {
      CHECK(cm.matrix[i][j] == (i == j ? 50 : 0));
    }
  }
}

TEST_CASE("matrix totals and row sums") {
  const GridPtr grid = testutil::jittered_grid(40, 1);
  std::vector<ClassLibrary::Entry> entries;
  for (std::uint64_t k = 0; k < 4; ++k) {
    entries.push_back({"m" + std::to_string(k), testutil::random_distribution(grid, 60 + k)});
  }
  const ClassLibrary lib(grid, std::move(entries), "cauchy", 0.00065);

  const std::int64_t per_class = 80;
  const ConfusionMatrix cm = evaluate(lib, truths_of(lib), per_class, 0.002, {50000, 3});

  std::int64_t total = 0;
  for (std::size_t i = 0; i < cm.matrix.size(); ++i) {
    std::int64_t row = 0;
    for (std::int64_t cell : cm.matrix[i]) {
      CHECK(cell >= 0);
      row += cell;
    }
    CHECK(row == per_class);
    total += row;
  }
  CHECK(total == per_class * 4);
  CHECK(cm.overall_accuracy >= 0.0);
  CHECK(cm.overall_accuracy <= 1.0);
}

TEST_CASE("evaluation is deterministic and permutation-equivariant") {
  const GridPtr grid = testutil::jittered_grid(40, 2);
  std::vector<ClassLibrary::Entry> entries;
  for (std::uint64_t k = 0; k < 3; ++k) {
    entries.push_back({"m" + std::to_string(k), testutil::random_distribution(grid, 80 + k)});
  }
  const ClassLibrary lib(grid, entries, "cauchy", 0.00065);
  const SamplerConfig config{50000, 17};

  const ConfusionMatrix a = evaluate(lib, truths_of(lib), 60, 0.003, config);
  const ConfusionMatrix b = evaluate(lib, truths_of(lib), 60, 0.003, config);
  CHECK(a.matrix == b.matrix);

  // permute both the truth list and the library entry order
  std::vector<ClassLibrary::Entry> permuted = {entries[2], entries[0], entries[1]};
  const ClassLibrary plib(grid, std::move(permuted), "cauchy", 0.00065);
  const ConfusionMatrix p = evaluate(plib, truths_of(plib), 60, 0.003, config);
  const std::size_t perm[3] = {2, 0, 1};  // p row i corresponds to a row perm[i]
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(p.matrix[i][j] == a.matrix[perm[i]][perm[j]]);
    }
  }
}

TEST_CASE("single-draw accuracy equals the enumerated bayes rate") {
  const GridPtr grid = testutil::jittered_grid(32, 5);
  std::vector<ClassLibrary::Entry> entries;
  for (std::uint64_t k = 0; k < 3; ++k) {
    entries.push_back({"m" + std::to_string(k), testutil::random_distribution(grid, 40 + k)});
  }
  const ClassLibrary lib(grid, std::move(entries), "cauchy", 0.00065);
  const TruthModels truths = truths_of(lib);

  // exact rate: a 1-photon spectrum on channel i is assigned to
  // argmax_c log f_c(i), ties to the lowest index
  double exact = 0.0;
  for (std::size_t t = 0; t < truths.size(); ++t) {
    for (std::size_t i = 0; i < grid->channel_count(); ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < lib.size(); ++c) {
        if (lib.entries()[c].model.log_probabilities()[i] > lib.entries()[best].model.log_probabilities()[i]) {
          best = c;
        }
      }
      if (best == t) exact += truths[t].second.probabilities()[i];
    }
  }
  exact /= static_cast<double>(truths.size());

  // duration * rate = 1 draw per spectrum
  const ConfusionMatrix cm = evaluate(lib, truths, 20000, 1.0, {1, 99});
  CHECK(std::abs(cm.overall_accuracy - exact) < 0.015);
}

TEST_CASE("evaluate validation") {
  const GridPtr grid = testutil::uniform_grid(12);
  const ClassLibrary lib = disjoint_library(grid);
  TruthModels truths = truths_of(lib);

  CHECK_THROWS_AS(evaluate(lib, {}, 10, 0.5, {}), ValueError);
  CHECK_THROWS_AS(evaluate(lib, truths, 0, 0.5, {}), ValueError);
  CHECK_THROWS_AS(evaluate(lib, truths, 10, 0.0, {}), ValueError);

  TruthModels unknown = truths;
  unknown[0].first = "not_in_library";
  CHECK_THROWS_AS(evaluate(lib, unknown, 10, 0.5, {}), UnknownLabel);

  TruthModels duplicated = truths;
  duplicated[1].first = duplicated[0].first;
  CHECK_THROWS_AS(evaluate(lib, duplicated, 10, 0.5, {}), ValueError);
}

TEST_CASE("accuracy over time") {
  const GridPtr grid = testutil::uniform_grid(30);
  const ClassLibrary lib = disjoint_library(grid);
  const TruthModels truths = truths_of(lib);

  SUBCASE("durations must increase") {
    CHECK_THROWS_AS(accuracy_vs_time(lib, truths, {0.5, 0.25}, 10, {}), ValueError);
    CHECK_THROWS_AS(accuracy_vs_time(lib, truths, {}, 10, {}), ValueError);
  }

  SUBCASE("disjoint classes are perfect at every duration") {
    const AccuracyTable table = accuracy_vs_time(lib, truths, {0.001, 0.01, 0.1}, 30, {50000, 5});
    REQUIRE(table.accuracies.size() == 3);
    for (double acc : table.accuracies) CHECK(acc == 1.0);
  }

  SUBCASE("single class is trivially perfect") {
    const ClassLibrary single(grid, {lib.entries()[0]}, "cauchy", 0.00065);
    const AccuracyTable table = accuracy_vs_time(single, {{"mat0", single.entries()[0].model}}, {0.01}, 10, {50000, 5});
    CHECK(table.accuracies[0] == 1.0);
  }
}
