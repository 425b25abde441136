#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specclass/bandwidth.hpp"
#include "specclass/classifier.hpp"
#include "specclass/errors.hpp"
#include "specclass/evaluation.hpp"
#include "specclass/io.hpp"
#include "specclass/kde.hpp"
#include "specclass/numerics.hpp"
#include "specclass/sampler.hpp"

namespace fs = std::filesystem;
using namespace specclass;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::int64_t counts_per_second = 50000;
  double bandwidth = 0.00065;
  std::string kernel = "cauchy";
  std::string output_dir = ".";
};

std::string out_path(const GlobalOptions& options, const std::string& name) {
  fs::create_directories(options.output_dir);
  return (fs::path(options.output_dir) / name).string();
}

std::vector<Kernel> parse_kernels(const std::vector<std::string>& names) {
  std::vector<Kernel> kernels;
  for (const std::string& name : names) {
    kernels.push_back(Kernel::from_name(name));
  }
  return kernels;
}

TruthModels truths_from_manifest(const std::string& manifest_path, const ClassLibrary& library) {
  const CorpusManifest manifest = load_manifest(manifest_path);
  std::vector<LabeledSpectrum> corpus = load_corpus(manifest);
  bool any_test = false;
  for (const LabeledSpectrum& item : corpus) {
    any_test = any_test || item.role == "test";
  }
  TruthModels truths;
  for (LabeledSpectrum& item : corpus) {
    if (any_test && item.role != "test") continue;
    library.index_of(item.label);
    truths.emplace_back(item.label, normalize_spectrum(item.spectrum));
  }
  if (truths.empty()) {
    throw ValueError(manifest_path + ": no usable truth entries");
  }
  return truths;
}

int run_fit(const GlobalOptions& options, const std::string& manifest_path, std::optional<double> cutoff,
            const std::string& output) {
  const CorpusManifest manifest = load_manifest(manifest_path);
  const std::vector<LabeledSpectrum> corpus = load_corpus(manifest);

  std::set<std::string> labels;
  std::vector<const LabeledSpectrum*> train;
  for (const LabeledSpectrum& item : corpus) {
    if (item.role != "train") continue;
    if (!labels.insert(item.label).second) {
      throw ValueError(manifest_path + ": duplicate label '" + item.label + "' among train entries");
    }
    train.push_back(&item);
  }
  if (train.empty()) {
    throw ValueError(manifest_path + ": no train entries");
  }

  const KdeConfig kde_config(Kernel::from_name(options.kernel), options.bandwidth, cutoff);
  std::vector<ClassLibrary::Entry> entries;
  for (const LabeledSpectrum* item : train) {
    entries.push_back({item->label, estimate_log_density(item->spectrum, kde_config)});
  }
  const GridPtr grid = entries.front().model.grid();
  const ClassLibrary library(grid, std::move(entries), options.kernel, options.bandwidth);

  const std::string path = output.empty() ? out_path(options, "library.json") : output;
  save_library(library, path);

  std::printf("fitted %zu materials on %zu channels (kernel=%s, bandwidth=%.6g) -> %s\n", library.size(),
              library.grid()->channel_count(), options.kernel.c_str(), options.bandwidth, path.c_str());
  for (const auto& entry : library.entries()) {
    std::printf("  %s\n", entry.name.c_str());
  }
  return 0;
}

int run_cv(const GlobalOptions& options, const std::string& spectrum_path, double bw_min, double bw_max,
           int bw_count, const std::vector<std::string>& kernel_names, int repeats, double train_fraction) {
  const Spectrum reference = read_spectrum(spectrum_path);

  CvConfig config;
  config.kernels = parse_kernels(kernel_names);
  config.repeats = repeats;
  config.train_fraction = train_fraction;
  config.seed = options.seed;
  config.counts_per_second = options.counts_per_second;
  if (!(bw_min > 0.0) || !(bw_max > bw_min) || bw_count < 1) {
    throw UsageError("invalid bandwidth grid: need 0 < min < max and count >= 1");
  }
  config.bandwidth_grid.resize(bw_count);
  for (int i = 0; i < bw_count; ++i) {
    const double f = bw_count == 1 ? 0.0 : static_cast<double>(i) / (bw_count - 1);
    config.bandwidth_grid[i] = std::pow(10.0, std::log10(bw_min) + (std::log10(bw_max) - std::log10(bw_min)) * f);
  }

  const CvResult result = cross_validate(reference, config);
  write_cv_table_csv(result, out_path(options, "cv_table.csv"));
  write_cv_summary_json(result, out_path(options, "cv_summary.json"));
  std::printf("best kernel=%s bandwidth=%.6g (mean held-out log-likelihood per photon)\n",
              result.best_kernel.c_str(), result.best_bandwidth);
  return 0;
}

int run_sample(const GlobalOptions& options, const std::string& library_path, const std::string& label,
               const std::string& spectrum_path, double duration, int count, const std::string& prefix) {
  if (library_path.empty() == spectrum_path.empty()) {
    throw UsageError("provide exactly one source: --library with --label, or --spectrum");
  }

  std::optional<DiscreteDistribution> source;
  std::string source_label = label;
  if (!library_path.empty()) {
    if (label.empty()) {
      throw UsageError("--label is required when sampling from a library");
    }
    const ClassLibrary library = load_library(library_path);
    source.emplace(library.entries()[library.index_of(label)].model);
  } else {
    const Spectrum reference = read_spectrum(spectrum_path);
    source.emplace(normalize_spectrum(reference));
    if (source_label.empty()) {
      source_label = reference.label.value_or(fs::path(spectrum_path).stem().string());
    }
  }

  std::vector<SampleRecord> records;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t stream_seed = derive_stream_seed(options.seed, static_cast<std::uint64_t>(i));
    SamplerConfig config{options.counts_per_second, stream_seed};
    Spectrum sample = simulate_measurement(*source, duration, config);
    sample.label = source_label;

    char name[64];
    std::snprintf(name, sizeof(name), "%s_%05d.csv", prefix.c_str(), i);
    write_spectrum(sample, out_path(options, name));
    records.push_back({name, source_label, duration, stream_seed});
  }
  save_sample_manifest(records, out_path(options, prefix + "_manifest.json"));
  std::printf("wrote %d spectra of %.6g s (%lld counts each) to %s\n", count, duration,
              static_cast<long long>(round_half_even(duration * static_cast<double>(options.counts_per_second))),
              options.output_dir.c_str());
  return 0;
}

int run_classify(const GlobalOptions& options, const std::string& library_path,
                 const std::vector<std::string>& files) {
  const ClassLibrary library = load_library(library_path);
  int exit_code = 0;
  for (const std::string& file : files) {
    try {
      const Spectrum spectrum = read_spectrum(file);
      const ClassificationReport report = classify(spectrum, library);
      const std::string report_path = out_path(options, fs::path(file).stem().string() + ".report.json");
      write_report_json(report, report_path);
      std::printf("%s: %s (margin %.6g)\n", file.c_str(), report.predicted_label.c_str(), report.margin);
    } catch (const Error& e) {
      std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
      if (exit_code == 0) exit_code = e.exit_code();
    }
  }
  return exit_code;
}

int run_evaluate(const GlobalOptions& options, const std::string& library_path, const std::string& truth_manifest,
                 std::vector<double> durations, std::int64_t per_class) {
  for (std::size_t d = 0; d < durations.size(); ++d) {
    if (!(durations[d] > 0.0) || (d > 0 && !(durations[d - 1] < durations[d]))) {
      throw UsageError("--durations must be positive and strictly increasing");
    }
  }
  const ClassLibrary library = load_library(library_path);

  TruthModels truths;
  if (!truth_manifest.empty()) {
    truths = truths_from_manifest(truth_manifest, library);
  } else {
    for (const auto& entry : library.entries()) {
      truths.emplace_back(entry.name, entry.model);
    }
  }

  const SamplerConfig config{options.counts_per_second, options.seed};
  AccuracyTable table;
  for (std::size_t d = 0; d < durations.size(); ++d) {
    const ConfusionMatrix cm = evaluate(library, truths, per_class, durations[d], config, d);
    char suffix[48];
    std::snprintf(suffix, sizeof(suffix), "confusion_%gs", durations[d]);
    write_confusion_csv(cm, out_path(options, std::string(suffix) + ".csv"));
    write_confusion_json(cm, out_path(options, std::string(suffix) + ".json"));
    std::printf("duration %.6g s: overall accuracy %.6g\n", durations[d], cm.overall_accuracy);
    table.durations.push_back(durations[d]);
    table.accuracies.push_back(cm.overall_accuracy);
  }
  if (durations.size() > 1) {
    write_accuracy_csv(table, out_path(options, "accuracy_vs_time.csv"));
  }
  return 0;
}

int run_curve(const GlobalOptions& options, const std::string& library_path, const std::string& truth_label,
              const std::string& vs_label, double tmin, double tmax, int points, int n_seeds) {
  const ClassLibrary library = load_library(library_path);
  const std::size_t k = library.index_of(truth_label);
  const std::size_t l = library.index_of(vs_label);

  if (!(tmin >= 0.0) || !(tmax > tmin) || points < 2) {
    throw UsageError("need 0 <= tmin < tmax and at least 2 points");
  }
  std::vector<double> times(points);
  for (int i = 0; i < points; ++i) {
    times[i] = tmin + (tmax - tmin) * i / (points - 1);
  }

  const SamplerConfig config{options.counts_per_second, 0};
  std::vector<double> mean(times.size(), 0.0);
  for (int s = 0; s < n_seeds; ++s) {
    const ReliabilityTrace trace = reliability_trace(library.entries()[k].model, library, k, l, times, config,
                                                     derive_stream_seed(options.seed, static_cast<std::uint64_t>(s)));
    char name[48];
    std::snprintf(name, sizeof(name), "curve_seed%03d.csv", s);
    write_trace_csv(trace, out_path(options, name));
    for (std::size_t i = 0; i < times.size(); ++i) {
      mean[i] += trace.differences[i];
    }
  }
  ReliabilityTrace mean_trace;
  mean_trace.class_pair = {k, l};
  mean_trace.times = times;
  for (double m : mean) {
    mean_trace.differences.push_back(m / n_seeds);
  }
  write_trace_csv(mean_trace, out_path(options, "curve_mean.csv"));
  std::printf("wrote %d traces for %s vs %s over [%.6g, %.6g] s\n", n_seeds, truth_label.c_str(), vs_label.c_str(),
              tmin, tmax);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gamma-spectrum material classification by kernel density estimation and maximum log-likelihood"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--seed", options.seed, "Master seed for every stochastic step")->capture_default_str();
  app.add_option("--counts-per-second", options.counts_per_second, "Photon counts per second of live time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--bandwidth", options.bandwidth, "KDE bandwidth on the normalised energy axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--kernel", options.kernel, "KDE kernel: cauchy or gaussian")->capture_default_str();
  app.add_option("--output-dir", options.output_dir, "Directory for generated files")->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit density models from a training corpus and write a library");
  fit->fallthrough();
  std::string fit_manifest;
  std::optional<double> fit_cutoff;
  std::string fit_output;
  fit->add_option("--manifest", fit_manifest, "Corpus manifest JSON")->required()->check(CLI::ExistingFile);
  fit->add_option("--cutoff-radius", fit_cutoff, "Gaussian truncation radius in bandwidth multiples (>= 8)");
  fit->add_option("--output", fit_output, "Library file (default <output-dir>/library.json)");

  // cv
  auto* cv = app.add_subcommand("cv", "Cross-validate kernel and bandwidth on a reference spectrum");
  cv->fallthrough();
  std::string cv_spectrum;
  double cv_bw_min = 1e-5, cv_bw_max = 1e-1, cv_train_fraction = 0.5;
  int cv_bw_count = 25, cv_repeats = 5;
  std::vector<std::string> cv_kernels = {"cauchy", "gaussian"};
  cv->add_option("--spectrum", cv_spectrum, "Reference spectrum CSV")->required()->check(CLI::ExistingFile);
  cv->add_option("--bandwidth-min", cv_bw_min, "Smallest bandwidth")->capture_default_str();
  cv->add_option("--bandwidth-max", cv_bw_max, "Largest bandwidth")->capture_default_str();
  cv->add_option("--bandwidth-count", cv_bw_count, "Number of log-spaced bandwidths")->capture_default_str();
  cv->add_option("--kernels", cv_kernels, "Kernels to compare")->delimiter(',')->capture_default_str();
  cv->add_option("--repeats", cv_repeats, "Random splits per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cv->add_option("--train-fraction", cv_train_fraction, "Fraction of photons used for fitting")
      ->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "Synthesize short-time spectra by multinomial resampling");
  sample->fallthrough();
  std::string sample_library, sample_label, sample_spectrum, sample_prefix = "sample";
  double sample_duration = 1.0;
  int sample_count = 1;
  sample->add_option("--library", sample_library, "Library to sample from (with --label)")->check(CLI::ExistingFile);
  sample->add_option("--label", sample_label, "Material entry to sample");
  sample->add_option("--spectrum", sample_spectrum, "Fully measured spectrum to resample")->check(CLI::ExistingFile);
  sample->add_option("--duration", sample_duration, "Simulated measurement time in seconds")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("--count", sample_count, "Number of spectra")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--prefix", sample_prefix, "Output file prefix")->capture_default_str();

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Score spectra against a library");
  classify_cmd->fallthrough();
  std::string classify_library;
  std::vector<std::string> classify_files;
  classify_cmd->add_option("--library", classify_library, "Library JSON")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("files", classify_files, "Spectrum CSV files")->required();

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Confusion-matrix evaluation on resampled test spectra");
  evaluate_cmd->fallthrough();
  std::string evaluate_library, evaluate_truth;
  std::vector<double> evaluate_durations = {0.5};
  std::int64_t evaluate_per_class = 1000;
  evaluate_cmd->add_option("--library", evaluate_library, "Library JSON")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--truth-manifest", evaluate_truth,
                           "Manifest of measured spectra to resample as truth (default: library models)")
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--durations", evaluate_durations, "Measurement times in seconds, increasing")
      ->delimiter(',')
      ->capture_default_str();
  evaluate_cmd->add_option("--per-class", evaluate_per_class, "Test spectra per class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // curve
  auto* curve = app.add_subcommand("curve", "Reliability curve D(t) between two library classes");
  curve->fallthrough();
  std::string curve_library, curve_truth, curve_vs;
  double curve_tmin = 0.03, curve_tmax = 3.0;
  int curve_points = 100, curve_seeds = 10;
  curve->add_option("--library", curve_library, "Library JSON")->required()->check(CLI::ExistingFile);
  curve->add_option("--truth-label", curve_truth, "Class the photon stream is sampled from")->required();
  curve->add_option("--vs-label", curve_vs, "Class compared against")->required();
  curve->add_option("--tmin", curve_tmin, "First time point in seconds")->capture_default_str();
  curve->add_option("--tmax", curve_tmax, "Last time point in seconds")->capture_default_str();
  curve->add_option("--points", curve_points, "Time grid size")->capture_default_str();
  curve->add_option("--seeds", curve_seeds, "Number of independent photon streams")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*fit) return run_fit(options, fit_manifest, fit_cutoff, fit_output);
    if (*cv) return run_cv(options, cv_spectrum, cv_bw_min, cv_bw_max, cv_bw_count, cv_kernels, cv_repeats,
                           cv_train_fraction);
    if (*sample)
      return run_sample(options, sample_library, sample_label, sample_spectrum, sample_duration, sample_count,
                        sample_prefix);
    if (*classify_cmd) return run_classify(options, classify_library, classify_files);
    if (*evaluate_cmd) return run_evaluate(options, evaluate_library, evaluate_truth, evaluate_durations,
                                           evaluate_per_class);
    if (*curve) return run_curve(options, curve_library, curve_truth, curve_vs, curve_tmin, curve_tmax, curve_points,
                                 curve_seeds);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
