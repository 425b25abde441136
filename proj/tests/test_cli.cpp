#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "specclass/io.hpp"
#include "specclass/spectral_model.hpp"
#include "testutil.hpp"

using namespace specclass;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* path = std::getenv("SPECCLASS_CLI");
  REQUIRE_MESSAGE(path != nullptr, "SPECCLASS_CLI must point at the built binary");
  return path;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct CliFixture {
  CliFixture() {
    dir = fs::temp_directory_path() / ("specclass_cli_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~CliFixture() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  RunResult run(const std::string& args) const {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string command =
        cli_path() + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
  }

  std::string file(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
  static int counter;
};

int CliFixture::counter = 0;

// Two distinguishable materials on a shared 64-channel grid.
void write_corpus(const CliFixture& fx) {
  const GridPtr grid = testutil::uniform_grid(64);
  const std::vector<double> da = testutil::material_density(64, {{12.0, 1.5, 30.0}, {40.0, 2.0, 20.0}});
  const std::vector<double> db = testutil::material_density(64, {{22.0, 1.5, 30.0}, {52.0, 2.0, 20.0}});
  const DiscreteDistribution dist_a(grid, da);
  const DiscreteDistribution dist_b(grid, db);
  Spectrum ref_a = simulate_measurement(dist_a, 60.0, {50000, 1});
  Spectrum ref_b = simulate_measurement(dist_b, 60.0, {50000, 2});
  write_spectrum(ref_a, fx.file("mat_a.csv"));
  write_spectrum(ref_b, fx.file("mat_b.csv"));

  CorpusManifest manifest;
  manifest.base_dir = fx.dir.string();
  manifest.entries = {{"mat_a.csv", "mat_a", "train"}, {"mat_b.csv", "mat_b", "train"}};
  save_manifest(manifest, fx.file("corpus.json"));
}

}  // namespace

TEST_CASE("help and usage errors") {
  CliFixture fx;
  CHECK(fx.run("--help").exit_code == 0);
  CHECK(fx.run("fit --help").exit_code == 0);
  CHECK(fx.run("--no-such-flag").exit_code == 2);
  CHECK(fx.run("").exit_code == 2);            // a subcommand is required
  CHECK(fx.run("sample --duration 1").exit_code == 2);  // no source given

  // --count 0 fails flag validation
  write_corpus(fx);
  const RunResult r = fx.run("sample --spectrum " + fx.file("mat_a.csv") + " --duration 1 --count 0");
  CHECK(r.exit_code == 2);
}

TEST_CASE("fit, classify and rerun determinism") {
  CliFixture fx;
  write_corpus(fx);

  const std::string fit_args = "fit --manifest " + fx.file("corpus.json") + " --output-dir " + fx.dir.string();
  const RunResult fit1 = fx.run(fit_args + " --output " + fx.file("lib1.json"));
  REQUIRE_MESSAGE(fit1.exit_code == 0, fit1.err);
  CHECK(fit1.out.find("mat_a") != std::string::npos);
  CHECK(fit1.out.find("mat_b") != std::string::npos);

  const RunResult fit2 = fx.run(fit_args + " --output " + fx.file("lib2.json"));
  REQUIRE(fit2.exit_code == 0);
  CHECK(slurp(fx.file("lib1.json")) == slurp(fx.file("lib2.json")));

  // a single-material manifest also fits
  CorpusManifest solo;
  solo.base_dir = fx.dir.string();
  solo.entries = {{"mat_a.csv", "mat_a", "train"}};
  save_manifest(solo, fx.file("solo.json"));
  const RunResult solo_fit = fx.run("fit --manifest " + fx.file("solo.json") + " --output " + fx.file("solo_lib.json"));
  REQUIRE_MESSAGE(solo_fit.exit_code == 0, solo_fit.err);
  CHECK(load_library(fx.file("solo_lib.json")).size() == 1);

  // one second of simulated live time is exactly 50000 counts
  const RunResult one_sec = fx.run("sample --spectrum " + fx.file("mat_a.csv") + " --duration 1 --count 1" +
                                   " --prefix onesec --output-dir " + fx.dir.string());
  REQUIRE_MESSAGE(one_sec.exit_code == 0, one_sec.err);
  CHECK(total_counts(read_spectrum(fx.file("onesec_00000.csv"))) == 50000);

  // sample a short measurement of material b and classify it
  const RunResult sample = fx.run("sample --library " + fx.file("lib1.json") + " --label mat_b --duration 0.5" +
                                  " --count 2 --seed 7 --output-dir " + fx.dir.string());
  REQUIRE_MESSAGE(sample.exit_code == 0, sample.err);
  REQUIRE(fs::exists(fx.file("sample_00000.csv")));
  CHECK(total_counts(read_spectrum(fx.file("sample_00000.csv"))) == 25000);

  const RunResult classify = fx.run("classify --library " + fx.file("lib1.json") + " --output-dir " +
                                    fx.dir.string() + " " + fx.file("sample_00000.csv") + " " +
                                    fx.file("sample_00001.csv"));
  REQUIRE_MESSAGE(classify.exit_code == 0, classify.err);
  CHECK(classify.out.find("mat_b") != std::string::npos);
  CHECK(fs::exists(fx.file("sample_00000.report.json")));

  // rerunning the sampler reproduces the files byte for byte
  const RunResult again = fx.run("sample --library " + fx.file("lib1.json") + " --label mat_b --duration 0.5" +
                                 " --count 2 --seed 7 --output-dir " + (fx.dir / "again").string());
  REQUIRE(again.exit_code == 0);
  CHECK(slurp(fx.file("sample_00001.csv")) == slurp(fx.dir / "again" / "sample_00001.csv"));
}

TEST_CASE("fit rejects duplicate labels with a clear message") {
  CliFixture fx;
  write_corpus(fx);
  CorpusManifest manifest;
  manifest.base_dir = fx.dir.string();
  manifest.entries = {{"mat_a.csv", "copper", "train"}, {"mat_b.csv", "copper", "train"}};
  save_manifest(manifest, fx.file("dup.json"));

  const RunResult r = fx.run("fit --manifest " + fx.file("dup.json") + " --output " + fx.file("lib.json"));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("copper") != std::string::npos);
}

TEST_CASE("classify keeps going after a bad file and exits non-zero") {
  CliFixture fx;
  write_corpus(fx);
  REQUIRE(fx.run("fit --manifest " + fx.file("corpus.json") + " --output " + fx.file("lib.json")).exit_code == 0);

  // a spectrum on a different grid
  const GridPtr other = testutil::uniform_grid(32);
  write_spectrum(Spectrum(other, std::vector<std::int64_t>(32, 5)), fx.file("wrong_grid.csv"));

  const RunResult r = fx.run("classify --library " + fx.file("lib.json") + " --output-dir " + fx.dir.string() +
                             " " + fx.file("wrong_grid.csv") + " " + fx.file("mat_a.csv"));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("wrong_grid.csv") != std::string::npos);
  CHECK(r.out.find("mat_a") != std::string::npos);  // the good file still classified
}

TEST_CASE("evaluate and curve emit their documents") {
  CliFixture fx;
  write_corpus(fx);
  REQUIRE(fx.run("fit --manifest " + fx.file("corpus.json") + " --output " + fx.file("lib.json")).exit_code == 0);

  const RunResult unordered = fx.run("evaluate --library " + fx.file("lib.json") +
                                     " --durations 0.2,0.05 --per-class 10 --output-dir " + fx.dir.string());
  CHECK(unordered.exit_code == 2);

  const RunResult eval = fx.run("evaluate --library " + fx.file("lib.json") +
                                " --durations 0.05,0.2 --per-class 40 --seed 5 --output-dir " + fx.dir.string());
  REQUIRE_MESSAGE(eval.exit_code == 0, eval.err);
  CHECK(fs::exists(fx.file("confusion_0.05s.csv")));
  CHECK(fs::exists(fx.file("confusion_0.2s.json")));
  CHECK(fs::exists(fx.file("accuracy_vs_time.csv")));

  const RunResult curve = fx.run("curve --library " + fx.file("lib.json") +
                                 " --truth-label mat_a --vs-label mat_b --tmin 0.03 --tmax 0.3 --points 5" +
                                 " --seeds 2 --seed 9 --output-dir " + fx.dir.string());
  REQUIRE_MESSAGE(curve.exit_code == 0, curve.err);
  CHECK(fs::exists(fx.file("curve_seed000.csv")));
  CHECK(fs::exists(fx.file("curve_seed001.csv")));
  CHECK(fs::exists(fx.file("curve_mean.csv")));

  const RunResult missing = fx.run("curve --library " + fx.file("lib.json") +
                                   " --truth-label nope --vs-label mat_b --output-dir " + fx.dir.string());
  CHECK(missing.exit_code == 3);

  const RunResult cv = fx.run("cv --spectrum " + fx.file("mat_a.csv") +
                              " --bandwidth-min 1e-4 --bandwidth-max 1e-1 --bandwidth-count 4 --repeats 2" +
                              " --seed 3 --output-dir " + fx.dir.string());
  REQUIRE_MESSAGE(cv.exit_code == 0, cv.err);
  CHECK(fs::exists(fx.file("cv_table.csv")));
  CHECK(fs::exists(fx.file("cv_summary.json")));

  // degenerate single-channel reference: every grid point scores zero, the
  // tie goes to the smallest bandwidth and the first kernel
  write_spectrum(Spectrum(make_grid({661.7}), {4000}), fx.file("single.csv"));
  const RunResult degenerate = fx.run("cv --spectrum " + fx.file("single.csv") +
                                      " --bandwidth-min 1e-4 --bandwidth-max 1e-2 --bandwidth-count 3" +
                                      " --repeats 2 --output-dir " + (fx.dir / "single_cv").string());
  REQUIRE_MESSAGE(degenerate.exit_code == 0, degenerate.err);
  const std::string summary = slurp(fx.dir / "single_cv" / "cv_summary.json");
  CHECK(summary.find("\"best_kernel\": \"cauchy\"") != std::string::npos);
  CHECK(summary.find("0.0001") != std::string::npos);
}
