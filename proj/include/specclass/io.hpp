#pragma once

#include <string>
#include <vector>

#include "specclass/bandwidth.hpp"
#include "specclass/classifier.hpp"
#include "specclass/evaluation.hpp"
#include "specclass/spectral_model.hpp"

namespace specclass {

// Spectrum file: strict CSV dialect (comma separator, '.' decimal point, LF
// line endings, UTF-8) with mandatory header `channel,energy_kev,counts`,
// channels 0-based, contiguous and ascending. Parse errors cite the 1-based
// file line (the header is line 1).
Spectrum read_spectrum(const std::string& path);

// Writes energies with 17 significant digits so read-back reproduces every
// double bit-exactly.
void write_spectrum(const Spectrum& s, const std::string& path);

// Class library document: versioned JSON (format_version 1) holding the
// grid, kernel name, bandwidth and per-material probability vectors at full
// double precision. save -> load round-trips bit-exactly and preserves entry
// order.
ClassLibrary load_library(const std::string& path);
void save_library(const ClassLibrary& library, const std::string& path);

// Labeled collection of spectrum files. Relative entry paths resolve against
// base_dir; a relative base_dir resolves against the manifest's directory.
struct CorpusEntry {
  std::string path;
  std::string label;
  std::string role;  // "train" or "test"
};

struct CorpusManifest {
  std::string base_dir;
  std::vector<CorpusEntry> entries;
};

struct LabeledSpectrum {
  std::string label;
  std::string role;
  Spectrum spectrum;
};

CorpusManifest load_manifest(const std::string& path);
void save_manifest(const CorpusManifest& manifest, const std::string& path);

// Parses every referenced file; nothing is returned unless all entries load.
std::vector<LabeledSpectrum> load_corpus(const CorpusManifest& manifest);

// Manifest written next to sampled spectra: corpus-manifest compatible, with
// the generating duration and per-file stream seed recorded per entry.
struct SampleRecord {
  std::string path;
  std::string label;
  double duration_seconds = 0.0;
  std::uint64_t seed = 0;
};
void save_sample_manifest(const std::vector<SampleRecord>& records, const std::string& path);

// Result writers. All machine-readable floats carry 17 significant digits.
void write_report_json(const ClassificationReport& report, const std::string& path);
void write_trace_csv(const ReliabilityTrace& trace, const std::string& path);
void write_cv_table_csv(const CvResult& result, const std::string& path);
void write_cv_summary_json(const CvResult& result, const std::string& path);
void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path);
void write_confusion_json(const ConfusionMatrix& cm, const std::string& path);
void write_accuracy_csv(const AccuracyTable& table, const std::string& path);

// 17-significant-digit decimal form, enough to reconstruct the exact double.
std::string format_full(double value);

}  // namespace specclass
