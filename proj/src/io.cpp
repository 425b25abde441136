#include "specclass/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "specclass/errors.hpp"

namespace specclass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string at_line(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

// Strict field parsers: the whole token must be consumed.
bool parse_int64(const std::string& token, std::int64_t& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(token.c_str(), &end, 10);
  if (errno != 0 || end != token.c_str() + token.size()) return false;
  out = static_cast<std::int64_t>(value);
  return true;
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (errno != 0 || end != token.c_str() + token.size()) return false;
  out = value;
  return true;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("failed while writing '" + path + "'");
  }
}

std::string json_escape(const std::string& text) {
  std::string escaped;
  escaped.reserve(text.size() + 2);
  for (unsigned char c : text) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\b': escaped += "\\b"; break;
      case '\f': escaped += "\\f"; break;
      case '\n': escaped += "\\n"; break;
      case '\r': escaped += "\\r"; break;
      case '\t': escaped += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          escaped += buf;
        } else {
          escaped += static_cast<char>(c);
        }
    }
  }
  return escaped;
}

void write_double_array(std::ofstream& out, const std::vector<double>& values, const char* indent) {
  out << "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i % 8 == 0) out << "\n" << indent;
    out << format_full(values[i]);
    if (i + 1 < values.size()) out << (i % 8 == 7 ? "," : ", ");
  }
  out << "\n" << indent << "]";
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Spectrum read_spectrum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }

  std::string line;
  std::size_t line_number = 1;
  if (!std::getline(in, line)) {
    throw ParseError(at_line(path, 1) + ": empty file, expected header 'channel,energy_kev,counts'");
  }
  if (line != "channel,energy_kev,counts") {
    throw ParseError(at_line(path, 1) + ": bad header '" + line + "', expected 'channel,energy_kev,counts'");
  }

  std::vector<double> energies;
  std::vector<std::int64_t> counts;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() && in.eof()) break;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(at_line(path, line_number) + ": expected 3 comma-separated fields, got " +
                       std::to_string(fields.size()));
    }
    std::int64_t channel = 0;
    if (!parse_int64(fields[0], channel)) {
      throw ParseError(at_line(path, line_number) + ": malformed channel index '" + fields[0] + "'");
    }
    if (channel != static_cast<std::int64_t>(energies.size())) {
      throw ParseError(at_line(path, line_number) + ": channel " + std::to_string(channel) +
                       " out of order, expected " + std::to_string(energies.size()));
    }
    double energy = 0.0;
    if (!parse_double(fields[1], energy)) {
      throw ParseError(at_line(path, line_number) + ": malformed energy '" + fields[1] + "'");
    }
    if (!energies.empty() && !(energies.back() < energy)) {
      throw GridError(at_line(path, line_number) + ": energy " + fields[1] +
                      " does not increase over the previous channel");
    }
    std::int64_t count = 0;
    if (!parse_int64(fields[2], count)) {
      throw ValueError(at_line(path, line_number) + ": counts must be non-negative integers, got '" + fields[2] + "'");
    }
    if (count < 0) {
      throw ValueError(at_line(path, line_number) + ": negative count " + fields[2]);
    }
    energies.push_back(energy);
    counts.push_back(count);
  }
  if (energies.empty()) {
    throw ParseError(at_line(path, line_number) + ": no channel rows");
  }

  try {
    return Spectrum(make_grid(std::move(energies)), std::move(counts));
  } catch (const Error& e) {
    throw GridError(path + ": " + e.what());
  }
}

void write_spectrum(const Spectrum& s, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "channel,energy_kev,counts\n";
  const std::vector<double>& energies = s.grid->energies_kev();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    out << i << "," << format_full(energies[i]) << "," << s.counts[i] << "\n";
  }
  finish_write(out, path);
}

ClassLibrary load_library(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw SchemaError(path + ": missing 'format_version'");
  }
  if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != 1) {
    throw VersionError(path + ": unsupported format_version, expected 1");
  }
  for (const char* key : {"kernel", "bandwidth", "energies_kev", "materials"}) {
    if (!doc.contains(key)) {
      throw SchemaError(path + ": missing '" + std::string(key) + "'");
    }
  }
  if (!doc["materials"].is_array() || doc["materials"].empty()) {
    throw EmptyLibrary(path + ": 'materials' must be a non-empty array");
  }
  if (!doc["energies_kev"].is_array()) {
    throw SchemaError(path + ": 'energies_kev' must be an array");
  }

  GridPtr grid;
  try {
    grid = make_grid(doc["energies_kev"].get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw SchemaError(path + ": bad energies: " + e.what());
  }

  std::vector<ClassLibrary::Entry> entries;
  for (const auto& material : doc["materials"]) {
    if (!material.is_object() || !material.contains("name") || !material.contains("probabilities")) {
      throw SchemaError(path + ": each material needs 'name' and 'probabilities'");
    }
    std::vector<double> probabilities;
    try {
      probabilities = material["probabilities"].get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw SchemaError(path + ": bad probabilities: " + e.what());
    }
    if (probabilities.size() != grid->channel_count()) {
      throw SchemaError(path + ": material '" + material["name"].get<std::string>() + "' has " +
                        std::to_string(probabilities.size()) + " probabilities for " +
                        std::to_string(grid->channel_count()) + " channels");
    }
    entries.push_back({material["name"].get<std::string>(), DiscreteDistribution(grid, std::move(probabilities))});
  }

  try {
    return ClassLibrary(grid, std::move(entries), doc["kernel"].get<std::string>(), doc["bandwidth"].get<double>());
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void save_library(const ClassLibrary& library, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "{\n";
  out << "  \"format_version\": 1,\n";
  out << "  \"kernel\": \"" << json_escape(library.kernel_name()) << "\",\n";
  out << "  \"bandwidth\": " << format_full(library.bandwidth()) << ",\n";
  out << "  \"energies_kev\": ";
  write_double_array(out, library.grid()->energies_kev(), "    ");
  out << ",\n  \"materials\": [\n";
  const auto& entries = library.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << "    {\n      \"name\": \"" << json_escape(entries[i].name) << "\",\n      \"probabilities\": ";
    write_double_array(out, entries[i].model.probabilities(), "        ");
    out << "\n    }" << (i + 1 < entries.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  finish_write(out, path);
}

CorpusManifest load_manifest(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw SchemaError(path + ": manifest needs an 'entries' array");
  }
  CorpusManifest manifest;
  manifest.base_dir = doc.value("base_dir", std::string("."));
  if (fs::path(manifest.base_dir).is_relative()) {
    manifest.base_dir = (fs::path(path).parent_path() / manifest.base_dir).string();
  }
  for (const auto& entry : doc["entries"]) {
    if (!entry.is_object() || !entry.contains("path") || !entry.contains("label")) {
      throw SchemaError(path + ": each entry needs 'path' and 'label'");
    }
    CorpusEntry parsed;
    parsed.path = entry["path"].get<std::string>();
    parsed.label = entry["label"].get<std::string>();
    parsed.role = entry.value("role", std::string("train"));
    if (parsed.label.empty()) {
      throw SchemaError(path + ": empty label for '" + parsed.path + "'");
    }
    if (parsed.role != "train" && parsed.role != "test") {
      throw SchemaError(path + ": role must be 'train' or 'test', got '" + parsed.role + "'");
    }
    manifest.entries.push_back(std::move(parsed));
  }
  return manifest;
}

void save_manifest(const CorpusManifest& manifest, const std::string& path) {
  json doc;
  doc["base_dir"] = manifest.base_dir;
  doc["entries"] = json::array();
  for (const CorpusEntry& entry : manifest.entries) {
    doc["entries"].push_back({{"path", entry.path}, {"label", entry.label}, {"role", entry.role}});
  }
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << "\n";
  finish_write(out, path);
}

std::vector<LabeledSpectrum> load_corpus(const CorpusManifest& manifest) {
  std::vector<LabeledSpectrum> corpus;
  corpus.reserve(manifest.entries.size());
  for (const CorpusEntry& entry : manifest.entries) {
    fs::path file = entry.path;
    if (file.is_relative()) {
      file = fs::path(manifest.base_dir) / file;
    }
    corpus.push_back({entry.label, entry.role, read_spectrum(file.string())});
    corpus.back().spectrum.label = entry.label;
  }
  return corpus;
}

void save_sample_manifest(const std::vector<SampleRecord>& records, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "{\n  \"base_dir\": \".\",\n  \"entries\": [\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SampleRecord& r = records[i];
    out << "    {\"path\": \"" << json_escape(r.path) << "\", \"label\": \"" << json_escape(r.label)
        << "\", \"role\": \"test\", \"duration_seconds\": " << format_full(r.duration_seconds)
        << ", \"seed\": " << r.seed << "}" << (i + 1 < records.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  finish_write(out, path);
}

void write_report_json(const ClassificationReport& report, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "{\n  \"label\": \"" << json_escape(report.predicted_label) << "\",\n";
  out << "  \"index\": " << report.predicted_index << ",\n";
  out << "  \"scores\": ";
  write_double_array(out, report.scores, "    ");
  out << ",\n  \"margin\": " << format_full(report.margin) << "\n}\n";
  finish_write(out, path);
}

void write_trace_csv(const ReliabilityTrace& trace, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "time_s,D\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << format_full(trace.times[i]) << "," << format_full(trace.differences[i]) << "\n";
  }
  finish_write(out, path);
}

void write_cv_table_csv(const CvResult& result, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "kernel,bandwidth,mean_loglik_per_photon\n";
  for (std::size_t ki = 0; ki < result.kernel_names.size(); ++ki) {
    for (std::size_t bi = 0; bi < result.bandwidths.size(); ++bi) {
      out << result.kernel_names[ki] << "," << format_full(result.bandwidths[bi]) << ","
          << format_full(result.table[ki][bi]) << "\n";
    }
  }
  finish_write(out, path);
}

void write_cv_summary_json(const CvResult& result, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "{\n  \"best_kernel\": \"" << json_escape(result.best_kernel) << "\",\n";
  out << "  \"best_bandwidth\": " << format_full(result.best_bandwidth) << "\n}\n";
  finish_write(out, path);
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "true_label";
  for (const std::string& label : cm.labels) out << "," << label;
  out << "\n";
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    out << cm.labels[i];
    for (std::int64_t cell : cm.matrix[i]) out << "," << cell;
    out << "\n";
  }
  finish_write(out, path);
}

void write_confusion_json(const ConfusionMatrix& cm, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "{\n  \"labels\": [";
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    out << "\"" << json_escape(cm.labels[i]) << "\"" << (i + 1 < cm.labels.size() ? ", " : "");
  }
  out << "],\n  \"matrix\": [\n";
  for (std::size_t i = 0; i < cm.matrix.size(); ++i) {
    out << "    [";
    for (std::size_t j = 0; j < cm.matrix[i].size(); ++j) {
      out << cm.matrix[i][j] << (j + 1 < cm.matrix[i].size() ? ", " : "");
    }
    out << "]" << (i + 1 < cm.matrix.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"per_class_accuracy\": ";
  write_double_array(out, cm.per_class_accuracy, "    ");
  out << ",\n  \"overall_accuracy\": " << format_full(cm.overall_accuracy) << "\n}\n";
  finish_write(out, path);
}

void write_accuracy_csv(const AccuracyTable& table, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "duration_s,accuracy\n";
  for (std::size_t i = 0; i < table.durations.size(); ++i) {
    out << format_full(table.durations[i]) << "," << format_full(table.accuracies[i]) << "\n";
  }
  finish_write(out, path);
}

}  // namespace specclass
