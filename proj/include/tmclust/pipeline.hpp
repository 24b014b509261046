#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tmclust/cluster.hpp"
#include "tmclust/evalx.hpp"
#include "tmclust/forest.hpp"
#include "tmclust/matrix.hpp"
#include "tmclust/planted.hpp"
#include "tmclust/textpipe.hpp"

namespace tmclust::pipeline {

enum class InputMode { kXtmDir, kTextDir, kJsonl, kPlanted };

std::string_view mode_name(InputMode m);
InputMode parse_mode(std::string_view name);

/// All measure names in report order.
const std::vector<std::string>& all_measures();

struct ExperimentConfig {
  std::filesystem::path corpus;
  InputMode mode = InputMode::kTextDir;
  std::vector<std::string> measures = all_measures();
  cluster::Linkage linkage = cluster::Linkage::kAverage;
  std::optional<std::size_t> k;  // default: number of gold classes
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  std::string dataset;  // default: corpus file/dir name
  std::optional<std::filesystem::path> stopwords;
  bool stem = false;
  unsigned threads = 0;
  bool timing = false;
  planted::Params planted;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults.
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// Throws UsageError for an empty or unknown measure list; with
  /// `check_paths`, also requires the corpus path to exist.
  void validate(bool check_paths = true) const;
};

/// A corpus after ingestion: everything later stages need.
struct Dataset {
  std::string name;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::string> classes;  // sorted
  std::vector<TopicForest> forests;
  std::vector<textpipe::TermVector> vectors;
  textpipe::Vocabulary vocabulary;
  std::vector<std::string> zero_docs;

  std::size_t size() const noexcept { return ids.size(); }
};

textpipe::TokenizerOptions tokenizer_options(const ExperimentConfig& config);

/// Reads the corpus named by `config` and derives forests and vectors.
/// In xtm-dir mode forests come from the XTM files only.
Dataset load_dataset(const ExperimentConfig& config);

/// forests/<n>.json, vectors.jsonl, vocabulary.json, labels.csv, dataset.json.
void write_ingest(const Dataset& data, const std::filesystem::path& out);
Dataset read_ingest(const std::filesystem::path& out);

SimilarityMatrix compute_matrix(const Dataset& data, std::string_view measure, unsigned threads = 0);

struct ReportRow {
  std::string dataset;
  std::string measure;
  std::string linkage;
  std::size_t k = 0;
  double purity = 0.0;
  double entropy = 0.0;
  double seconds = 0.0;
};

/// matrix -> HAC -> cut(k) -> purity/entropy against the dataset's labels.
evalx::EvalReport score_matrix(const Dataset& data, const SimilarityMatrix& m,
                               cluster::Linkage linkage, std::size_t k);

/// One row per configured measure. Seconds stay 0 unless config.timing.
std::vector<ReportRow> run_experiment(const Dataset& data, const ExperimentConfig& config);

/// dataset,measure,linkage,k,purity,entropy,seconds
std::string report_csv(const std::vector<ReportRow>& rows);

/// Full pipeline; writes <out>/report.csv and <out>/report.json (rows plus
/// the config echo). Returns the rows.
std::vector<ReportRow> experiment(const ExperimentConfig& config);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tmclust::pipeline
