#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tmclust/forest.hpp"

namespace tmclust::textpipe {

struct Document {
  std::string id;
  std::string text;
  std::string label;
};

struct Corpus {
  std::string name;
  std::vector<Document> docs;

  std::set<std::string> classes() const;
  /// Throws ValidationError on duplicate ids or empty labels.
  void validate() const;
};

/// Sparse TF-IDF vector. Entries are sorted by term and strictly positive.
class TermVector {
 public:
  TermVector() = default;
  TermVector(std::string doc_id, std::vector<std::pair<std::string, double>> entries);
  static TermVector from_map(std::string doc_id, const std::map<std::string, double>& weights);

  const std::string& doc_id() const noexcept { return doc_id_; }
  const std::vector<std::pair<std::string, double>>& entries() const noexcept { return entries_; }
  double norm() const noexcept { return norm_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  double weight(std::string_view term) const;

  friend bool operator==(const TermVector&, const TermVector&) = default;

 private:
  std::string doc_id_;
  std::vector<std::pair<std::string, double>> entries_;
  double norm_ = 0.0;
};

struct Vocabulary {
  std::map<std::string, std::size_t> index;  // indices follow sorted term order
  std::map<std::string, std::size_t> df;
  std::size_t total_docs = 0;
};

struct TokenizerOptions {
  std::unordered_set<std::string> stopwords = default_stopwords();
  bool stem = false;

  static std::unordered_set<std::string> default_stopwords();
};

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// Lower-cased ASCII-alphabetic runs of length >= 2 that are not stopwords.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

/// Strips a few common English inflection suffixes.
std::string light_stem(std::string_view word);

struct Vectorized {
  Vocabulary vocabulary;
  std::vector<TermVector> vectors;      // corpus order
  std::vector<std::string> zero_docs;   // ids with no surviving tokens
};

/// weight(t, d) = tf(t, d) * ln(1 + N / df(t)).
Vectorized vectorize(const Corpus& corpus, const TokenizerOptions& options = {});

/// Two-level forest: for each sentence its modal token becomes a depth-1
/// topic and the sentence's other distinct tokens become that topic's
/// children. Ties prefer the token more frequent in the whole text, then
/// the lexicographically smaller one.
TopicForest build_fallback_forest(std::string_view text, std::string doc_id = {},
                                  const TokenizerOptions& options = {});

std::vector<std::string> split_sentences(std::string_view text);

// Directory of *.txt files plus labels.csv (doc_id,label); doc_id is the file stem.
Corpus load_text_dir(const std::filesystem::path& dir);
// One {"id","text","label"} object per line.
Corpus load_jsonl(const std::filesystem::path& file);
/// doc_id -> label from a two-column CSV; an optional header row is skipped.
std::map<std::string, std::string> load_labels_csv(const std::filesystem::path& file);

}  // namespace tmclust::textpipe
