#include "tmclust/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "tmclust/error.hpp"

namespace tmclust::textpipe {

namespace {

constexpr std::string_view kBundledStopwords =
#include "stopwords_en.inc"
    ;

std::unordered_set<std::string> parse_word_list(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w;
    for (unsigned char ch : line) {
      if (!std::isspace(ch)) w.push_back(static_cast<char>(std::tolower(ch)));
    }
    if (!w.empty() && w[0] != '#') words.insert(std::move(w));
  }
  return words;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::set<std::string> Corpus::classes() const {
  std::set<std::string> out;
  for (const auto& d : docs) out.insert(d.label);
  return out;
}

void Corpus::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw ValidationError("duplicate document id '" + d.id + "'");
    if (d.label.empty()) throw ValidationError("document '" + d.id + "' has no gold label");
  }
}

TermVector::TermVector(std::string doc_id, std::vector<std::pair<std::string, double>> entries)
    : doc_id_(std::move(doc_id)) {
  std::sort(entries.begin(), entries.end());
  double sq = 0.0;
  for (auto& [term, w] : entries) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("term vector '" + doc_id_ + "': bad weight for '" + term + "'");
    }
    if (w == 0.0) continue;
    if (!entries_.empty() && entries_.back().first == term) {
      throw ValidationError("term vector '" + doc_id_ + "': duplicate term '" + term + "'");
    }
    sq += w * w;
    entries_.emplace_back(std::move(term), w);
  }
  norm_ = std::sqrt(sq);
}

TermVector TermVector::from_map(std::string doc_id, const std::map<std::string, double>& weights) {
  return TermVector(std::move(doc_id), {weights.begin(), weights.end()});
}

double TermVector::weight(std::string_view term) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), term,
      [](const auto& e, std::string_view t) { return std::string_view(e.first) < t; });
  return it != entries_.end() && it->first == term ? it->second : 0.0;
}

std::unordered_set<std::string> TokenizerOptions::default_stopwords() {
  std::istringstream in{std::string(kBundledStopwords)};
  return parse_word_list(in);
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list " + path.string());
  return parse_word_list(in);
}

std::string light_stem(std::string_view word) {
  std::string w(word);
  auto strip = [&w](std::string_view suffix, std::string_view repl, std::size_t min_stem) {
    if (ends_with(w, suffix) && w.size() - suffix.size() >= min_stem) {
      w = w.substr(0, w.size() - suffix.size()) + std::string(repl);
      return true;
    }
    return false;
  };
  if (strip("ies", "y", 2)) return w;
  if (strip("sses", "ss", 2)) return w;
  if (strip("ing", "", 3)) return w;
  if (strip("ed", "", 3)) return w;
  if (!ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) strip("s", "", 3);
  return w;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && !options.stopwords.count(cur)) {
      std::string tok = options.stem ? light_stem(cur) : cur;
      if (tok.size() >= 2) out.push_back(std::move(tok));
    }
    cur.clear();
  };
  for (unsigned char ch : text) {
    if (ch < 0x80 && std::isalpha(ch)) {
      cur.push_back(static_cast<char>(std::tolower(ch)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

Vectorized vectorize(const Corpus& corpus, const TokenizerOptions& options) {
  if (corpus.docs.empty()) throw ValidationError("vectorize: corpus has no documents");

  std::vector<std::map<std::string, std::size_t>> tf(corpus.docs.size());
  Vectorized result;
  auto& vocab = result.vocabulary;
  vocab.total_docs = corpus.docs.size();
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (auto& tok : tokenize(corpus.docs[d].text, options)) ++tf[d][std::move(tok)];
    for (const auto& [term, count] : tf[d]) ++vocab.df[term];
  }
  std::size_t next = 0;
  for (const auto& [term, df] : vocab.df) vocab.index.emplace(term, next++);

  const double n = static_cast<double>(vocab.total_docs);
  result.vectors.reserve(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    std::vector<std::pair<std::string, double>> entries;
    entries.reserve(tf[d].size());
    for (const auto& [term, count] : tf[d]) {
      const double idf = std::log(1.0 + n / static_cast<double>(vocab.df.at(term)));
      entries.emplace_back(term, static_cast<double>(count) * idf);
    }
    result.vectors.emplace_back(corpus.docs[d].id, std::move(entries));
    if (result.vectors.back().is_zero()) result.zero_docs.push_back(corpus.docs[d].id);
  }
  return result;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!trim(cur).empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' || ch == '!' || ch == '?' || ch == ';') {
      flush();
    } else if (ch == '\n' && i + 1 < text.size() && text[i + 1] == '\n') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

TopicForest build_fallback_forest(std::string_view text, std::string doc_id,
                                  const TokenizerOptions& options) {
  std::vector<std::vector<std::string>> sentences;
  std::unordered_map<std::string, std::size_t> doc_count;
  for (const auto& s : split_sentences(text)) {
    auto toks = tokenize(s, options);
    if (toks.empty()) continue;
    for (const auto& t : toks) ++doc_count[t];
    sentences.push_back(std::move(toks));
  }

  std::map<std::string, std::set<std::string>> topics;
  for (const auto& toks : sentences) {
    std::map<std::string, std::size_t> count;
    for (const auto& t : toks) ++count[t];
    // map iteration is lexicographic, so a strict comparison keeps the
    // smallest token among exact ties
    auto best = count.begin();
    for (auto it = std::next(count.begin()); it != count.end(); ++it) {
      const auto key = std::pair(it->second, doc_count[it->first]);
      const auto best_key = std::pair(best->second, doc_count[best->first]);
      if (key > best_key) best = it;
    }
    auto& kids = topics[best->first];
    for (const auto& [t, c] : count) {
      if (t != best->first) kids.insert(t);
    }
  }

  TopicForest forest(std::move(doc_id));
  for (const auto& [topic, kids] : topics) {
    const NodeId node = forest.add_child(TopicForest::kRoot, topic);
    for (const auto& k : kids) forest.add_child(node, k);
  }
  return forest;
}

std::map<std::string, std::string> load_labels_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open label file " + file.string());
  std::map<std::string, std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("label file " + file.string() + ": expected doc_id,label in '" +
                            line + "'");
    }
    auto id = unquote(trim(line.substr(0, comma)));
    auto label = unquote(trim(line.substr(comma + 1)));
    if (first && id == "doc_id") {
      first = false;
      continue;
    }
    first = false;
    labels[std::move(id)] = std::move(label);
  }
  return labels;
}

Corpus load_text_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  if (files.empty()) throw ValidationError("no documents in " + dir.string());
  std::sort(files.begin(), files.end());

  const auto labels = load_labels_csv(dir / "labels.csv");
  Corpus corpus;
  corpus.name = dir.filename().string();
  for (const auto& f : files) {
    const auto id = f.stem().string();
    const auto it = labels.find(id);
    if (it == labels.end()) throw ValidationError("document '" + id + "' has no gold label");
    corpus.docs.push_back(Document{id, read_file(f), it->second});
  }
  corpus.validate();
  return corpus;
}

Corpus load_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  Corpus corpus;
  corpus.name = file.stem().string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": " + e.what(), e.byte);
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text")) {
      throw ValidationError(file.string() + ":" + std::to_string(lineno) +
                            ": expected {\"id\",\"text\",\"label\"}");
    }
    const auto id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    if (!j.contains("label") || !j["label"].is_string()) {
      throw ValidationError("document '" + id + "' has no gold label");
    }
    corpus.docs.push_back(Document{id, j["text"].get<std::string>(), j["label"].get<std::string>()});
  }
  if (corpus.docs.empty()) throw ValidationError("no documents in " + file.string());
  corpus.validate();
  return corpus;
}

}  // namespace tmclust::textpipe
