#include "tmclust/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tmclust/error.hpp"
#include "tmclust/simbase.hpp"
#include "tmclust/treesim.hpp"
#include "tmclust/xtm.hpp"

namespace tmclust::pipeline {

namespace fs = std::filesystem;

std::string_view mode_name(InputMode m) {
  switch (m) {
    case InputMode::kXtmDir: return "xtm-dir";
    case InputMode::kTextDir: return "text-dir";
    case InputMode::kJsonl: return "jsonl";
    case InputMode::kPlanted: return "planted";
  }
  return "?";
}

InputMode parse_mode(std::string_view name) {
  for (auto m : {InputMode::kXtmDir, InputMode::kTextDir, InputMode::kJsonl, InputMode::kPlanted}) {
    if (mode_name(m) == name) return m;
  }
  throw UsageError("unknown input mode '" + std::string(name) + "'");
}

const std::vector<std::string>& all_measures() {
  static const std::vector<std::string> kAll{"euclidean", "cosine", "jaccard", "kld",
                                             treesim::kMeasureName};
  return kAll;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"corpus", corpus.generic_string()},
                   {"mode", std::string(mode_name(mode))},
                   {"measures", measures},
                   {"linkage", std::string(cluster::linkage_name(linkage))},
                   {"k", nullptr},
                   {"out", out.generic_string()},
                   {"seed", seed},
                   {"dataset", dataset},
                   {"stopwords", nullptr},
                   {"stem", stem},
                   {"threads", threads},
                   {"timing", timing},
                   {"planted", planted.to_json()}};
  if (k) j["k"] = *k;
  if (stopwords) j["stopwords"] = stopwords->generic_string();
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("corpus")) c.corpus = j["corpus"].get<std::string>();
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("measures")) c.measures = j["measures"].get<std::vector<std::string>>();
    if (j.contains("linkage")) c.linkage = cluster::parse_linkage(j["linkage"].get<std::string>());
    if (j.contains("k") && !j["k"].is_null()) c.k = j["k"].get<std::size_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("dataset")) c.dataset = j["dataset"].get<std::string>();
    if (j.contains("stopwords") && !j["stopwords"].is_null()) {
      c.stopwords = fs::path(j["stopwords"].get<std::string>());
    }
    if (j.contains("stem")) c.stem = j["stem"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("timing")) c.timing = j["timing"].get<bool>();
    if (j.contains("planted")) c.planted = planted::Params::from_json(j["planted"]);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

void ExperimentConfig::validate(bool check_paths) const {
  if (measures.empty()) throw UsageError("config: measures list is empty");
  const auto& known = all_measures();
  for (const auto& m : measures) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw UsageError("config: unknown measure '" + m + "'");
    }
  }
  if (k && *k == 0) throw UsageError("config: k must be at least 1");
  if (check_paths && mode != InputMode::kPlanted && !fs::exists(corpus)) {
    throw IoError("corpus path does not exist: " + corpus.string());
  }
  if (check_paths && stopwords && !fs::exists(*stopwords)) {
    throw IoError("stopword list does not exist: " + stopwords->string());
  }
}

textpipe::TokenizerOptions tokenizer_options(const ExperimentConfig& config) {
  textpipe::TokenizerOptions opts;
  if (config.stopwords) opts.stopwords = textpipe::load_stopwords(*config.stopwords);
  opts.stem = config.stem;
  return opts;
}

namespace {

void finish(Dataset& data, const textpipe::Corpus& corpus, const textpipe::TokenizerOptions& opts) {
  auto vec = textpipe::vectorize(corpus, opts);
  data.vectors = std::move(vec.vectors);
  data.vocabulary = std::move(vec.vocabulary);
  data.zero_docs = std::move(vec.zero_docs);
  std::set<std::string> classes(data.labels.begin(), data.labels.end());
  data.classes.assign(classes.begin(), classes.end());
}

Dataset load_xtm_dir(const fs::path& dir, const textpipe::TokenizerOptions& opts) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xtm") files.push_back(entry.path());
  }
  if (files.empty()) throw ValidationError("no documents in " + dir.string());
  std::sort(files.begin(), files.end());
  const auto labels = textpipe::load_labels_csv(dir / "labels.csv");

  Dataset data;
  textpipe::Corpus corpus;
  for (const auto& f : files) {
    const auto id = f.stem().string();
    const auto label = labels.find(id);
    if (label == labels.end()) throw ValidationError("document '" + id + "' has no gold label");
    const auto doc = xtm::parse_xtm(read_text_file(f), id);
    data.forests.push_back(xtm::derive_forest(doc));

    std::string text;
    auto sidecar = f;
    sidecar.replace_extension(".txt");
    if (fs::exists(sidecar)) {
      text = read_text_file(sidecar);
    } else {
      for (const auto& t : doc.topics) text += t.name + ".\n";
      for (const auto& o : doc.occurrences) text += o.value + "\n";
    }
    data.ids.push_back(id);
    data.labels.push_back(label->second);
    corpus.docs.push_back(textpipe::Document{id, std::move(text), label->second});
  }
  corpus.validate();
  finish(data, corpus, opts);
  return data;
}

Dataset from_corpus(const textpipe::Corpus& corpus, const textpipe::TokenizerOptions& opts) {
  Dataset data;
  for (const auto& d : corpus.docs) {
    data.ids.push_back(d.id);
    data.labels.push_back(d.label);
    data.forests.push_back(textpipe::build_fallback_forest(d.text, d.id, opts));
  }
  finish(data, corpus, opts);
  return data;
}

std::string default_name(const ExperimentConfig& config) {
  if (!config.dataset.empty()) return config.dataset;
  if (config.mode == InputMode::kPlanted) return "planted-s" + std::to_string(config.seed);
  auto p = config.corpus;
  if (!p.has_filename() && p.has_parent_path()) p = p.parent_path();
  return config.mode == InputMode::kJsonl ? p.stem().string() : p.filename().string();
}

std::string safe_file_stem(const std::string& id) {
  std::string s;
  for (char ch : id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '-' || ch == '_' || ch == '.';
    s.push_back(ok ? ch : '_');
  }
  if (s.empty() || s[0] == '.') s.insert(s.begin(), '_');
  return s;
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& config) {
  config.validate();
  const auto opts = tokenizer_options(config);
  Dataset data;
  switch (config.mode) {
    case InputMode::kXtmDir: data = load_xtm_dir(config.corpus, opts); break;
    case InputMode::kTextDir: data = from_corpus(textpipe::load_text_dir(config.corpus), opts); break;
    case InputMode::kJsonl: data = from_corpus(textpipe::load_jsonl(config.corpus), opts); break;
    case InputMode::kPlanted: {
      textpipe::Corpus corpus;
      for (auto& d : planted::generate(config.planted, config.seed)) {
        data.ids.push_back(d.id);
        data.labels.push_back(d.label);
        data.forests.push_back(std::move(d.forest));
        corpus.docs.push_back(textpipe::Document{d.id, std::move(d.text), d.label});
      }
      finish(data, corpus, opts);
      break;
    }
  }
  data.name = default_name(config);
  return data;
}

void write_ingest(const Dataset& data, const fs::path& out) {
  fs::create_directories(out / "forests");
  nlohmann::json docs = nlohmann::json::array();
  std::unordered_set<std::string> used;
  std::string labels_csv = "doc_id,label\n";
  std::string vectors;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto stem = safe_file_stem(data.ids[i]);
    if (!used.insert(stem).second) {
      stem += "_" + std::to_string(i);
      used.insert(stem);
    }
    const auto rel = "forests/" + stem + ".json";
    write_text_file(out / rel, forest_to_json(data.forests[i]).dump(1) + "\n");
    docs.push_back({{"id", data.ids[i]}, {"label", data.labels[i]}, {"forest", rel}});
    labels_csv += data.ids[i] + "," + data.labels[i] + "\n";

    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [term, w] : data.vectors[i].entries()) entries[term] = w;
    vectors += nlohmann::json{{"id", data.ids[i]},
                              {"norm", data.vectors[i].norm()},
                              {"zero", data.vectors[i].is_zero()},
                              {"entries", std::move(entries)}}
                   .dump() +
               "\n";
  }
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [term, idx] : data.vocabulary.index) {
    terms[term] = {{"index", idx}, {"df", data.vocabulary.df.at(term)}};
  }
  write_text_file(out / "vocabulary.json",
                  nlohmann::json{{"total_docs", data.vocabulary.total_docs}, {"terms", std::move(terms)}}
                          .dump(1) +
                      "\n");
  write_text_file(out / "vectors.jsonl", vectors);
  write_text_file(out / "labels.csv", labels_csv);
  write_text_file(out / "dataset.json", nlohmann::json{{"name", data.name},
                                                       {"classes", data.classes},
                                                       {"zero_docs", data.zero_docs},
                                                       {"docs", std::move(docs)}}
                                                .dump(1) +
                                            "\n");
}

Dataset read_ingest(const fs::path& out) {
  if (!fs::exists(out / "dataset.json")) {
    throw IoError("no ingested dataset in " + out.string() + " (run `ingest` first)");
  }
  Dataset data;
  try {
    const auto manifest = nlohmann::json::parse(read_text_file(out / "dataset.json"));
    data.name = manifest.at("name").get<std::string>();
    data.classes = manifest.at("classes").get<std::vector<std::string>>();
    data.zero_docs = manifest.value("zero_docs", std::vector<std::string>{});
    for (const auto& d : manifest.at("docs")) {
      data.ids.push_back(d.at("id").get<std::string>());
      data.labels.push_back(d.at("label").get<std::string>());
      data.forests.push_back(forest_from_json(
          nlohmann::json::parse(read_text_file(out / d.at("forest").get<std::string>()))));
    }

    std::istringstream vin(read_text_file(out / "vectors.jsonl"));
    std::string line;
    while (std::getline(vin, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      data.vectors.push_back(textpipe::TermVector::from_map(
          j.at("id").get<std::string>(), j.at("entries").get<std::map<std::string, double>>()));
    }

    const auto vocab = nlohmann::json::parse(read_text_file(out / "vocabulary.json"));
    data.vocabulary.total_docs = vocab.at("total_docs").get<std::size_t>();
    for (const auto& [term, info] : vocab.at("terms").items()) {
      data.vocabulary.index[term] = info.at("index").get<std::size_t>();
      data.vocabulary.df[term] = info.at("df").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("corrupt ingest output in " + out.string() + ": " + e.what());
  }
  if (data.vectors.size() != data.ids.size()) {
    throw ValidationError("ingest output in " + out.string() + ": vector count does not match documents");
  }
  return data;
}

SimilarityMatrix compute_matrix(const Dataset& data, std::string_view measure, unsigned threads) {
  if (data.size() < 2) throw ValidationError("similarity matrix needs at least 2 documents");
  SimilarityMatrix m = measure == treesim::kMeasureName
                           ? treesim::build_matrix(data.forests, threads)
                           : simbase::build_matrix_base(simbase::parse_measure(measure), data.vectors, threads);
  m.validate();
  return m;
}

evalx::EvalReport score_matrix(const Dataset& data, const SimilarityMatrix& m,
                               cluster::Linkage linkage, std::size_t k) {
  const auto dendrogram = cluster::hac(m, linkage);
  const auto assignment = cluster::cut(dendrogram, k);
  const auto table = evalx::contingency(assignment, data.labels, data.ids, data.classes);
  return evalx::evaluate(table, data.name, m.measure(), std::string(cluster::linkage_name(linkage)));
}

std::vector<ReportRow> run_experiment(const Dataset& data, const ExperimentConfig& config) {
  config.validate(false);
  const std::size_t k = config.k.value_or(data.classes.size());
  std::vector<ReportRow> rows;
  for (const auto& measure : config.measures) {
    const auto start = std::chrono::steady_clock::now();
    const auto m = compute_matrix(data, measure, config.threads);
    const auto report = score_matrix(data, m, config.linkage, k);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    rows.push_back(ReportRow{data.name, measure, std::string(cluster::linkage_name(config.linkage)), k,
                             report.purity, report.entropy, config.timing ? elapsed.count() : 0.0});
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "dataset,measure,linkage,k,purity,entropy,seconds\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%.3f\n", r.k, r.purity, r.entropy, r.seconds);
    out += r.dataset + "," + r.measure + "," + r.linkage + buf;
  }
  return out;
}

std::vector<ReportRow> experiment(const ExperimentConfig& config) {
  const auto data = load_dataset(config);
  const auto rows = run_experiment(data, config);
  write_text_file(config.out / "report.csv", report_csv(rows));

  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& r : rows) {
    jrows.push_back({{"dataset", r.dataset},
                     {"measure", r.measure},
                     {"linkage", r.linkage},
                     {"k", r.k},
                     {"purity", r.purity},
                     {"entropy", r.entropy},
                     {"seconds", r.seconds}});
  }
  write_text_file(config.out / "report.json",
                  nlohmann::json{{"config", config.to_json()}, {"rows", std::move(jrows)}}.dump(1) + "\n");
  return rows;
}

}  // namespace tmclust::pipeline
