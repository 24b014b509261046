#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>

#include "tmclust/cluster.hpp"
#include "tmclust/error.hpp"
#include "tmclust/evalx.hpp"
#include "tmclust/pipeline.hpp"
#include "tmclust/planted.hpp"
#include "tmclust/textpipe.hpp"
#include "tmclust/treesim.hpp"
#include "tmclust/xtm.hpp"

namespace fs = std::filesystem;
using namespace tmclust;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Flags a subcommand may override on top of the config file.
struct Overrides {
  std::optional<std::string> corpus, mode, linkage, out, dataset, stopwords;
  std::optional<std::vector<std::string>> measures;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool stem = false;
  bool timing = false;
};

void add_corpus_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--corpus", o.corpus, "Corpus directory or .jsonl file");
  cmd->add_option("--mode", o.mode, "xtm-dir | text-dir | jsonl | planted");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--dataset", o.dataset, "Dataset name used in reports");
  cmd->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  cmd->add_option("--seed", o.seed, "Seed for generated corpora");
  cmd->add_flag("--stem", o.stem, "Enable light suffix stripping");
}

pipeline::ExperimentConfig make_config(const std::string& config_file, const Overrides& o) {
  pipeline::ExperimentConfig c;
  if (!config_file.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(pipeline::read_text_file(config_file));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config " + config_file + ": " + e.what());
    }
    c = pipeline::ExperimentConfig::from_json(j);
  }
  if (o.corpus) c.corpus = *o.corpus;
  if (o.mode) c.mode = pipeline::parse_mode(*o.mode);
  if (o.measures) c.measures = *o.measures;
  if (o.linkage) c.linkage = cluster::parse_linkage(*o.linkage);
  if (o.k) c.k = *o.k;
  if (o.out) c.out = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.dataset) c.dataset = *o.dataset;
  if (o.stopwords) c.stopwords = fs::path(*o.stopwords);
  if (o.threads) c.threads = *o.threads;
  if (o.stem) c.stem = true;
  if (o.timing) c.timing = true;
  return c;
}

bool is_json(const fs::path& p) { return p.extension() == ".json"; }

SimilarityMatrix read_matrix(const fs::path& p) {
  const auto text = pipeline::read_text_file(p);
  if (is_json(p)) {
    try {
      return SimilarityMatrix::from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(p.string() + ": " + e.what(), 0);
    }
  }
  // matrix_<measure>.csv names the measure
  auto stem = p.stem().string();
  if (stem.rfind("matrix_", 0) == 0) stem = stem.substr(7);
  return SimilarityMatrix::from_csv(text, stem);
}

int run_ingest(const pipeline::ExperimentConfig& c) {
  const auto data = pipeline::load_dataset(c);
  pipeline::write_ingest(data, c.out);
  std::cout << "ingested " << data.size() << " documents, " << data.classes.size() << " classes, "
            << data.vocabulary.index.size() << " terms -> " << c.out.generic_string() << "\n";
  for (const auto& z : data.zero_docs) std::cerr << "warning: document '" << z << "' has no terms\n";
  return 0;
}

int run_simmatrix(const fs::path& in, const std::string& measure, std::optional<std::string> out,
                  unsigned threads) {
  const auto data = pipeline::read_ingest(in);
  const auto m = pipeline::compute_matrix(data, measure, threads);
  const fs::path target = out ? fs::path(*out) : in / ("matrix_" + measure + ".csv");
  pipeline::write_text_file(target, is_json(target) ? m.to_json().dump(1) + "\n" : m.to_csv());
  std::cout << target.generic_string() << "\n";
  return 0;
}

int run_cluster(const fs::path& matrix_file, const std::string& linkage_name, std::size_t k,
                std::optional<std::string> out) {
  const auto m = read_matrix(matrix_file);
  const auto linkage = cluster::parse_linkage(linkage_name);
  if (k < 1 || k > m.size()) {
    throw UsageError("--k must be between 1 and " + std::to_string(m.size()));
  }
  const auto d = cluster::hac(m, linkage);
  const auto a = cluster::cut(d, k);
  const fs::path dir = out ? fs::path(*out) : matrix_file.parent_path();
  const auto base = m.measure().empty() ? std::string(linkage_name) : m.measure() + "_" + linkage_name;
  auto dj = d.to_json(m.ids());
  dj["measure"] = m.measure();
  pipeline::write_text_file(dir / ("dendrogram_" + base + ".json"), dj.dump(1) + "\n");
  const auto assignment_file = dir / ("clusters_" + base + "_k" + std::to_string(k) + ".csv");
  pipeline::write_text_file(assignment_file, a.to_csv(m.ids()));
  std::cout << assignment_file.generic_string() << "\n";
  return 0;
}

int run_evaluate(const fs::path& assignment_file, const fs::path& labels_file, const std::string& dataset,
                 const std::string& measure, const std::string& linkage, std::optional<std::string> out) {
  const auto raw = textpipe::load_labels_csv(assignment_file);
  const auto gold_map = textpipe::load_labels_csv(labels_file);
  cluster::ClusterAssignment a;
  std::vector<std::string> ids, gold;
  for (const auto& [id, value] : raw) {
    std::size_t c = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), c);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ValidationError(assignment_file.string() + ": bad cluster '" + value + "' for '" + id + "'");
    }
    ids.push_back(id);
    a.assignment.push_back(c);
    a.k = std::max(a.k, c + 1);
    const auto g = gold_map.find(id);
    gold.push_back(g == gold_map.end() ? std::string{} : g->second);
  }
  if (ids.empty()) throw ValidationError(assignment_file.string() + ": no assignments");
  std::vector<std::string> classes;
  for (const auto& [id, label] : gold_map) classes.push_back(label);
  const auto table = evalx::contingency(a, gold, ids, classes);
  const auto report = evalx::evaluate(table, dataset, measure, linkage);
  if (out) pipeline::write_text_file(*out, report.to_json().dump(1) + "\n");
  std::cout << "dataset,measure,k,purity,entropy\n" << report.csv_row() << "\n";
  return 0;
}

int run_experiment(const pipeline::ExperimentConfig& c) {
  const auto rows = pipeline::experiment(c);
  std::cout << pipeline::report_csv(rows);
  return 0;
}

int run_generate(const pipeline::ExperimentConfig& c) {
  const auto docs = planted::generate(c.planted, c.seed);
  planted::write_xtm_dir(docs, c.out);
  std::cout << "wrote " << docs.size() << " documents -> " << c.out.generic_string() << "\n";
  return 0;
}

int run_tree(const std::string& file, bool text) {
  const auto bytes = pipeline::read_text_file(file);
  const auto id = fs::path(file).stem().string();
  const auto forest = text ? textpipe::build_fallback_forest(bytes, id)
                           : xtm::derive_forest(xtm::parse_xtm(bytes, id));
  std::cout << dump_tree(forest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic-map document clustering toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file, "JSON experiment config; flags override its values");

  Overrides o;

  auto* ingest = app.add_subcommand("ingest", "Parse a corpus into forests and term vectors");
  add_corpus_flags(ingest, o);

  auto* simmatrix = app.add_subcommand("simmatrix", "Pairwise similarity matrix over an ingested corpus");
  std::string sim_in, sim_measure;
  std::optional<std::string> sim_out;
  simmatrix->add_option("--in", sim_in, "Directory written by ingest")->required();
  simmatrix->add_option("--measure", sim_measure, "euclidean | cosine | jaccard | kld | tm-sim")->required();
  simmatrix->add_option("--out", sim_out, "Output file (.csv or .json)");
  simmatrix->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* clus = app.add_subcommand("cluster", "Agglomerative clustering of a similarity matrix");
  std::string clus_matrix, clus_linkage = "average";
  std::size_t clus_k = 0;
  std::optional<std::string> clus_out;
  clus->add_option("--matrix", clus_matrix, "Matrix file from simmatrix")->required();
  clus->add_option("--linkage", clus_linkage, "single | complete | average");
  clus->add_option("--k", clus_k, "Number of clusters")->required();
  clus->add_option("--out", clus_out, "Output directory (default: next to the matrix)");

  auto* eval = app.add_subcommand("evaluate", "Purity and entropy of a cluster assignment");
  std::string ev_assign, ev_labels, ev_dataset = "dataset", ev_measure, ev_linkage;
  std::optional<std::string> ev_out;
  eval->add_option("--assignment", ev_assign, "doc_id,cluster CSV")->required();
  eval->add_option("--labels", ev_labels, "doc_id,label CSV")->required();
  eval->add_option("--dataset", ev_dataset, "Dataset name for the report");
  eval->add_option("--measure", ev_measure, "Measure name for the report");
  eval->add_option("--linkage", ev_linkage, "Linkage name for the report");
  eval->add_option("--out", ev_out, "Write the JSON report here");

  auto* exp = app.add_subcommand("experiment", "Run every measure and write report.csv/report.json");
  add_corpus_flags(exp, o);
  exp->add_option("--measures", o.measures, "Subset of measures")->delimiter(',');
  exp->add_option("--linkage", o.linkage, "single | complete | average");
  exp->add_option("--k", o.k, "Number of clusters (default: gold class count)");
  exp->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  exp->add_flag("--timing", o.timing, "Fill the seconds column with wall time");

  auto* gen = app.add_subcommand("generate", "Write a planted-cluster corpus as an xtm-dir");
  gen->add_option("--out", o.out, "Output directory");
  gen->add_option("--seed", o.seed, "Random seed");

  auto* tree = app.add_subcommand("tree", "Print the topic forest of one document");
  std::string tree_file;
  bool tree_text = false;
  tree->add_option("file", tree_file, "XTM file, or text with --text")->required();
  tree->add_flag("--text", tree_text, "Build the fallback forest from plain text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(make_config(config_file, o));
    if (*simmatrix) return run_simmatrix(sim_in, sim_measure, sim_out, o.threads.value_or(0));
    if (*clus) return run_cluster(clus_matrix, clus_linkage, clus_k, clus_out);
    if (*eval) return run_evaluate(ev_assign, ev_labels, ev_dataset, ev_measure, ev_linkage, ev_out);
    if (*exp) return run_experiment(make_config(config_file, o));
    if (*gen) return run_generate(make_config(config_file, o));
    if (*tree) return run_tree(tree_file, tree_text);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
