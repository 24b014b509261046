#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmclust/cluster.hpp"
#include "tmclust/error.hpp"
#include "tmclust/evalx.hpp"
#include "tmclust/pipeline.hpp"
#include "tmclust/simbase.hpp"
#include "tmclust/textpipe.hpp"
#include "tmclust/treesim.hpp"
#include "tmclust/xtm.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace tmclust;

namespace {

using Rows = std::vector<std::vector<double>>;

textpipe::TermVector to_vector(const std::map<std::string, double>& weights, std::string id = {}) {
  return textpipe::TermVector::from_map(std::move(id), weights);
}

Rows to_rows(const SimilarityMatrix& m) {
  Rows out(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

SimilarityMatrix from_rows(const Rows& rows) {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ValidationError("matrix must be square");
    ids.push_back(std::to_string(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return SimilarityMatrix::from_values("python", std::move(ids), std::move(values));
}

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Topic-map document clustering toolkit";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<TopicForest>(m, "TopicForest")
      .def(py::init<std::string, std::string>(), "doc_id"_a = "", "root_label"_a = std::string(kDocRootLabel))
      .def("add_child", &TopicForest::add_child, "parent"_a, "label"_a)
      .def("label", &TopicForest::label)
      .def("children", &TopicForest::children)
      .def_property_readonly("doc_id", &TopicForest::doc_id)
      .def("__len__", &TopicForest::size)
      .def("dump", [](const TopicForest& f) { return dump_tree(f); })
      .def("to_json", [](const TopicForest& f) { return to_py(forest_to_json(f)); })
      .def_static("from_json", [](const py::object& o) { return forest_from_json(from_py(o)); })
      .def(py::self == py::self);
  m.attr("ROOT") = TopicForest::kRoot;
  m.attr("DOC_ROOT_LABEL") = std::string(kDocRootLabel);

  m.def("parse_xtm_forest",
        [](const std::string& xml, const std::string& doc_id) {
          return xtm::derive_forest(xtm::parse_xtm(xml, doc_id));
        },
        "Topic forest of an XTM document.", "xml"_a, "doc_id"_a = "");
  m.def("fallback_forest",
        [](const std::string& text, const std::string& doc_id) {
          return textpipe::build_fallback_forest(text, doc_id);
        },
        "Topic forest built from plain text.", "text"_a, "doc_id"_a = "");

  m.def("tokenize",
        [](const std::string& text, bool stem) {
          textpipe::TokenizerOptions opts;
          opts.stem = stem;
          return textpipe::tokenize(text, opts);
        },
        "text"_a, "stem"_a = false);

  m.def("max_common_subtree",
        [](const TopicForest& a, const TopicForest& b) { return treesim::max_common_subtree(a, b).pairs; },
        "Matched (level-order number, level-order number) pairs.", "t1"_a, "t2"_a);
  m.def("tm_similarity", &treesim::tm_similarity, "t1"_a, "t2"_a);

  m.def("similarity",
        [](const std::string& measure, const std::map<std::string, double>& a,
           const std::map<std::string, double>& b) {
          return simbase::similarity(simbase::parse_measure(measure), to_vector(a, "a"), to_vector(b, "b"));
        },
        "Baseline similarity between two term-weight dicts.", "measure"_a, "a"_a, "b"_a);

  m.def("forest_matrix",
        [](const std::vector<TopicForest>& forests, unsigned threads) {
          return to_rows(treesim::build_matrix(forests, threads));
        },
        "forests"_a, "threads"_a = 0);
  m.def("vector_matrix",
        [](const std::string& measure, const std::vector<std::map<std::string, double>>& vectors,
           unsigned threads) {
          std::vector<textpipe::TermVector> tv;
          for (std::size_t i = 0; i < vectors.size(); ++i) tv.push_back(to_vector(vectors[i], std::to_string(i)));
          return to_rows(simbase::build_matrix_base(simbase::parse_measure(measure), tv, threads));
        },
        "measure"_a, "vectors"_a, "threads"_a = 0);

  m.def("hac",
        [](const Rows& rows, const std::string& linkage) {
          std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>> out;
          for (const auto& mg : cluster::hac(from_rows(rows), cluster::parse_linkage(linkage)).merges) {
            out.emplace_back(mg.left, mg.right, mg.similarity, mg.merged);
          }
          return out;
        },
        "Merges as (left, right, similarity, new id).", "matrix"_a, "linkage"_a = "average");
  m.def("cluster",
        [](const Rows& rows, std::size_t k, const std::string& linkage) {
          return cluster::cut(cluster::hac(from_rows(rows), cluster::parse_linkage(linkage)), k).assignment;
        },
        "Flat clusters after agglomeration down to k.", "matrix"_a, "k"_a, "linkage"_a = "average");

  m.def("purity",
        [](std::vector<std::vector<std::size_t>> counts) {
          return evalx::purity(evalx::table_from_counts(std::move(counts)));
        },
        "counts"_a);
  m.def("entropy",
        [](std::vector<std::vector<std::size_t>> counts) {
          return evalx::entropy(evalx::table_from_counts(std::move(counts)));
        },
        "counts"_a);

  m.def("experiment",
        [](const py::object& config) {
          const auto c = pipeline::ExperimentConfig::from_json(from_py(config));
          py::list out;
          for (const auto& r : pipeline::experiment(c)) {
            out.append(py::dict("dataset"_a = r.dataset, "measure"_a = r.measure, "linkage"_a = r.linkage,
                                "k"_a = r.k, "purity"_a = r.purity, "entropy"_a = r.entropy,
                                "seconds"_a = r.seconds));
          }
          return out;
        },
        "Full pipeline from a config dict; writes report.csv and report.json.", "config"_a);
}
