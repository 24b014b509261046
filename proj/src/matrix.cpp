#include "tmclust/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "tmclust/error.hpp"

namespace tmclust {

SimilarityMatrix::SimilarityMatrix(std::string measure, std::vector<std::string> ids)
    : measure_(std::move(measure)), ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0) {
  for (std::size_t i = 0; i < ids_.size(); ++i) values_[i * ids_.size() + i] = 1.0;
}

SimilarityMatrix SimilarityMatrix::from_values(std::string measure, std::vector<std::string> ids,
                                               std::vector<double> values) {
  if (values.size() != ids.size() * ids.size()) {
    throw ValidationError("matrix: expected " + std::to_string(ids.size() * ids.size()) +
                          " values, got " + std::to_string(values.size()));
  }
  SimilarityMatrix m;
  m.measure_ = std::move(measure);
  m.ids_ = std::move(ids);
  m.values_ = std::move(values);
  return m;
}

void SimilarityMatrix::set(std::size_t i, std::size_t j, double v) {
  const std::size_t n = ids_.size();
  values_.at(i * n + j) = v;
  values_.at(j * n + i) = v;
}

void SimilarityMatrix::validate(double tol) const {
  const std::size_t n = ids_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 1.0) {
      throw ValidationError("matrix '" + measure_ + "': diagonal entry for '" + ids_[i] +
                            "' is not 1");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (*this)(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("matrix '" + measure_ + "': entry (" + ids_[i] + ", " + ids_[j] +
                              ") = " + format_double(v) + " outside [0,1]");
      }
      if (std::abs(v - (*this)(j, i)) > tol) {
        throw ValidationError("matrix '" + measure_ + "': not symmetric at (" + ids_[i] + ", " +
                              ids_[j] + ")");
      }
    }
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string SimilarityMatrix::to_csv() const {
  std::string out = "doc_id";
  for (const auto& id : ids_) out += "," + id;
  out += '\n';
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    out += ids_[i];
    for (std::size_t j = 0; j < ids_.size(); ++j) out += "," + format_double((*this)(i, j));
    out += '\n';
  }
  return out;
}

nlohmann::json SimilarityMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    rows.push_back(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(i * ids_.size()),
                                       values_.begin() +
                                           static_cast<std::ptrdiff_t>((i + 1) * ids_.size())));
  }
  return {{"measure", measure_}, {"ids", ids_}, {"rows", std::move(rows)}};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ValidationError("matrix csv: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

SimilarityMatrix SimilarityMatrix::from_csv(const std::string& text, std::string measure) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("matrix csv: empty input");
  auto header = split_csv_line(line);
  std::vector<std::string> ids(header.begin() + 1, header.end());
  std::vector<double> values;
  values.reserve(ids.size() * ids.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != ids.size() + 1 || row >= ids.size() || cells[0] != ids[row]) {
      throw ValidationError("matrix csv: malformed row " + std::to_string(row + 1));
    }
    for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(parse_double(cells[j]));
    ++row;
  }
  if (row != ids.size()) throw ValidationError("matrix csv: expected " + std::to_string(ids.size()) + " rows");
  return from_values(std::move(measure), std::move(ids), std::move(values));
}

SimilarityMatrix SimilarityMatrix::from_json(const nlohmann::json& j) {
  auto ids = j.at("ids").get<std::vector<std::string>>();
  std::vector<double> values;
  for (const auto& row : j.at("rows")) {
    if (row.size() != ids.size()) throw ValidationError("matrix json: ragged rows");
    for (const auto& v : row) values.push_back(v.get<double>());
  }
  return from_values(j.value("measure", std::string{}), std::move(ids), std::move(values));
}

SimilarityMatrix assemble_matrix(std::string measure, std::vector<std::string> ids,
                                 const std::function<double(std::size_t, std::size_t)>& pair_sim,
                                 unsigned threads) {
  SimilarityMatrix m(std::move(measure), std::move(ids));
  const std::size_t n = m.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> out(pairs.size(), 0.0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pairs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_at = pairs.size();
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < pairs.size();) {
      try {
        out[k] = pair_sim(pairs[k].first, pairs[k].second);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (k < failure_at) {
          failure = std::current_exception();
          failure_at = k;
        }
        next = pairs.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    m.set(pairs[k].first, pairs[k].second, std::clamp(out[k], 0.0, 1.0));
  }
  return m;
}

}  // namespace tmclust
