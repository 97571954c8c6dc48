#include "gbht/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace gbht {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t row,
                             std::size_t col, const std::string& what) {
  std::ostringstream msg;
  msg << path << ": row " << row << ", column " << col << ": " << what;
  throw std::runtime_error(msg.str());
}

}  // namespace

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty file");

  // Header iff any token of the first row fails to parse as a float.
  double scratch;
  const bool has_header = std::any_of(
      rows.front().begin(), rows.front().end(),
      [&](const std::string& f) { return !parse_double(f, scratch); });

  Dataset ds;
  std::size_t first_data = 0;
  if (has_header) {
    for (const std::string& name : rows.front())
      ds.column_names.push_back(trim(name));
    first_data = 1;
  }
  const std::size_t width = rows.front().size();
  const std::size_t n = rows.size() - first_data;
  if (n == 0) throw std::runtime_error(path + ": no data rows");

  std::optional<std::size_t> label_idx;
  if (label_column) {
    if (!has_header)
      throw std::runtime_error(path + ": label column '" + *label_column +
                               "' requires a header row");
    for (std::size_t c = 0; c < ds.column_names.size(); ++c)
      if (ds.column_names[c] == *label_column) label_idx = c;
    if (!label_idx)
      throw std::runtime_error(path + ": label column '" + *label_column +
                               "' not found in header");
  }

  const std::size_t d = label_idx ? width - 1 : width;
  if (d == 0) throw std::runtime_error(path + ": no feature columns");
  ds.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  if (label_idx) ds.labels.emplace();

  for (std::size_t r = 0; r < n; ++r) {
    const auto& fields = rows[r + first_data];
    const std::size_t row_1based = r + first_data + 1;
    if (fields.size() != width)
      parse_fail(path, row_1based, fields.size(),
                 "expected " + std::to_string(width) + " fields, got " +
                     std::to_string(fields.size()));
    std::size_t out_c = 0;
    for (std::size_t c = 0; c < width; ++c) {
      double v;
      if (!parse_double(fields[c], v))
        parse_fail(path, row_1based, c + 1, "not a number: '" + fields[c] + "'");
      if (!std::isfinite(v))
        parse_fail(path, row_1based, c + 1, "non-finite value");
      if (label_idx && c == *label_idx) {
        if (v != 0.0 && v != 1.0)
          parse_fail(path, row_1based, c + 1, "label must be 0 or 1");
        ds.labels->push_back(static_cast<int>(v));
      } else {
        ds.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_c++)) = v;
      }
    }
  }
  if (label_idx) {
    // Drop the label name from the feature-name list, keeping positions aligned.
    std::vector<std::string> names;
    for (std::size_t c = 0; c < ds.column_names.size(); ++c)
      if (c != *label_idx) names.push_back(ds.column_names[c]);
    ds.column_names = std::move(names);
  }
  return ds;
}

void write_csv(const std::string& path, const Matrix& m,
               const std::vector<std::string>& column_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  if (!column_names.empty()) {
    if (column_names.size() != static_cast<std::size_t>(m.cols()))
      throw std::invalid_argument("write_csv: header width mismatch");
    for (std::size_t c = 0; c < column_names.size(); ++c)
      out << (c ? "," : "") << column_names[c];
    out << '\n';
  }
  char buf[40];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

MinMaxScaling minmax_scale(const Matrix& data) {
  if (data.rows() < 1) throw std::invalid_argument("minmax_scale: empty data");
  MinMaxScaling r;
  r.scaled.resize(data.rows(), data.cols());
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    const double lo = data.col(c).minCoeff();
    const double hi = data.col(c).maxCoeff();
    r.lo.push_back(lo);
    r.hi.push_back(hi);
    if (hi > lo) {
      r.scaled.col(c) = (data.col(c).array() - lo) / (hi - lo);
    } else {
      r.scaled.col(c).setZero();
      r.constant_columns.push_back(static_cast<int>(c));
    }
  }
  return r;
}

std::pair<PcaProjection, Matrix> pca_reduce(const Matrix& data, int target_dim) {
  const auto n = data.rows();
  const auto d = data.cols();
  if (n < 2) throw std::invalid_argument("pca_reduce: need at least two samples");
  if (target_dim < 1 || target_dim > d)
    throw std::invalid_argument("pca_reduce: target dimension out of range");

  PcaProjection proj;
  proj.mean = data.colwise().mean().transpose();
  Matrix centered = data.rowwise() - proj.mean.transpose();
  Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("pca_reduce: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top target_dim, descending.
  proj.basis.resize(d, target_dim);
  for (int j = 0; j < target_dim; ++j) {
    Vector col = solver.eigenvectors().col(d - 1 - j);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < d; ++i)
      if (std::abs(col[i]) > std::abs(col[arg])) arg = i;
    if (col[arg] < 0.0) col = -col;
    proj.basis.col(j) = col;
  }
  return {proj, centered * proj.basis};
}

}  // namespace gbht
