#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "cssl/problems.hpp"

namespace cssl {
namespace {

const char* skip_space(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p;
}

double read_value(const char*& p, const char* end, std::size_t line) {
  double v = 0.0;
  // from_chars rejects a leading '+', which some writers emit.
  if (p < end && *p == '+') ++p;
  const auto [next, ec] = std::from_chars(p, end, v);
  if (ec != std::errc() || next == p) throw ParseError("malformed number", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line);
  p = next;
  return v;
}

}  // namespace

SparseRegressionData read_sparse_regression(std::istream& in, Index min_features) {
  std::vector<double> labels;
  std::vector<Eigen::Triplet<double>> trips;
  Index max_index = 0;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const char* p = raw.data();
    const char* end = p + raw.size();
    p = skip_space(p, end);
    if (p == end) continue;
    const auto row = static_cast<Index>(labels.size());
    labels.push_back(read_value(p, end, line));
    Index prev = 0;
    while (true) {
      p = skip_space(p, end);
      if (p == end) break;
      long long idx = 0;
      const auto [after, ec] = std::from_chars(p, end, idx);
      if (ec != std::errc() || after == p || after == end || *after != ':')
        throw ParseError("expected index:value", line);
      if (idx < 1) throw ParseError("feature indices are 1-based", line);
      if (idx <= prev) throw ParseError("feature indices must be strictly increasing", line);
      prev = static_cast<Index>(idx);
      p = after + 1;
      const double v = read_value(p, end, line);
      if (p != end && *p != ' ' && *p != '\t' && *p != '\r')
        throw ParseError("trailing characters after value", line);
      trips.emplace_back(row, prev - 1, v);
      max_index = std::max(max_index, prev);
    }
  }
  if (labels.empty()) throw ParseError("no data rows", line);

  SparseRegressionData out;
  const auto rows = static_cast<Index>(labels.size());
  out.A = SparseMatrix(rows, std::max(max_index, min_features));
  out.A.setFromTriplets(trips.begin(), trips.end());
  out.A.makeCompressed();
  out.b = Eigen::Map<const Vector>(labels.data(), rows);
  return out;
}

SparseRegressionData load_sparse_regression(const std::string& path, Index min_features) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return read_sparse_regression(in, min_features);
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_sparse_regression(std::ostream& out, const SparseMatrix& A, const Vector& b) {
  if (b.size() != A.rows()) throw DimensionError("write_sparse_regression: b does not match A");
  const Eigen::SparseMatrix<double, Eigen::RowMajor> R(A);
  for (Index i = 0; i < R.rows(); ++i) {
    put_number(out, b[i]);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(R, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':';
      put_number(out, it.value());
    }
    out << '\n';
  }
}

}  // namespace cssl
