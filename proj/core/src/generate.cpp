#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cssl/problems.hpp"

namespace cssl {

const char* to_string(Family f) {
  switch (f) {
    case Family::I: return "I";
    case Family::II: return "II";
    case Family::III: return "III";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "I" || s == "1") return Family::I;
  if (s == "II" || s == "2") return Family::II;
  if (s == "III" || s == "3") return Family::III;
  throw std::invalid_argument("unknown problem family '" + s + "' (expected I, II or III)");
}

const char* to_string(LambdaSetting s) { return s == LambdaSetting::S1 ? "S1" : "S2"; }

LambdaSetting parse_setting(const std::string& s) {
  if (s == "S1" || s == "s1" || s == "1") return LambdaSetting::S1;
  if (s == "S2" || s == "s2" || s == "2") return LambdaSetting::S2;
  throw std::invalid_argument("unknown lambda setting '" + s + "' (expected S1 or S2)");
}

GeneratorSpec GeneratorSpec::normalized() const {
  GeneratorSpec out = *this;
  if (family == Family::III) {
    out.m_eq = 1;
    out.m_ineq = 0;
  } else if (family == Family::II) {
    out.m_ineq = 0;
  }
  return out;
}

void GeneratorSpec::validate() const {
  if (m <= 0 || n <= 0) throw std::invalid_argument("GeneratorSpec: m and n must be positive");
  if (groups <= 0 || groups > n)
    throw std::invalid_argument("GeneratorSpec: need 0 < J <= n");
  if (m_eq < 0 || m_ineq < 0)
    throw std::invalid_argument("GeneratorSpec: constraint counts must be >= 0");
  if (!(active_group_fraction >= 0.0 && active_group_fraction <= 1.0) ||
      !(support_fraction >= 0.0 && support_fraction <= 1.0))
    throw std::invalid_argument("GeneratorSpec: fractions must lie in [0, 1]");
  if (!(noise >= 0.0)) throw std::invalid_argument("GeneratorSpec: noise must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Index parse_index(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<Index>(out);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + v + "'", line);
  }
}

double parse_real(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(out)) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ParseError("expected a finite number, got '" + v + "'", line);
  }
}

// Draws k distinct values from [0, n) by a partial Fisher-Yates shuffle.
std::vector<Index> sample_without_replacement(std::mt19937_64& rng, Index n, Index k) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k; ++i) {
    const auto span = static_cast<std::uint64_t>(n - i);
    const Index pick = i + static_cast<Index>(rng() % span);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

SparseMatrix pair_rows(const GroupPartition& groups, Index rows, Index first_pair) {
  const Index J = groups.size();
  std::vector<Eigen::Triplet<double>> trips;
  for (Index r = 0; r < rows; ++r) {
    const Index g1 = (2 * (first_pair + r)) % J;
    const Index g2 = (2 * (first_pair + r) + 1) % J;
    for (Index i : groups.group(g1)) trips.emplace_back(r, i, 1.0);
    if (g2 != g1)
      for (Index i : groups.group(g2)) trips.emplace_back(r, i, 1.0);
  }
  SparseMatrix out(rows, groups.dimension());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

GeneratorSpec parse_generator_config(std::istream& in) {
  GeneratorSpec spec;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    if (key == "family") {
      try {
        spec.family = parse_family(val);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line);
      }
    } else if (key == "m") {
      spec.m = parse_index(val, line);
    } else if (key == "n") {
      spec.n = parse_index(val, line);
    } else if (key == "mE") {
      spec.m_eq = parse_index(val, line);
    } else if (key == "mI") {
      spec.m_ineq = parse_index(val, line);
    } else if (key == "J") {
      spec.groups = parse_index(val, line);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_index(val, line));
    } else if (key == "noise") {
      spec.noise = parse_real(val, line);
    } else if (key == "active_fraction") {
      spec.active_group_fraction = parse_real(val, line);
    } else if (key == "support_fraction") {
      spec.support_fraction = parse_real(val, line);
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  return spec;
}

ConstraintBlocks build_constraints(Family family, const GroupPartition& groups, Index m_eq,
                                   Index m_ineq) {
  const Index n = groups.dimension();
  ConstraintBlocks out;
  switch (family) {
    case Family::III: {
      std::vector<Eigen::Triplet<double>> trips;
      for (Index i = 0; i < n; ++i) trips.emplace_back(0, i, 1.0);
      out.B_E = SparseMatrix(1, n);
      out.B_E.setFromTriplets(trips.begin(), trips.end());
      out.B_I = SparseMatrix(0, n);
      break;
    }
    case Family::II:
      out.B_E = pair_rows(groups, m_eq, 0);
      out.B_I = SparseMatrix(0, n);
      break;
    case Family::I:
      out.B_E = pair_rows(groups, m_eq, 0);
      out.B_I = pair_rows(groups, m_ineq, m_eq);
      break;
  }
  out.c_E = Vector::Zero(out.B_E.rows());
  out.c_I = Vector::Zero(out.B_I.rows());
  return out;
}

Problem generate(const GeneratorSpec& raw_spec, Vector* ground_truth) {
  const GeneratorSpec spec = raw_spec.normalized();
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix A(spec.m, spec.n);
  for (Index j = 0; j < spec.n; ++j)
    for (Index i = 0; i < spec.m; ++i) A(i, j) = gauss(rng);

  GroupPartition groups = GroupPartition::contiguous(spec.n, spec.groups);
  const auto active = static_cast<Index>(
      std::ceil(spec.active_group_fraction * static_cast<double>(spec.groups)));
  Vector truth = Vector::Zero(spec.n);
  for (Index j : sample_without_replacement(rng, spec.groups, std::min(active, spec.groups))) {
    const auto& g = groups.group(j);
    const auto size = static_cast<Index>(g.size());
    const auto k = std::min(
        size, static_cast<Index>(std::ceil(spec.support_fraction * static_cast<double>(size))));
    for (Index pos : sample_without_replacement(rng, size, k))
      truth[g[static_cast<std::size_t>(pos)]] = gauss(rng);
  }

  Vector b = A * truth;
  for (Index i = 0; i < spec.m; ++i) b[i] += spec.noise * gauss(rng);

  ConstraintBlocks cons = build_constraints(spec.family, groups, spec.m_eq, spec.m_ineq);
  if (ground_truth != nullptr) *ground_truth = truth;
  std::string name = std::string("rand-") + to_string(spec.family) + "-s" +
                     std::to_string(spec.seed);
  return Problem(sparse_from_dense(A), std::move(b), std::move(cons.B_E), std::move(cons.c_E),
                 std::move(cons.B_I), std::move(cons.c_I), std::move(groups), PenaltyParams{},
                 std::move(name));
}

PenaltyParams lambda_settings(const SparseMatrix& A, const Vector& b, double gamma,
                              LambdaSetting setting) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("lambda_settings: gamma must be positive");
  if (b.size() != A.rows()) throw DimensionError("lambda_settings: b does not match A");
  const double scale = gamma * (A.transpose() * b).lpNorm<Eigen::Infinity>();
  PenaltyParams out;
  if (setting == LambdaSetting::S1) {
    out.lambda1 = 0.5 * scale;
    out.lambda2 = 0.5 * scale;
  } else {
    out.lambda1 = 0.8 * scale;
    out.lambda2 = 0.2 * scale;
  }
  return out;
}

}  // namespace cssl
