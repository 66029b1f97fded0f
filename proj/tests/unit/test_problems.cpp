#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cssl/error.hpp"
#include "cssl/problems.hpp"

using namespace cssl;

namespace {

GeneratorSpec small_spec(Family f, std::uint64_t seed = 7) {
  GeneratorSpec s;
  s.family = f;
  s.m = 12;
  s.n = 80;
  s.m_eq = 3;
  s.m_ineq = 4;
  s.groups = 16;
  s.seed = seed;
  return s;
}

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST(Generator, FamilyThreeIsSingleSumRow) {
  const Problem p = generate(small_spec(Family::III));
  ASSERT_EQ(p.m_eq(), 1);
  EXPECT_EQ(p.m_ineq(), 0);
  const Matrix BE(p.B_E());
  EXPECT_EQ(BE, Matrix::Ones(1, 80));
  EXPECT_EQ(p.c_E(), Vector::Zero(1));
}

TEST(Generator, FamilyTwoHasNoInequalities) {
  const Problem p = generate(small_spec(Family::II));
  EXPECT_EQ(p.m_eq(), 3);
  EXPECT_EQ(p.m_ineq(), 0);
}

TEST(Generator, SameSeedIsBitIdentical) {
  Vector t1, t2;
  const Problem a = generate(small_spec(Family::I, 42), &t1);
  const Problem b = generate(small_spec(Family::I, 42), &t2);
  EXPECT_TRUE(same_bits(Matrix(a.A()).reshaped(), Matrix(b.A()).reshaped()));
  EXPECT_TRUE(same_bits(a.b(), b.b()));
  EXPECT_TRUE(same_bits(t1, t2));
  EXPECT_EQ(a.name(), b.name());
  const Problem c = generate(small_spec(Family::I, 43));
  EXPECT_FALSE(same_bits(a.b(), c.b()));
}

TEST(Generator, ConstraintRowsSelectWholeGroups) {
  const Problem p = generate(small_spec(Family::I));
  ASSERT_EQ(p.m_eq(), 3);
  ASSERT_EQ(p.m_ineq(), 4);
  for (const SparseMatrix* B : {&p.B_E(), &p.B_I()}) {
    const Matrix D(*B);
    for (Index r = 0; r < D.rows(); ++r) {
      Index touched = 0;
      for (const auto& g : p.groups().groups()) {
        const double first = D(r, g.front());
        for (Index i : g) {
          EXPECT_TRUE(D(r, i) == 0.0 || D(r, i) == 1.0);
          EXPECT_EQ(D(r, i), first);
        }
        if (first == 1.0) ++touched;
      }
      EXPECT_EQ(touched, 2);
    }
  }
  EXPECT_EQ(p.c_E().norm(), 0.0);
  EXPECT_EQ(p.c_I().norm(), 0.0);
}

TEST(Generator, PlantedSignalShape) {
  Vector truth;
  const Problem p = generate(small_spec(Family::I), &truth);
  Index active = 0;
  for (const auto& g : p.groups().groups()) {
    Index nz = 0;
    for (Index i : g) nz += truth[i] != 0.0;
    if (nz > 0) {
      ++active;
      EXPECT_EQ(nz, 1);  // ceil(0.2 * 5)
    }
  }
  EXPECT_EQ(active, 2);  // ceil(0.1 * 16)
}

TEST(Generator, RejectsBadSpec) {
  GeneratorSpec s = small_spec(Family::I);
  s.groups = 81;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = small_spec(Family::I);
  s.m = 0;
  EXPECT_THROW(generate(s), std::invalid_argument);
}

TEST(Libsvm, ParsesLine) {
  std::istringstream in("2.5 1:1.0 3:-2.0\n");
  const auto d = read_sparse_regression(in);
  ASSERT_EQ(d.A.rows(), 1);
  ASSERT_EQ(d.A.cols(), 3);
  EXPECT_EQ(d.b[0], 2.5);
  const Matrix A(d.A);
  EXPECT_EQ(A(0, 0), 1.0);
  EXPECT_EQ(A(0, 1), 0.0);
  EXPECT_EQ(A(0, 2), -2.0);
}

TEST(Libsvm, MinFeaturesWidens) {
  std::istringstream in("1 2:1\n-1 1:3\n");
  const auto d = read_sparse_regression(in, 5);
  EXPECT_EQ(d.A.rows(), 2);
  EXPECT_EQ(d.A.cols(), 5);
}

TEST(Libsvm, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(read_sparse_regression(empty), ParseError);
  for (const char* bad : {"1 0:1\n", "1 3:1 2:1\n", "x 1:1\n", "1 1:nan\n", "1 1-2\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_sparse_regression(in), ParseError) << bad;
  }
  std::istringstream second("1 1:1\n2 1:1 1:2\n");
  try {
    read_sparse_regression(second);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_sparse_regression("/nonexistent/cssl/data.txt"), IoError);
}

TEST(Libsvm, RoundTrip) {
  const Problem p = generate(small_spec(Family::I));
  std::stringstream io;
  write_sparse_regression(io, p.A(), p.b());
  const auto d = read_sparse_regression(io, p.n());
  EXPECT_TRUE(same_bits(Matrix(d.A).reshaped(), Matrix(p.A()).reshaped()));
  EXPECT_TRUE(same_bits(d.b, p.b()));
}

TEST(Libsvm, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "cssl_test_libsvm.txt";
  {
    std::ofstream out(path);
    out << "+1.5 2:4\n";
  }
  const auto d = load_sparse_regression(path.string());
  EXPECT_EQ(d.b[0], 1.5);
  EXPECT_EQ(Matrix(d.A)(0, 1), 4.0);
  std::filesystem::remove(path);
}

TEST(LambdaSettings, Examples) {
  SparseMatrix A = sparse_from_dense(Matrix::Identity(2, 2));
  const Vector b = Vector::Constant(2, 2.0);  // ||A^T b||_inf = 2
  const auto s1 = lambda_settings(A, b, 1.0, LambdaSetting::S1);
  EXPECT_DOUBLE_EQ(s1.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(s1.lambda2, 1.0);
  const auto s2 = lambda_settings(A, b, 1.0, LambdaSetting::S2);
  EXPECT_DOUBLE_EQ(s2.lambda1, 1.6);
  EXPECT_DOUBLE_EQ(s2.lambda2, 0.4);
  EXPECT_THROW(lambda_settings(A, b, 0.0, LambdaSetting::S1), std::invalid_argument);
  EXPECT_THROW(lambda_settings(A, b, -1.0, LambdaSetting::S2), std::invalid_argument);
  EXPECT_EQ(parse_setting("S2"), LambdaSetting::S2);
  EXPECT_THROW(parse_setting("S3"), std::invalid_argument);
}

TEST(GeneratorConfig, Parses) {
  std::istringstream in("# spec\nfamily = II\nm=30\n n = 90 # trailing\nJ = 9\nseed = 5\nnoise = 0.2\n");
  const auto s = parse_generator_config(in);
  EXPECT_EQ(s.family, Family::II);
  EXPECT_EQ(s.m, 30);
  EXPECT_EQ(s.n, 90);
  EXPECT_EQ(s.groups, 9);
  EXPECT_EQ(s.seed, 5u);
  EXPECT_DOUBLE_EQ(s.noise, 0.2);
}

TEST(GeneratorConfig, Errors) {
  const std::pair<const char*, std::size_t> cases[] = {
      {"m = 3\nbogus = 1\n", 2}, {"m 3\n", 1}, {"\n\nm = x\n", 3}, {"family = IV\n", 1},
      {"noise = inf\n", 1}};
  for (const auto& [text, line] : cases) {
    std::istringstream in(text);
    try {
      parse_generator_config(in);
      ADD_FAILURE() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  }
}
