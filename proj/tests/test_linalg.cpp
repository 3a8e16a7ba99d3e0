#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "qesband/linalg.hpp"
#include "support.hpp"

using namespace qesband::linalg;
using qesband::test::uniform;

namespace {

Matrix random_matrix(std::size_t n, bool symmetric) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform(-1.0, 1.0);
  if (symmetric)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  return a;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  return e;
}

bool by_re_im(std::complex<double> x, std::complex<double> y) {
  return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
}

}  // namespace

TEST_CASE("general eigenvalues against Eigen") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 40u, 64u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix a = random_matrix(n, false);
      auto ours = eigenvalues_general(a);
      Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a), false);
      std::vector<std::complex<double>> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
      std::sort(ref.begin(), ref.end(), by_re_im);
      REQUIRE(ours.size() == n);
      // Greedy nearest matching; conjugate pairs share real parts.
      std::vector<bool> used(n, false);
      for (const auto& z : ours) {
        double best = INFINITY;
        std::size_t at = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (!used[j] && std::abs(z - ref[j]) < best) best = std::abs(z - ref[j]), at = j;
        used[at] = true;
        CHECK(best < 1e-10);
      }
    }
  }
}

TEST_CASE("general eigenvalues: structured cases") {
  Matrix rot(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  auto z = eigenvalues_general(rot);
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0].real()) < 1e-15);
  CHECK(std::abs(std::abs(z[0].imag()) - 1.0) < 1e-14);

  // Badly scaled but similar to diag(1, 2, 3): balancing must cope.
  Matrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  d(0, 1) = 1e8;
  d(1, 2) = 1e-8;
  d(0, 2) = 5.0;
  auto w = eigenvalues_general(d);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(w[i].real() - (i + 1)) < 1e-9);
    CHECK(w[i].imag() == 0.0);
  }

  // Jordan-like nilpotent block.
  Matrix j(4, 4);
  for (int i = 0; i < 3; ++i) j(i, i + 1) = 1.0;
  for (const auto& v : eigenvalues_general(j)) CHECK(std::abs(v) < 1e-3);
}

TEST_CASE("eigenvectors by inverse iteration") {
  const Matrix a = random_matrix(6, true);
  const auto values = eigenvalues_symmetric(a);
  const auto vecs = eigenvectors_real(a, values);
  REQUIRE(vecs.size() == values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      double s = -values[k] * vecs[k][i];
      for (std::size_t j = 0; j < 6; ++j) s += a(i, j) * vecs[k][j];
      res = std::max(res, std::abs(s));
      norm += vecs[k][i] * vecs[k][i];
    }
    CHECK(res < 1e-10);
    CHECK(std::abs(norm - 1.0) < 1e-12);
  }

  // Repeated eigenvalue: two independent vectors.
  Matrix d = Matrix::identity(3);
  d(2, 2) = 5.0;
  const std::vector<double> dv{1.0, 1.0, 5.0};
  const auto dvecs = eigenvectors_real(d, dv);
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += dvecs[0][i] * dvecs[1][i];
  CHECK(std::abs(dot) < 1e-12);
  CHECK(std::abs(dvecs[0][2]) < 1e-12);
  CHECK(std::abs(dvecs[1][2]) < 1e-12);
}

TEST_CASE("symmetric eigenvalues against Eigen") {
  for (std::size_t n : {1u, 2u, 7u, 33u, 129u, 257u}) {
    const Matrix a = random_matrix(n, true);
    const auto ours = eigenvalues_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), Eigen::EigenvaluesOnly);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ours[i] - es.eigenvalues()[i]) < 1e-11);
    CHECK(std::is_sorted(ours.begin(), ours.end()));
  }
}

TEST_CASE("tridiagonal: QL, Sturm bisection and inverse iteration agree") {
  const std::size_t n = 200;
  std::vector<double> diag(n), off(n - 1);
  for (auto& d : diag) d = uniform(-2.0, 2.0);
  for (auto& o : off) o = uniform(-1.0, 1.0);
  const auto all = tridiagonal_eigenvalues(diag, off);
  CHECK(sturm_count(diag, off, all.front() - 1e-9) == 0);
  CHECK(sturm_count(diag, off, all.back() + 1e-9) == n);
  const double cut = all[n / 3] + 1e-6;
  const auto below = tridiagonal_eigenvalues_below(diag, off, cut);
  REQUIRE(below.size() == n / 3 + 1);
  for (std::size_t i = 0; i < below.size(); ++i) CHECK(std::abs(below[i] - all[i]) < 1e-12);

  const auto v = tridiagonal_eigenvector(diag, off, all[5]);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = (diag[i] - all[5]) * v[i];
    if (i > 0) s += off[i - 1] * v[i - 1];
    if (i + 1 < n) s += off[i] * v[i + 1];
    res = std::max(res, std::abs(s));
  }
  CHECK(res < 1e-10);

  // Free-particle Laplacian: 2 - 2 cos(k pi / (n + 1)).
  std::vector<double> two(50, 2.0), minus_one(49, -1.0);
  const auto lap = tridiagonal_eigenvalues(two, minus_one);
  for (int k = 1; k <= 50; ++k) CHECK(std::abs(lap[k - 1] - (2 - 2 * std::cos(k * M_PI / 51))) < 1e-13);
}

TEST_CASE("least squares") {
  // Consistent overdetermined system recovers the exact solution.
  Matrix a(10, 4);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = std::pow(0.1 * i, j);
  const std::vector<double> x{1.0, -2.0, 0.5, 3.0};
  std::vector<double> rhs(10, 0.0);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 4; ++j) rhs[i] += a(i, j) * x[j];
  LeastSquares ls(a);
  const auto got = ls.solve(rhs);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(got[j] - x[j]) < 1e-11);

  // Against Eigen's QR on a noisy right-hand side.
  std::vector<double> noisy = rhs;
  for (auto& r : noisy) r += uniform(-0.1, 0.1);
  const auto ours = ls.solve(noisy);
  Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(noisy.data(), 10);
  const Eigen::VectorXd ref = to_eigen(a).colPivHouseholderQr().solve(b);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(ours[j] - ref[j]) < 1e-10);

  const double cond = ls.condition_estimate();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const double cond2 = svd.singularValues()(0) / svd.singularValues()(3);
  CHECK(cond >= 0.2 * cond2);
  CHECK(cond <= 20.0 * cond2);
}

TEST_CASE("matrix arithmetic") {
  Matrix a(2, 3), b(3, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = b(j, i) = static_cast<double>(i + 2 * j);
  const Matrix c = a * b;
  CHECK(c(0, 0) == 20.0);
  CHECK(c(1, 1) == 35.0);
  CHECK(c(0, 1) == 26.0);
  CHECK(max_abs_diff(c, c * 1.0) == 0.0);
  CHECK((c - c).max_abs() == 0.0);
  CHECK((c + c)(1, 0) == 52.0);
  CHECK(a.column(2) == std::vector<double>{4.0, 5.0});
}
