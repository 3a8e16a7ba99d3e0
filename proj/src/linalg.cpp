#include "qesband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qesband/errors.hpp"

namespace qesband::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double magnitude, double s) { return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

// Radix-2 diagonal similarity scaling; leaves the spectrum exact.
void balance(Matrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder similarity reduction to upper Hessenberg form.
void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) continue;
    const double alpha = -sign_of(norm, a(k + 1, k));
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    // H A
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // (H A) H
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
std::vector<std::complex<double>> hessenberg_qr(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  auto A = [&a](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(A(l, l - 1)) <= kEps * s) {
          A(l, l - 1) = 0.0;
          break;
        }
      }
      double x = A(nn, nn);
      if (l == nn) {
        w[static_cast<std::size_t>(nn--)] = x + t;
      } else {
        double y = A(nn - 1, nn - 1);
        double ww = A(nn, nn - 1) * A(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + ww;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - ww / z;
          } else {
            w[static_cast<std::size_t>(nn)] = {x + p, -z};
            w[static_cast<std::size_t>(nn - 1)] = std::conj(w[static_cast<std::size_t>(nn)]);
          }
          nn -= 2;
        } else {
          if (its == 60) throw ConsistencyError("Hessenberg QR failed to converge");
          if (its == 10 || its == 20 || its == 40) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) A(i, i) -= x;
            const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
            y = x = 0.75 * s;
            ww = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = A(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - ww) / A(m + 1, m) + A(m, m + 1);
            q = A(m + 1, m + 1) - z - r - s;
            r = A(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
            if (u <= kEps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            A(i + 2, i) = 0.0;
            if (i != m) A(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = A(k, k - 1);
              q = A(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = A(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) A(k, k - 1) = -A(k, k - 1);
            } else {
              A(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = A(k, j) + q * A(k + 1, j);
              if (k + 1 != nn) {
                p += r * A(k + 2, j);
                A(k + 2, j) -= p * z;
              }
              A(k + 1, j) -= p * y;
              A(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * A(i, k) + y * A(i, k + 1);
              if (k + 1 != nn) {
                p += z * A(i, k + 2);
                A(i, k + 2) -= p * r;
              }
              A(i, k + 1) -= p * q;
              A(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return w;
}

// Dense LU with partial pivoting, in place. Tiny pivots are replaced so
// that inverse iteration at an exact eigenvalue stays finite.
struct DenseLu {
  Matrix lu;
  std::vector<std::size_t> perm;

  explicit DenseLu(Matrix a) : lu(std::move(a)), perm(lu.rows()) {
    const std::size_t n = lu.rows();
    const double floor = kEps * std::max(1.0, lu.max_abs());
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
        std::swap(perm[k], perm[piv]);
      }
      if (std::abs(lu(k, k)) < floor) lu(k, k) = lu(k, k) < 0.0 ? -floor : floor;
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu(i, k) / lu(k, k);
        lu(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      }
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = lu.rows();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] /= lu(i, i);
    }
    return x;
  }
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s = std::hypot(s, e);
  return s;
}

void normalize(std::vector<double>& v) {
  const double n = norm2(v);
  if (n > 0.0)
    for (double& e : v) e /= n;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& q : basis) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * q[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

Matrix Matrix::operator*(double s) const {
  Matrix out = *this;
  for (double& e : out.data_) e *= s;
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double e : data_) m = std::max(m, std::abs(e));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

std::vector<std::complex<double>> eigenvalues_general(Matrix a) {
  if (a.rows() != a.cols()) throw DomainError("eigenvalues_general: matrix must be square");
  if (a.rows() == 0) return {};
  balance(a);
  to_hessenberg(a);
  auto w = hessenberg_qr(a);
  std::sort(w.begin(), w.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return w;
}

std::vector<std::vector<double>> eigenvectors_real(const Matrix& a, std::span<const double> values,
                                                   double cluster_tol) {
  const std::size_t n = a.rows();
  std::vector<std::vector<double>> out;
  out.reserve(values.size());
  std::vector<std::vector<double>> cluster;
  double cluster_anchor = 0.0;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    const double lambda = values[idx];
    if (cluster.empty() || std::abs(lambda - cluster_anchor) > cluster_tol) {
      cluster.clear();
      cluster_anchor = lambda;
    }
    Matrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    const DenseLu lu(std::move(shifted));
    // Distinct deterministic starts for each member of a cluster.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = 1.0 + 0.1 * std::sin(1.7 * static_cast<double>(i + 1) * static_cast<double>(cluster.size() + 1));
    orthogonalize(v, cluster);
    normalize(v);
    for (int it = 0; it < 4; ++it) {
      v = lu.solve(v);
      orthogonalize(v, cluster);
      normalize(v);
    }
    cluster.push_back(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> off) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off[i];
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw ConsistencyError("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> eigenvalues_symmetric(Matrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw DomainError("eigenvalues_symmetric: matrix must be square");
  std::vector<double> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) continue;
    const double alpha = -sign_of(norm, a(k + 1, k));
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= alpha;
      vv += v[i] * v[i];
    }
    const double beta = 2.0 / vv;
    // A <- H A H on the trailing block: A -= v w^T + w v^T
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = beta * s;
    }
    double pv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) pv += p[i] * v[i];
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - 0.5 * beta * pv * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= v[i] * w[j] + w[i] * v[j];
    a(k + 1, k) = a(k, k + 1) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
  }
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i);
  return tridiagonal_eigenvalues(std::move(d), std::move(e));
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : coupling / q);
    if (q == 0.0) q = -kEps * (std::abs(diag[i]) + std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiagonal_eigenvalues_below(std::span<const double> diag,
                                                  std::span<const double> off, double upper) {
  const std::size_t n = diag.size();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
  }
  const std::size_t count = sturm_count(diag, off, upper);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double a = lo;
    double b = upper;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (b - a <= 4.0 * kEps * std::max(1.0, std::abs(mid))) break;
      if (sturm_count(diag, off, mid) > k)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

std::vector<double> tridiagonal_eigenvector(std::span<const double> diag, std::span<const double> off,
                                            double lambda) {
  const std::size_t n = diag.size();
  if (n == 1) return {1.0};
  // Tridiagonal LU with partial pivoting (two superdiagonals after swaps).
  std::vector<double> dl(off.begin(), off.end()), du(off.begin(), off.end()), du2(n, 0.0), d(n);
  std::vector<bool> swapped(n, false);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = diag[i] - lambda;
    scale = std::max(scale, std::abs(diag[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0));
  }
  const double floor = kEps * std::max(scale, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = floor;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  for (double& p : d)
    if (std::abs(p) < floor) p = p < 0.0 ? -floor : floor;

  auto solve = [&](std::vector<double> b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    return b;
  };
  std::vector<double> v(n, 1.0);
  for (int it = 0; it < 3; ++it) {
    v = solve(std::move(v));
    normalize(v);
  }
  return v;
}

LeastSquares::LeastSquares(Matrix a) : qr_(std::move(a)) {
  const std::size_t m = qr_.rows();
  const std::size_t n = qr_.cols();
  if (m < n) throw DomainError("LeastSquares: need rows >= cols");
  beta_.assign(n, 0.0);
  rdiag_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, qr_(i, k));
    if (norm == 0.0) continue;
    const double alpha = -sign_of(norm, qr_(k, k));
    qr_(k, k) -= alpha;
    double vv = 0.0;
    for (std::size_t i = k; i < m; ++i) vv += qr_(i, k) * qr_(i, k);
    beta_[k] = 2.0 / vv;
    rdiag_[k] = alpha;
    for (std::size_t j = k + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += qr_(i, k) * qr_(i, j);
      s *= beta_[k];
      for (std::size_t i = k; i < m; ++i) qr_(i, j) -= s * qr_(i, k);
    }
  }
}

std::vector<double> LeastSquares::solve(std::span<const double> rhs) const {
  const std::size_t m = qr_.rows();
  const std::size_t n = qr_.cols();
  std::vector<double> b(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += qr_(i, k) * b[i];
    s *= beta_[k];
    for (std::size_t i = k; i < m; ++i) b[i] -= s * qr_(i, k);
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= qr_(i, j) * x[j];
    x[i] = rdiag_[i] != 0.0 ? s / rdiag_[i] : 0.0;
  }
  return x;
}

double LeastSquares::condition_estimate() const {
  const std::size_t n = qr_.cols();
  for (double r : rdiag_)
    if (r == 0.0) return std::numeric_limits<double>::infinity();
  auto r_at = [&](std::size_t i, std::size_t j) { return i == j ? rdiag_[i] : qr_(i, j); };
  double norm_r = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i <= j; ++i) s += std::abs(r_at(i, j));
    norm_r = std::max(norm_r, s);
  }
  // columns of R^{-1} by back substitution
  double norm_inv = 0.0;
  std::vector<double> x(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = c + 1; i-- > 0;) {
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t j = i + 1; j <= c; ++j) s -= r_at(i, j) * x[j];
      x[i] = s / rdiag_[i];
    }
    double col = 0.0;
    for (double e : x) col += std::abs(e);
    norm_inv = std::max(norm_inv, col);
  }
  return norm_r * norm_inv;
}

}  // namespace qesband::linalg
