#ifndef PGL_COMMON_HPP
#define PGL_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pgl {

using Vector = std::vector<double>;

// Execution policy for the data-parallel kernels. Serial is kept as the
// reference path; results must be identical under both policies.
enum class Exec { Serial, Parallel };

inline void parallel_for(std::size_t n, Exec exec, const auto &body) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

inline bool all_finite(const Vector &v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void require_finite(const Vector &v, const char *what) {
  if (!all_finite(v))
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

inline double dot(const Vector &a, const Vector &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vector &a) { return dot(a, a); }
inline double norm(const Vector &a) { return std::sqrt(norm_sq(a)); }

inline Vector sub(const Vector &a, const Vector &b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector add(const Vector &a, const Vector &b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector scaled(const Vector &a, double c) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// a + c*b
inline Vector axpy(const Vector &a, double c, const Vector &b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline double dist_between(const Vector &a, const Vector &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// splitmix64; used to derive independent per-index seeds so that sampling
// partitions are invariant to the worker count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    // 53-bit mantissa draw; avoids distribution-object state.
    double u = (eng_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform(0.0, 1.0);
    } while (u1 <= 0.0);
    u2 = uniform(0.0, 1.0);
    double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return m * std::cos(2.0 * M_PI * u2);
  }

  Vector unit_vector(int n) {
    Vector v(n);
    double s;
    do {
      for (auto &x : v) x = normal();
      s = norm(v);
    } while (s < 1e-12);
    for (auto &x : v) x /= s;
    return v;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

// Dense symmetric matrix, row-major. Small dimensions only.
struct Matrix {
  int n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double &at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Matrix identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const Vector &d) {
    Matrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
    return m;
  }

  bool symmetric(double tol = 1e-12) const {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    return true;
  }
};

inline Vector matvec(const Matrix &m, const Vector &x) {
  Vector r(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[i] += m.at(i, j) * x[j];
  return r;
}

// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
std::vector<double> symmetric_eigenvalues(Matrix m, int sweeps = 64);

inline int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pgl

#endif
