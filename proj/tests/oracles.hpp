// Test-only reference computations, written independently of the library's
// kernels so they can serve as oracles: plain digit arithmetic, quadruple
// loops, std::mt19937_64 randomness.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      for (long k = 0; k < b.rows(); ++k)
        for (long l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

// Step-major flat index -> party-major flat index for m parties of dimension
// d over L steps, by explicit digit juggling.
inline long step_to_party_index(long idx, int m, int d, int L) {
  std::vector<int> digit(static_cast<size_t>(m) * L);
  for (int pos = m * L - 1; pos >= 0; --pos) {
    digit[static_cast<size_t>(pos)] = static_cast<int>(idx % d);
    idx /= d;
  }
  // digit[l*m + k] belongs to step l, party k; party-major wants (k, l).
  long out = 0;
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < L; ++l) out = out * d + digit[static_cast<size_t>(l) * m + k];
  return out;
}

inline Matrix step_to_party(const Matrix& a, int m, int d, int L) {
  Matrix b = Matrix::Zero(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      b(step_to_party_index(i, m, d, L), step_to_party_index(j, m, d, L)) = a(i, j);
  return b;
}

// The all-equal-pair state (1/d^m) sum_{x,y} |x x><y y| on two step blocks
// of dimension d^m each (its party-major regroup is a product of per-party
// GHZ pairs).
inline Matrix sigma_step_major(int m, int d) {
  long dm = 1;
  for (int k = 0; k < m; ++k) dm *= d;
  Matrix s = Matrix::Zero(dm * dm, dm * dm);
  for (long x = 0; x < dm; ++x)
    for (long y = 0; y < dm; ++y) s(x * dm + x, y * dm + y) = 1.0 / static_cast<double>(dm);
  return s;
}

// --- randomness ----------------------------------------------------------------

inline Matrix random_hermitian(std::mt19937_64& rng, long n, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  return scale * 0.5 * (g + g.adjoint()).eval();
}

inline Matrix random_density(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline std::vector<double> random_priors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  std::vector<double> w(static_cast<size_t>(n));
  double sum = 0.0;
  for (double& x : w) sum += (x = uni(rng));
  for (double& x : w) x /= sum;
  return w;
}

inline Vector random_unit(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

// Random POVM with n outcomes on dimension dim: conjugate random PSD pieces
// by the inverse square root of their sum.
inline std::vector<Matrix> random_povm(std::mt19937_64& rng, long dim, int n) {
  std::vector<Matrix> parts;
  Matrix sum = Matrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    Matrix g(dim, dim);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long r = 0; r < dim; ++r)
      for (long c = 0; c < dim; ++c) g(r, c) = Cplx(gauss(rng), gauss(rng));
    parts.push_back(g * g.adjoint());
    sum += parts.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
  const Matrix isq = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().adjoint();
  for (Matrix& p : parts) p = (isq * p * isq).eval();
  return parts;
}

}  // namespace oracle
