#include "qseq/discrimination.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qseq {

namespace {

// A^(-1/2) on the support of A, eigenvalues clipped from below.
Matrix inverse_sqrt(const Matrix& a, double floor = 1e-300) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("inverse_sqrt: eigendecomposition failed");
  Eigen::VectorXd w = solver.eigenvalues().cwiseMax(floor);
  return solver.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() *
         solver.eigenvectors().adjoint();
}

std::vector<Matrix> pgm_start(const std::vector<Matrix>& weighted) {
  const long n = weighted[0].rows();
  Matrix s = Matrix::Zero(n, n);
  for (const Matrix& r : weighted) s += r;
  const Matrix si = inverse_sqrt(s, 1e-14);
  std::vector<Matrix> povm;
  povm.reserve(weighted.size());
  for (const Matrix& r : weighted) povm.push_back(si * r * si);
  // Fold any support deficiency of S into the first outcome so the POVM is
  // complete on the whole space.
  Matrix total = Matrix::Zero(n, n);
  for (const Matrix& m : povm) total += m;
  povm[0] += Matrix::Identity(n, n) - total;
  povm[0] = 0.5 * (povm[0] + povm[0].adjoint()).eval();
  return povm;
}

double primal_value(const std::vector<Matrix>& weighted,
                    const std::vector<Matrix>& povm) {
  double p = 0.0;
  for (size_t i = 0; i < weighted.size(); ++i)
    p += (weighted[i] * povm[i]).trace().real();
  return p;
}

// Symmetrized sum_i R_i M_i; trace equals the primal value.
Matrix dual_candidate(const std::vector<Matrix>& weighted,
                      const std::vector<Matrix>& povm) {
  const long n = weighted[0].rows();
  Matrix y = Matrix::Zero(n, n);
  for (size_t i = 0; i < weighted.size(); ++i) y += weighted[i] * povm[i];
  return 0.5 * (y + y.adjoint()).eval();
}

double worst_violation(const Matrix& y, const std::vector<Matrix>& weighted) {
  double viol = 0.0;
  for (const Matrix& r : weighted)
    viol = std::max(viol, std::max(0.0, -min_eigenvalue(y - r)));
  return viol;
}

}  // namespace

double helstrom_two_state(const StateEnsemble& e) {
  if (e.size() != 2)
    throw std::invalid_argument("helstrom_two_state needs exactly two states");
  const Matrix delta = e.item(0).prior * e.item(0).state.entries() -
                       e.item(1).prior * e.item(1).state.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(delta, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("helstrom_two_state: eigendecomposition failed");
  return 0.5 * (1.0 + solver.eigenvalues().cwiseAbs().sum());
}

PgResult solve_pg(const StateEnsemble& e, const PgOptions& options) {
  const long dim = e.structure().total_dim();
  const int n = e.size();

  std::vector<Matrix> weighted;
  weighted.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    weighted.push_back(e.item(i).prior * e.item(i).state.entries());

  auto finish = [&](std::vector<Matrix> povm, int iters, double gap_target) {
    const double p = primal_value(weighted, povm);
    Matrix y = dual_candidate(weighted, povm);
    const double viol = worst_violation(y, weighted);
    y += viol * Matrix::Identity(dim, dim);  // project to dual feasibility
    std::vector<HermitianOperator> ops;
    ops.reserve(povm.size());
    for (Matrix& m : povm)
      ops.emplace_back(e.structure(), e.item(0).state.ordering(), std::move(m));
    PgResult result{p,
                    Measurement(e.structure(), std::move(ops)),
                    HermitianOperator(e.structure(), e.item(0).state.ordering(),
                                      std::move(y)),
                    viol * static_cast<double>(dim),
                    iters,
                    viol * static_cast<double>(dim) <= gap_target};
    return result;
  };

  if (n == 1) {
    std::vector<Matrix> povm{Matrix::Identity(dim, dim)};
    return finish(std::move(povm), 0, options.tol);
  }

  std::vector<Matrix> povm = pgm_start(weighted);
  std::vector<Matrix> best = povm;
  double best_gap = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Matrix y = dual_candidate(weighted, povm);
    const double gap = worst_violation(y, weighted) * static_cast<double>(dim);
    if (gap < best_gap) {
      best_gap = gap;
      best = povm;
      if (gap <= options.tol) break;
    }

    Matrix lambda = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
      lambda += weighted[static_cast<size_t>(i)] * povm[static_cast<size_t>(i)] *
                weighted[static_cast<size_t>(i)];
    lambda = 0.5 * (lambda + lambda.adjoint()).eval();
    const Matrix li = inverse_sqrt(lambda);
    for (int i = 0; i < n; ++i) {
      Matrix m = li * weighted[static_cast<size_t>(i)] *
                 povm[static_cast<size_t>(i)] * weighted[static_cast<size_t>(i)] * li;
      povm[static_cast<size_t>(i)] = 0.5 * (m + m.adjoint()).eval();
    }
  }
  return finish(std::move(best), it, options.tol);
}

PgFactorization check_pg_factorization(const SequenceEnsemble& se,
                                       double tolerance,
                                       const PgOptions& options) {
  PgFactorization report;
  for (const StateEnsemble& step : se.factors()) {
    const PgResult r = solve_pg(step, options);
    report.step_values.push_back(r.value);
    report.product_value *= r.value;
    report.combined_gap += r.gap;
  }
  const PgResult seq = solve_pg(flatten(se), options);
  report.sequence_value = seq.value;
  report.combined_gap += seq.gap;
  report.difference = std::abs(report.sequence_value - report.product_value);
  report.within_tol = report.difference <= tolerance;
  return report;
}

}  // namespace qseq
