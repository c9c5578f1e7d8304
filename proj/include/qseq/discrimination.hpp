#pragma once

#include <optional>

#include "qseq/ensemble.hpp"

namespace qseq {

// Outcome of the guessing-probability solver. `value` is the primal success
// probability of `measurement`; `dual` is a feasible dual witness Y with
// Y - eta_i rho_i PSD for every i, so value <= p_G <= dual trace and
// gap = trace(Y) - value encloses the solver error.
struct PgResult {
  double value = 0.0;
  Measurement measurement;
  HermitianOperator dual;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PgOptions {
  double tol = tol::solver_default;
  int max_iterations = solver_iteration_cap;
};

// (1 + ||eta_1 rho_1 - eta_2 rho_2||_1)/2 via eigendecomposition. n = 2 only.
double helstrom_two_state(const StateEnsemble& e);

// Fixed-point measurement iteration (pretty-good-measurement start, Lambda
// = sum_i R_i M_i R_i updates) with a dual witness projected to feasibility
// each sweep. Deterministic for fixed inputs. Throws only on structural
// errors; non-convergence is reported through `converged` and the best gap.
PgResult solve_pg(const StateEnsemble& e, const PgOptions& options = {});

struct PgFactorization {
  double sequence_value = 0.0;       // p_G of the flattened ensemble
  double product_value = 1.0;        // prod_l p_G(E^l)
  double difference = 0.0;           // |sequence - product|
  double combined_gap = 0.0;         // sum of solver gaps entering the check
  std::vector<double> step_values;
  bool within_tol = false;
};

// Checks the step-product identity for minimum-error discrimination on the
// flattened sequence; `tolerance` bounds the accepted |difference|.
PgFactorization check_pg_factorization(const SequenceEnsemble& se,
                                       double tolerance,
                                       const PgOptions& options = {});

}  // namespace qseq
