#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qseq/discrimination.hpp>
#include <qseq/example_ensembles.hpp>

#include "oracles.hpp"

using namespace qseq;

namespace {

StateEnsemble random_ensemble(std::mt19937_64& rng, const PartyStructure& s,
                              int n) {
  const auto priors = oracle::random_priors(rng, n);
  std::vector<WeightedState> items;
  for (int i = 0; i < n; ++i)
    items.push_back({priors[static_cast<size_t>(i)],
                     HermitianOperator(s, Ordering::StepMajor,
                                       oracle::random_density(rng, s.total_dim()))});
  return StateEnsemble(s, std::move(items));
}

// Independent check of dual feasibility: Y - eta_i rho_i PSD for all i.
double dual_violation(const StateEnsemble& e, const HermitianOperator& y) {
  double worst = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    const Matrix diff =
        y.entries() - e.item(i).prior * e.item(i).state.entries();
    worst = std::min(worst, min_eigenvalue(diff));
  }
  return worst;
}

}  // namespace

TEST_CASE("helstrom closed form") {
  const PartyStructure s = PartyStructure::uniform(2, 2);
  const HermitianOperator g = ghz(2, 2);

  SUBCASE("identical states give the larger prior") {
    const StateEnsemble e(s, {{0.7, g}, {0.3, g}});
    CHECK(helstrom_two_state(e) == doctest::Approx(0.7).epsilon(1e-12));
  }

  SUBCASE("orthogonal pure states are perfectly distinguishable") {
    const StateEnsemble e(s, {{0.6, basis_product_projector(2, 2, 0)},
                              {0.4, basis_product_projector(2, 2, 1)}});
    CHECK(helstrom_two_state(e) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("first example family: weighted difference is the scaled primitive") {
    // eta_1 rho_1 - eta_2 rho_2 = (1 - d Phi)/(d + 3 d^m) with spectrum
    // {1-d, 1^(d^m-1)}, so the value is (2 d^m + d - 1)/(d + 3 d^m).
    for (auto [d, m] : {std::pair{2, 2}, {3, 2}, {2, 3}}) {
      const double dm = std::pow(d, m);
      const StateEnsemble e = example1_step_ensemble(d, m);

      const Matrix delta = e.item(0).prior * e.item(0).state.entries() -
                           e.item(1).prior * e.item(1).state.entries();
      Eigen::SelfAdjointEigenSolver<Matrix> es(delta, Eigen::EigenvaluesOnly);
      const double oracle_value =
          0.5 * (1.0 + es.eigenvalues().cwiseAbs().sum());

      const double closed = (2.0 * dm + d - 1.0) / (d + 3.0 * dm);
      CHECK(helstrom_two_state(e) == doctest::Approx(closed).epsilon(1e-12));
      CHECK(oracle_value == doctest::Approx(closed).epsilon(1e-12));
    }
    CHECK(helstrom_two_state(example1_step_ensemble(2, 2)) ==
          doctest::Approx(9.0 / 14.0).epsilon(1e-12));
  }

  SUBCASE("rejects n != 2") {
    const StateEnsemble e(s, {{1.0, g}});
    CHECK_THROWS_AS(helstrom_two_state(e), std::invalid_argument);
  }
}

TEST_CASE("solve_pg basics") {
  const PartyStructure s = PartyStructure::uniform(2, 2);

  SUBCASE("single state") {
    const StateEnsemble e(s, {{1.0, ghz(2, 2)}});
    const PgResult r = solve_pg(e);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.gap <= 1e-9);
    CHECK(r.measurement.size() == 1);
  }

  SUBCASE("commuting diagonal ensembles match the assignment brute force") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 3;
      std::vector<WeightedState> items;
      const auto priors = oracle::random_priors(rng, n);
      std::vector<Eigen::VectorXd> diags;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x(4);
        std::uniform_real_distribution<double> uni(0.01, 1.0);
        for (int j = 0; j < 4; ++j) x(j) = uni(rng);
        x /= x.sum();
        diags.push_back(x);
        items.push_back({priors[static_cast<size_t>(i)],
                         HermitianOperator(s, Ordering::StepMajor,
                                           x.cast<oracle::Cplx>().asDiagonal())});
      }
      // Deterministic diagonal assignments are optimal for commuting states.
      double brute = 0.0;
      for (int j = 0; j < 4; ++j) {
        double best = 0.0;
        for (int i = 0; i < n; ++i)
          best = std::max(best, priors[static_cast<size_t>(i)] * diags[static_cast<size_t>(i)](j));
        brute += best;
      }
      const PgResult r = solve_pg(StateEnsemble(s, items), {1e-9, 20000});
      CHECK(r.value == doctest::Approx(brute).epsilon(1e-7));
    }
  }

  SUBCASE("agrees with helstrom on random two-state ensembles") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 10; ++trial) {
      const StateEnsemble e = random_ensemble(rng, s, 2);
      const PgResult r = solve_pg(e, {1e-9, 20000});
      CHECK(std::abs(r.value - helstrom_two_state(e)) <= 1e-8);
    }
  }

  SUBCASE("second example family: strictly better globally than locally") {
    const StateEnsemble e = example2_step_ensemble(2, 2);
    const PgResult r = solve_pg(e, {1e-8, 20000});
    CHECK(r.gap <= 1e-6);
    CHECK(r.value > 2.0 / 3.0 + 1e-4);
  }
}

TEST_CASE("solve_pg invariants") {
  const PartyStructure s = PartyStructure::uniform(2, 2);
  std::mt19937_64 rng(107);

  SUBCASE("weak duality and measurement validity") {
    for (int trial = 0; trial < 5; ++trial) {
      const StateEnsemble e = random_ensemble(rng, s, 3);
      const PgResult r = solve_pg(e);
      CHECK(r.value <= r.dual.trace() + 1e-10);
      CHECK(dual_violation(e, r.dual) >= -tol::dual_psd_floor);
      CHECK_NOTHROW(Measurement(e.structure(), r.measurement.operators()));
      // primal value recomputed from the measurement
      CHECK(success_probability(e, r.measurement) ==
            doctest::Approx(r.value).epsilon(1e-12));
      // value dominates the trivial largest-prior guess up to the gap
      CHECK(r.value + r.gap + 1e-9 >= max_prior(e).first);
      CHECK(r.value <= 1.0 + 1e-9);
    }
  }

  SUBCASE("mixing toward the average never raises the value") {
    const int n = 3;
    std::vector<WeightedState> base;
    for (int i = 0; i < n; ++i)
      base.push_back({1.0 / n, HermitianOperator(s, Ordering::StepMajor,
                                                 oracle::random_density(rng, 4))});
    Matrix avg = Matrix::Zero(4, 4);
    for (const WeightedState& ws : base) avg += ws.state.entries() / n;

    const double p0 = solve_pg(StateEnsemble(s, base), {1e-9, 20000}).value;
    for (double mix : {0.25, 0.5, 1.0}) {
      std::vector<WeightedState> mixed;
      for (const WeightedState& ws : base)
        mixed.push_back(
            {ws.prior, HermitianOperator(s, Ordering::StepMajor,
                                         (1 - mix) * ws.state.entries() + mix * avg)});
      const double p = solve_pg(StateEnsemble(s, mixed), {1e-9, 20000}).value;
      CHECK(p <= p0 + 1e-8);
      if (mix == 1.0) CHECK(p == doctest::Approx(1.0 / n).epsilon(1e-8));
    }
  }

  SUBCASE("deterministic for fixed inputs") {
    const StateEnsemble e = random_ensemble(rng, s, 3);
    const PgResult a = solve_pg(e);
    const PgResult b = solve_pg(e);
    CHECK(a.value == b.value);
    CHECK(a.gap == b.gap);
    CHECK((a.dual.entries() - b.dual.entries()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pg factorization across sequence steps") {
  const PartyStructure s = PartyStructure::uniform(2, 2);
  std::mt19937_64 rng(109);

  SUBCASE("single step has zero difference") {
    const SequenceEnsemble se({random_ensemble(rng, s, 2)});
    const PgFactorization f = check_pg_factorization(se, 1e-6);
    CHECK(f.difference == 0.0);
    CHECK(f.within_tol);
  }

  SUBCASE("two random two-state steps") {
    for (int trial = 0; trial < 3; ++trial) {
      const SequenceEnsemble se(
          {random_ensemble(rng, s, 2), random_ensemble(rng, s, 2)});
      const PgFactorization f = check_pg_factorization(se, 1e-6, {1e-9, 20000});
      CHECK(f.within_tol);
    }
  }

  SUBCASE("first example family squares its step value") {
    const StateEnsemble e = example1_step_ensemble(2, 2);
    const SequenceEnsemble se({e, e});
    const PgFactorization f = check_pg_factorization(se, 1e-6, {1e-9, 20000});
    CHECK(f.within_tol);
    CHECK(f.sequence_value ==
          doctest::Approx(std::pow(9.0 / 14.0, 2)).epsilon(1e-6));
  }
}
