// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Tolerances are pinned here and must not be loosened.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <vector>

#include <qseq/example_ensembles.hpp>
#include <qseq/factorize.hpp>

#include "oracles.hpp"

using namespace qseq;

namespace {

struct Criterion {
  int id;
  const char* description;
  bool pass = true;

  void require(bool ok) { pass = pass && ok; }
  ~Criterion() {
    std::printf("ACCEPTANCE %2d %s  %s\n", id, pass ? "PASS" : "FAIL", description);
    std::fflush(stdout);
  }
};

// Global log of (operator, verdict) pairs produced below; criterion 11
// audits every one of them from scratch.
std::vector<std::pair<HermitianOperator, ConeVerdict>>& audit_log() {
  static std::vector<std::pair<HermitianOperator, ConeVerdict>> log;
  return log;
}

ConeVerdict analyzed(const HermitianOperator& op,
                     const ConeAnalysisParams& params = {}) {
  ConeVerdict v = analyze_block_positivity(op, params);
  audit_log().emplace_back(op, v);
  return v;
}

StateEnsemble random_two_state(std::mt19937_64& rng) {
  const PartyStructure s = PartyStructure::uniform(2, 2);
  const auto priors = oracle::random_priors(rng, 2);
  std::vector<WeightedState> items;
  for (int i = 0; i < 2; ++i)
    items.push_back({priors[static_cast<size_t>(i)],
                     HermitianOperator(s, Ordering::StepMajor,
                                       oracle::random_density(rng, 4))});
  return StateEnsemble(s, std::move(items));
}

std::vector<int> inverse_perm(const std::vector<int>& sigma) {
  std::vector<int> inv(sigma.size());
  for (size_t s = 0; s < sigma.size(); ++s)
    inv[static_cast<size_t>(sigma[s])] = static_cast<int>(s);
  return inv;
}

double ipow(double b, int e) {
  double v = 1;
  for (int i = 0; i < e; ++i) v *= b;
  return v;
}

}  // namespace

TEST_CASE("criterion 1: product-state traces equal 1/d^m") {
  Criterion c{1, "GHZ-pair traces equal 1/d^m on the (m,d) grid"};
  for (int m : {2, 3})
    for (int d : {2, 3}) {
      const double expect = 1.0 / ipow(d, m);
      const ProductPureState sigma = example1_sigma(d, m);
      const HermitianOperator phi = ghz(m, d);
      const HermitianOperator one = identity(PartyStructure::uniform(m, d));
      for (const auto& [a, b] : {std::pair{phi, one}, {one, phi}, {phi, phi}}) {
        const double value =
            expectation(regroup_to_party_major(tensor(a, b)), sigma);
        c.require(std::abs(value - expect) <= 1e-9);
      }
    }
  CHECK(c.pass);
}

TEST_CASE("criterion 2: witness value 2 - d - 1/d^(m-1), strictly negative") {
  Criterion c{2, "witness evaluation matches the closed form and is negative"};
  for (int m : {2, 3})
    for (int d : {2, 3}) {
      const double expect = 2.0 - d - 1.0 / ipow(d, m - 1);
      const double value = expectation(
          regroup_to_party_major(example1_sequence_operator(d, m)),
          example1_sigma(d, m));
      c.require(std::abs(value - expect) <= 1e-9);
      c.require(value < 0.0);
    }
  CHECK(c.pass);
}

TEST_CASE("criterion 3: see-saw refutation and non-factorizable report") {
  Criterion c{3, "see-saw finds the violation; report says not factorizable"};
  const SeesawResult ss = seesaw_min_product(
      regroup_to_party_major(example1_sequence_operator(2, 2)),
      {32, default_sweeps, default_seed, tol::seesaw_improvement});
  c.require(ss.min_value <= -0.5 + 1e-6);

  const ConeVerdict v = analyzed(example1_sequence_operator(2, 2));
  c.require(v.status == ConeStatus::Refuted);

  const StateEnsemble step = example1_step_ensemble(2, 2);
  const FactorizabilityReport report =
      assemble_report(SequenceEnsemble({step, step}));
  c.require(report.factorizable == Factorizable::No);
  c.require(report.audit_failures.empty());
  CHECK(c.pass);
}

TEST_CASE("criterion 4: largest-prior certification via the registered primitive") {
  Criterion c{4, "step p_L = p_SEP = 2d^m/(d+3d^m) via the primitive"};
  for (int m : {2, 3})
    for (int d : {2, 3}) {
      const double dm = ipow(d, m);
      const TheoremOneResult r = check_theorem1(example1_step_ensemble(d, m), 0);
      for (size_t i = 0; i < r.evidence.size(); ++i)
        audit_log().emplace_back(
            HermitianOperator(
                PartyStructure::uniform(m, d), Ordering::StepMajor,
                example1_prior(d, m, 1) * example1_state(d, m, 1).entries() -
                    example1_prior(d, m, static_cast<int>(i) + 1) *
                        example1_state(d, m, static_cast<int>(i) + 1).entries()),
            r.evidence[i]);
      c.require(r.verdict == Verdict::Holds);
      c.require(std::abs(r.certified_pl - 2.0 * dm / (d + 3.0 * dm)) <= 1e-12);
      // the i=2 difference must be certified by the primitive registry
      c.require(r.evidence[1].certificate.has_value() &&
                r.evidence[1].certificate->terms[0].bp_provenance.kind ==
                    BlockPositiveProvenance::Kind::GhzPrimitive);
    }
  c.require(std::abs(check_theorem1(example1_step_ensemble(2, 2), 0).certified_pl -
                     4.0 / 7.0) <= 1e-12);
  CHECK(c.pass);
}

TEST_CASE("criterion 5: solver agrees with the two-state closed form") {
  Criterion c{5, "solver vs trace-norm value on 50 random pairs + the example"};
  std::mt19937_64 rng(20240);
  const PgOptions tight{1e-9, 20000};
  for (int trial = 0; trial < 50; ++trial) {
    const StateEnsemble e = random_two_state(rng);
    const double closed = helstrom_two_state(e);
    const PgResult r = solve_pg(e, tight);
    c.require(std::abs(r.value - closed) <= 1e-8);
  }
  const StateEnsemble e1 = example1_step_ensemble(2, 2);
  const double closed = helstrom_two_state(e1);
  const PgResult r = solve_pg(e1, tight);
  c.require(std::abs(closed - 9.0 / 14.0) <= 1e-8);
  c.require(std::abs(r.value - 9.0 / 14.0) <= 1e-8);
  CHECK(c.pass);
}

TEST_CASE("criterion 6: guessing probability factorizes across steps") {
  Criterion c{6, "p_G of the sequence equals the per-step product"};
  std::mt19937_64 rng(31337);
  const PartyStructure s = PartyStructure::uniform(2, 2);
  std::uniform_int_distribution<int> pick_n(2, 3);
  const PgOptions tight{1e-9, 20000};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<StateEnsemble> steps;
    for (int l = 0; l < 2; ++l) {
      const int n = pick_n(rng);
      const auto priors = oracle::random_priors(rng, n);
      std::vector<WeightedState> items;
      for (int i = 0; i < n; ++i)
        items.push_back({priors[static_cast<size_t>(i)],
                         HermitianOperator(s, Ordering::StepMajor,
                                           oracle::random_density(rng, 4))});
      steps.emplace_back(s, std::move(items));
    }
    const PgFactorization f =
        check_pg_factorization(SequenceEnsemble(std::move(steps)), 1e-6, tight);
    c.require(f.difference <= 1e-6);
  }

  const StateEnsemble e1 = example1_step_ensemble(2, 2);
  const PgFactorization f =
      check_pg_factorization(SequenceEnsemble({e1, e1}), 1e-6, tight);
  c.require(f.difference <= 1e-6);
  c.require(std::abs(f.sequence_value - ipow(9.0 / 14.0, 2)) <= 1e-6);
  CHECK(c.pass);
}

TEST_CASE("criterion 7: separable-optimality certificates on the size grid") {
  Criterion c{7, "certificates accepted; trace, slackness, reconstructions"};
  for (auto [d, m, L] :
       {std::tuple{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 3, 2}}) {
    const double dm = ipow(d, m);
    const StateEnsemble step = example2_step_ensemble(d, m);
    const SequenceEnsemble se(
        std::vector<StateEnsemble>(static_cast<size_t>(L), step));
    const SeparableCertificate cert = build_example2_certificate(d, m, L);
    const TheoremFourResult r = verify_theorem4_certificate(se, cert);
    c.require(r.verdict == Verdict::Holds);
    c.require(std::abs(r.trace_h - ipow(dm / (dm + d), L)) <= 1e-9);
    c.require(r.max_slack <= 1e-12);

    // Direct reconstruction check for every index: sum the canonical terms,
    // undo the sorting permutation, compare with H - eta_c rho_c.
    const auto indices = enumerate_indices(se.counts());
    double worst = 0.0;
    for (size_t i = 0; i < indices.size(); ++i) {
      const auto& ev = cert.entries[i];
      const DecompositionCertificate& dc =
          cert.canonical[static_cast<size_t>(ev.canonical_id)];
      Matrix sum = Matrix::Zero(cert.H.dim(), cert.H.dim());
      for (const DecompositionTerm& term : dc.terms) {
        Matrix prod = Matrix::Identity(1, 1);
        if (term.block_positive)
          prod = oracle::kron(prod, term.block_positive->entries());
        for (const HermitianOperator& f : term.separable)
          prod = oracle::kron(prod, f.entries());
        sum += prod;
      }
      const HermitianOperator reconstructed = permute_steps(
          HermitianOperator(cert.H.structure(), Ordering::StepMajor, sum),
          inverse_perm(ev.sort_perm));
      const WeightedState item = sequence_item(se, indices[i]);
      const Matrix target = cert.H.entries() - item.prior * item.state.entries();
      worst = std::max(
          worst, (reconstructed.entries() - target).cwiseAbs().maxCoeff());
    }
    c.require(worst <= 1e-9);
  }
  CHECK(c.pass);
}

TEST_CASE("criterion 8: local optimum, max prior, strict global advantage") {
  Criterion c{8, "p_L, max prior, p_G margin and the strict sandwich"};
  for (auto [d, m, L] :
       {std::tuple{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 3, 2}}) {
    const double dm = ipow(d, m);
    const StateEnsemble step = example2_step_ensemble(d, m);

    c.require(std::abs(success_probability(step, example2_measurement(d, m)) -
                       dm / (dm + d)) <= 1e-12);
    c.require(std::abs(max_prior(step).first - (dm - d) / (dm + d)) <= 1e-12);

    const PgResult pg = solve_pg(step, {1e-8, 20000});
    c.require(pg.gap <= 1e-6);
    c.require(pg.value > dm / (dm + d) + 1e-4);

    const SequenceEnsemble se(
        std::vector<StateEnsemble>(static_cast<size_t>(L), step));
    const FactorizabilityReport report = assemble_report(se);
    c.require(report.factorizable == Factorizable::Yes);
    c.require(report.corollary2.has_value() &&
              report.corollary2->verdict == Verdict::Holds);
    c.require(report.audit_failures.empty());
  }
  CHECK(c.pass);
}

TEST_CASE("criterion 9: telescoping identity, 100 random instances") {
  Criterion c{9, "telescoping sum exact to 1e-12 for K <= 4"};
  std::mt19937_64 rng(4242);
  const PartyStructure s = PartyStructure::uniform(2, 2);
  std::uniform_int_distribution<int> klen(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = klen(rng);
    std::vector<HermitianOperator> a, b;
    for (int l = 0; l < K; ++l) {
      a.emplace_back(s, Ordering::StepMajor, oracle::random_hermitian(rng, 4));
      b.emplace_back(s, Ordering::StepMajor, oracle::random_hermitian(rng, 4));
    }
    Matrix ta = Matrix::Identity(1, 1), tb = Matrix::Identity(1, 1);
    for (int l = 0; l < K; ++l) {
      ta = oracle::kron(ta, a[static_cast<size_t>(l)].entries());
      tb = oracle::kron(tb, b[static_cast<size_t>(l)].entries());
    }
    Matrix sum = Matrix::Zero(ta.rows(), ta.cols());
    for (const auto& factors : telescope(a, b)) {
      Matrix prod = Matrix::Identity(1, 1);
      for (const HermitianOperator& f : factors)
        prod = oracle::kron(prod, f.entries());
      sum += prod;
    }
    c.require((sum - (ta - tb)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK(c.pass);
}

TEST_CASE("criterion 10: uniform identical ensembles and their perturbations") {
  Criterion c{10, "p_L = 1/n for identical states; perturbation flips it"};
  std::mt19937_64 rng(555);
  const PartyStructure s = PartyStructure::uniform(2, 2);
  std::uniform_int_distribution<int> pick_n(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = pick_n(rng);
    const HermitianOperator rho(s, Ordering::StepMajor,
                                oracle::random_density(rng, 4));
    std::vector<WeightedState> items(static_cast<size_t>(n), {1.0 / n, rho});
    const CorollaryOneResult r = check_corollary1(StateEnsemble(s, items));
    c.require(r.verdict == Verdict::Holds);
    c.require(std::abs(r.pl - 1.0 / n) <= 1e-15);

    // Perturb one entry of one state by 1e-3 (keeping a valid density
    // matrix): the verdict must flip.
    Matrix bumped = rho.entries();
    bumped(0, 0) += 1e-3;
    bumped /= bumped.trace().real();
    items[0].state = HermitianOperator(s, Ordering::StepMajor, bumped);
    const CorollaryOneResult flipped = check_corollary1(StateEnsemble(s, items));
    c.require(flipped.verdict == Verdict::Fails);
  }
  CHECK(c.pass);
}

TEST_CASE("criterion 11: soundness audit over every verdict above") {
  Criterion c{11, "refutations re-evaluate negative; none coexists with PSD"};
  c.require(!audit_log().empty());
  for (const auto& [op, verdict] : audit_log()) {
    const VerifyResult vr = audit_verdict(op, verdict);
    c.require(vr.ok);
    if (verdict.status == ConeStatus::Refuted) {
      c.require(certify_psd(op).status != ConeStatus::CertifiedBlockPositive);
      const HermitianOperator pm = op.ordering() == Ordering::PartyMajor
                                       ? op
                                       : regroup_to_party_major(op);
      c.require(expectation(pm, verdict.witness->state) < 0.0);
    }
  }
  CHECK(c.pass);
}
