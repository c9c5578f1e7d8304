#include "qseq/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qseq/example_ensembles.hpp"

namespace qseq {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    default: return "Undecided";
  }
}

std::string to_string(Factorizable f) {
  switch (f) {
    case Factorizable::Yes: return "Yes";
    case Factorizable::No: return "No";
    default: return "Undecided";
  }
}

namespace {

std::string index_string(const SequenceIndex& c) {
  std::ostringstream os;
  os << "(";
  for (size_t l = 0; l < c.size(); ++l) os << (l ? "," : "") << c[l] + 1;
  os << ")";
  return os.str();
}

// All-equal operators within tolerance.
bool states_identical(const StateEnsemble& e, double eps) {
  for (int i = 1; i < e.size(); ++i)
    if (max_abs_difference(e.item(i).state, e.item(0).state) > eps) return false;
  return true;
}

}  // namespace

TheoremOneResult check_theorem1(const StateEnsemble& e, int x,
                                const ConeAnalysisParams& params) {
  if (x < 0 || x >= e.size())
    throw std::invalid_argument("check_theorem1: state index out of range");

  TheoremOneResult result;
  result.x = x;
  const Matrix ref = e.item(x).prior * e.item(x).state.entries();

  bool all_certified = true;
  for (int i = 0; i < e.size(); ++i) {
    HermitianOperator diff(
        e.structure(), e.item(0).state.ordering(),
        ref - e.item(i).prior * e.item(i).state.entries());
    ConeVerdict v = analyze_block_positivity(diff, params);
    if (v.status == ConeStatus::Refuted && !result.refuted_at)
      result.refuted_at = i;
    all_certified = all_certified && v.status == ConeStatus::CertifiedBlockPositive;
    result.evidence.push_back(std::move(v));
  }

  if (result.refuted_at)
    result.verdict = Verdict::Fails;
  else if (all_certified) {
    result.verdict = Verdict::Holds;
    result.certified_pl = e.item(x).prior;  // = p_L = p_SEP
  }
  return result;
}

CorollaryOneResult check_corollary1(const StateEnsemble& e) {
  CorollaryOneResult result;
  const double uniform = 1.0 / e.size();
  result.uniform_priors = true;
  for (int i = 0; i < e.size(); ++i)
    result.uniform_priors =
        result.uniform_priors && std::abs(e.item(i).prior - uniform) <= tol::prior_sum;
  result.identical_states = states_identical(e, tol::psd_floor);
  if (result.uniform_priors && result.identical_states) {
    result.verdict = Verdict::Holds;
    result.pl = uniform;
  } else {
    result.verdict = Verdict::Fails;
  }
  return result;
}

TheoremTwoResult check_theorem2(const SequenceEnsemble& se, const SequenceIndex& x,
                                const ConeAnalysisParams& params) {
  TheoremTwoResult result;
  result.x = x;

  const WeightedState pivot = sequence_item(se, x);
  const auto indices = enumerate_indices(se.counts());

  // Indices are independent; analyze them all (concurrently) and report
  // every refutation rather than stopping at the first.
  std::vector<ConeVerdict> verdicts(indices.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(indices.size()); ++i) {
    const WeightedState item = sequence_item(se, indices[static_cast<size_t>(i)]);
    HermitianOperator diff(
        pivot.state.structure(), Ordering::StepMajor,
        pivot.prior * pivot.state.entries() - item.prior * item.state.entries());
    verdicts[static_cast<size_t>(i)] =
        analyze_block_positivity(diff, params);
  }

  bool all_certified = true;
  for (size_t i = 0; i < indices.size(); ++i) {
    const ConeVerdict& v = verdicts[i];
    if (v.status == ConeStatus::Refuted) result.refuted.push_back(indices[i]);
    if (v.status == ConeStatus::Undecided) result.undecided.push_back(indices[i]);
    all_certified = all_certified && v.status == ConeStatus::CertifiedBlockPositive;
    result.evidence.emplace_back(indices[i], std::move(verdicts[i]));
  }

  if (!result.refuted.empty())
    result.verdict = Verdict::Fails;
  else if (all_certified) {
    result.verdict = Verdict::Holds;
    result.certified_pl = pivot.prior;  // = p_L(xE) = p_SEP(xE)
  }
  return result;
}

TheoremThreeResult check_theorem3(
    const SequenceEnsemble& se,
    const std::vector<std::optional<CertifiedValue>>& per_step_pl,
    const PgOptions& options) {
  if (static_cast<int>(per_step_pl.size()) != se.steps())
    throw std::invalid_argument("check_theorem3: per-step value count mismatch");

  TheoremThreeResult result;
  bool all_present = true, all_equal = true, any_strict = false;
  for (int l = 0; l < se.steps(); ++l) {
    const PgResult pg = solve_pg(se.factors()[static_cast<size_t>(l)], options);
    result.step_pg.push_back(pg.value);
    result.step_gap.push_back(pg.gap);
    result.product_pg *= pg.value;
    if (!per_step_pl[static_cast<size_t>(l)]) {
      all_present = false;
      result.step_pl.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double pl = per_step_pl[static_cast<size_t>(l)]->value;
    result.step_pl.push_back(pl);
    const double slack = pg.gap + tol::theorem3_equality;
    if (std::abs(pg.value - pl) > slack) {
      all_equal = false;
      if (pg.value - pl > slack) any_strict = true;
    }
  }

  if (any_strict)
    result.verdict = Verdict::Fails;
  else if (all_present && all_equal)
    result.verdict = Verdict::Holds;
  return result;
}

TheoremFourResult verify_theorem4_certificate(const SequenceEnsemble& se,
                                              const SeparableCertificate& cert) {
  TheoremFourResult result;
  auto issue = [&](std::string msg) { result.issues.push_back(std::move(msg)); };

  const auto counts = se.counts();
  if (static_cast<int>(cert.per_step.size()) != se.steps()) {
    issue("certificate has the wrong number of step measurements");
    return result;
  }
  for (int l = 0; l < se.steps(); ++l)
    if (cert.per_step[static_cast<size_t>(l)].size() != counts[static_cast<size_t>(l)]) {
      issue("step " + std::to_string(l) + " measurement outcome count mismatch");
      return result;
    }
  if (!(cert.H.structure() == se.sequence_structure()) ||
      cert.H.ordering() != Ordering::StepMajor) {
    issue("H does not live on the sequence structure (step-major)");
    return result;
  }

  const auto indices = enumerate_indices(counts);
  if (cert.entries.size() != indices.size()) {
    issue("certificate covers " + std::to_string(cert.entries.size()) +
          " of " + std::to_string(indices.size()) + " indices");
    return result;
  }

  // Validate each canonical decomposition once.
  std::vector<VerifyResult> canonical_ok;
  canonical_ok.reserve(cert.canonical.size());
  for (const DecompositionCertificate& dc : cert.canonical)
    canonical_ok.push_back(verify_decomposition(dc));

  bool cone_missing = false, cone_failed = false, slack_failed = false;

  for (size_t i = 0; i < indices.size(); ++i) {
    const SequenceIndex& c = indices[i];
    const SeparableCertificate::IndexEvidence& ev = cert.entries[i];
    if (ev.index != c) {
      issue("evidence order mismatch at " + index_string(c));
      return result;
    }

    const WeightedState item = sequence_item(se, c);
    HermitianOperator target(cert.H.structure(), Ordering::StepMajor,
                             cert.H.entries() - item.prior * item.state.entries());

    // (a) cone evidence for H - eta_c rho_c
    if (ev.kind == SeparableCertificate::IndexEvidence::Kind::Psd) {
      const double low = min_eigenvalue(target.entries());
      if (low < -tol::psd_floor) {
        cone_failed = true;
        issue("PSD evidence fails at " + index_string(c) + " (min eigenvalue " +
              std::to_string(low) + ")");
      }
    } else if (ev.canonical_id < 0 ||
               ev.canonical_id >= static_cast<int>(cert.canonical.size())) {
      cone_missing = true;
      issue("missing cone evidence at " + index_string(c));
    } else {
      const VerifyResult& vr = canonical_ok[static_cast<size_t>(ev.canonical_id)];
      if (!vr.ok) {
        cone_failed = true;
        issue("decomposition for class of " + index_string(c) + " fails: " +
              (vr.issues.empty() ? "unknown" : vr.issues.front()));
      } else {
        const HermitianOperator sorted_target = permute_steps(target, ev.sort_perm);
        const double dev = max_abs_difference(
            sorted_target, cert.canonical[static_cast<size_t>(ev.canonical_id)].target);
        result.max_reconstruction_dev = std::max(result.max_reconstruction_dev, dev);
        if (dev > tol::reconstruction) {
          cone_failed = true;
          issue("decomposition target mismatch at " + index_string(c) +
                " (deviation " + std::to_string(dev) + ")");
        }
      }
    }

    // (b) complementary slackness Tr[M_c (H - eta_c rho_c)] = 0
    Matrix mc = Matrix::Identity(1, 1);
    for (int l = 0; l < se.steps(); ++l)
      mc = kernels::kron(mc, cert.per_step[static_cast<size_t>(l)]
                                 .operators()[static_cast<size_t>(c[static_cast<size_t>(l)])]
                                 .entries());
    const double slack = (mc * target.entries()).trace().real();
    result.max_slack = std::max(result.max_slack, std::abs(slack));
    if (std::abs(slack) > tol::slackness) {
      slack_failed = true;
      issue("slackness residual " + std::to_string(slack) + " at " +
            index_string(c));
    }
  }

  if (cone_failed || slack_failed)
    result.verdict = Verdict::Fails;
  else if (cone_missing)
    result.verdict = Verdict::Undecided;
  else {
    result.verdict = Verdict::Holds;
    result.trace_h = cert.H.trace();
    for (int l = 0; l < se.steps(); ++l)
      result.step_success.push_back(success_probability(
          se.factors()[static_cast<size_t>(l)], cert.per_step[static_cast<size_t>(l)]));
  }
  return result;
}

SeparableCertificate build_example2_certificate(int d, int m, int L) {
  if (L < 1) throw std::invalid_argument("need L >= 1");
  const PartyStructure step = PartyStructure::uniform(m, d);
  const PartyStructure full(step.party_dims, L);

  const double dm = full.step_dim();
  const double scale = std::pow(1.0 / (dm + d), L);

  SeparableCertificate cert{
      scale * identity(full),
      std::vector<Measurement>(static_cast<size_t>(L), example2_measurement(d, m)),
      {},
      {}};

  // Separable provenance of a nonnegative diagonal operator: one product of
  // per-party basis projectors per set diagonal entry, the weight on party 0.
  auto diagonal_provenance = [&](const HermitianOperator& factor) {
    SeparableProvenance prov;
    const Matrix& f = factor.entries();
    for (long b = 0; b < f.rows(); ++b) {
      const double w = f(b, b).real();
      if (w <= 1e-15) continue;
      std::vector<Matrix> product;
      long rest = b;
      std::vector<long> digits(static_cast<size_t>(m));
      for (int k = m - 1; k >= 0; --k) {
        digits[static_cast<size_t>(k)] = rest % d;
        rest /= d;
      }
      for (int k = 0; k < m; ++k) {
        Matrix local = Matrix::Zero(d, d);
        local(digits[static_cast<size_t>(k)], digits[static_cast<size_t>(k)]) =
            k == 0 ? w : 1.0;
        product.push_back(std::move(local));
      }
      prov.product_terms.push_back(std::move(product));
    }
    return prov;
  };

  const HermitianOperator one = identity(step);
  const int n = d + 2;

  // Canonical decompositions, one per sorted (non-increasing) index class.
  std::map<SequenceIndex, int> canonical_ids;
  auto canonical_for = [&](const SequenceIndex& sorted) {
    auto found = canonical_ids.find(sorted);
    if (found != canonical_ids.end()) return found->second;

    int t = 0;
    while (t < L && sorted[static_cast<size_t>(t)] == d + 1) ++t;  // GHZ entries first

    // target = scale * (1^{xL} - R_{c_1} x .. x R_{c_L})
    HermitianOperator rhs = example2_R(d, m, sorted[0] + 1);
    for (int l = 1; l < L; ++l)
      rhs = tensor(rhs, example2_R(d, m, sorted[static_cast<size_t>(l)] + 1));
    DecompositionCertificate dc{
        HermitianOperator(full, Ordering::StepMajor,
                          scale * (identity(full).entries() - rhs.entries())),
        {}};

    if (t >= 1) {
      // GHZ block: scale * (1^{xt} - (d Phi)^{xt}), the regrouped primitive.
      HermitianOperator ones = one;
      HermitianOperator ghzs = example2_R(d, m, d + 2);
      for (int l = 1; l < t; ++l) {
        ones = tensor(ones, one);
        ghzs = tensor(ghzs, example2_R(d, m, d + 2));
      }
      DecompositionTerm lead;
      lead.block_positive = scale * (ones - ghzs);
      int dprime = 1;
      for (int l = 0; l < t; ++l) dprime *= d;
      lead.bp_provenance = {BlockPositiveProvenance::Kind::GhzPrimitive, dprime,
                            scale};
      for (int l = t; l < L; ++l) {
        const HermitianOperator r = example2_R(d, m, sorted[static_cast<size_t>(l)] + 1);
        lead.separable_provenance.push_back(diagonal_provenance(r));
        lead.separable.push_back(r);
      }
      dc.terms.push_back(std::move(lead));
    }

    // Telescoping tail over the separable positions t..L-1.
    for (int j = 0; t + j < L; ++j) {
      DecompositionTerm term;
      if (t + j >= 1) {
        HermitianOperator ones = one;
        for (int l = 1; l < t + j; ++l) ones = tensor(ones, one);
        term.block_positive = scale * ones;
        term.bp_provenance = {BlockPositiveProvenance::Kind::Psd, 0, 1.0};
      }
      const HermitianOperator flip =
          one - example2_R(d, m, sorted[static_cast<size_t>(t + j)] + 1);
      const HermitianOperator scaled_flip =
          term.block_positive ? flip : scale * flip;
      term.separable_provenance.push_back(diagonal_provenance(scaled_flip));
      term.separable.push_back(scaled_flip);
      for (int l = t + j + 1; l < L; ++l) {
        const HermitianOperator r = example2_R(d, m, sorted[static_cast<size_t>(l)] + 1);
        term.separable_provenance.push_back(diagonal_provenance(r));
        term.separable.push_back(r);
      }
      dc.terms.push_back(std::move(term));
    }

    const int id = static_cast<int>(cert.canonical.size());
    cert.canonical.push_back(std::move(dc));
    canonical_ids.emplace(sorted, id);
    return id;
  };

  for (const SequenceIndex& c : enumerate_indices(std::vector<int>(
           static_cast<size_t>(L), n))) {
    // Stable argsort, descending entries: sorted[s] = c[sigma[s]].
    std::vector<int> sigma(static_cast<size_t>(L));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::stable_sort(sigma.begin(), sigma.end(), [&](int a, int b) {
      return c[static_cast<size_t>(a)] > c[static_cast<size_t>(b)];
    });
    SequenceIndex sorted(static_cast<size_t>(L));
    for (int s = 0; s < L; ++s)
      sorted[static_cast<size_t>(s)] = c[static_cast<size_t>(sigma[static_cast<size_t>(s)])];

    SeparableCertificate::IndexEvidence ev;
    ev.index = c;
    ev.kind = SeparableCertificate::IndexEvidence::Kind::Decomposition;
    ev.canonical_id = canonical_for(sorted);
    ev.sort_perm = sigma;
    ev.ghz_count = static_cast<int>(
        std::count(c.begin(), c.end(), d + 1));

    // Stored slackness residual Tr[M_c (H - eta_c rho_c)].
    Matrix mc = Matrix::Identity(1, 1);
    HermitianOperator rc = example2_state(d, m, c[0] + 1);
    double eta = example2_prior(d, m, c[0] + 1);
    const Measurement& meas = cert.per_step[0];
    mc = kernels::kron(mc, meas.operators()[static_cast<size_t>(c[0])].entries());
    for (int l = 1; l < L; ++l) {
      mc = kernels::kron(
          mc, cert.per_step[static_cast<size_t>(l)]
                  .operators()[static_cast<size_t>(c[static_cast<size_t>(l)])]
                  .entries());
      rc = tensor(rc, example2_state(d, m, c[static_cast<size_t>(l)] + 1));
      eta *= example2_prior(d, m, c[static_cast<size_t>(l)] + 1);
    }
    ev.slack = (mc * (cert.H.entries() - eta * rc.entries())).trace().real();
    cert.entries.push_back(std::move(ev));
  }
  return cert;
}

CorollaryTwoResult check_corollary2(const SequenceEnsemble& se,
                                    const FactorizabilityReport& report) {
  CorollaryTwoResult result;
  if (report.factorizable != Factorizable::Yes) return result;  // precondition

  for (int l = 0; l < se.steps(); ++l) {
    const StepSummary& s = report.steps[static_cast<size_t>(l)];
    if (!s.pl) {
      result.step_left.push_back(false);
      result.step_right.push_back(false);
      continue;
    }
    const bool left = s.pl->value - s.max_prior > tol::prior_sum;
    const bool right = s.pg - s.pl->value > s.pg_gap + tol::dual_psd_floor;
    result.step_left.push_back(left);
    result.step_right.push_back(right);
    result.some_step_beats_max_prior = result.some_step_beats_max_prior || left;
    result.some_step_below_pg = result.some_step_below_pg || right;
  }
  result.verdict = result.some_step_beats_max_prior && result.some_step_below_pg
                       ? Verdict::Holds
                       : Verdict::Fails;
  return result;
}

FactorizabilityReport assemble_report(const SequenceEnsemble& se,
                                      const ReportOptions& options) {
  FactorizabilityReport report;

  // Per-step analysis.
  for (int l = 0; l < se.steps(); ++l) {
    const StateEnsemble& e = se.factors()[static_cast<size_t>(l)];
    StepSummary s;
    std::tie(s.max_prior, s.max_prior_index) = max_prior(e);
    s.corollary1 = check_corollary1(e);
    s.theorem1 = check_theorem1(e, s.max_prior_index, options.cone);
    const PgResult pg = solve_pg(e, options.pg);
    s.pg = pg.value;
    s.pg_gap = pg.gap;
    if (s.theorem1.verdict == Verdict::Holds)
      s.pl = CertifiedValue{s.theorem1.certified_pl, "theorem1"};
    else if (s.corollary1.verdict == Verdict::Holds)
      s.pl = CertifiedValue{s.corollary1.pl, "corollary1"};
    report.pg_product *= pg.value;
    report.pg_product_gap += pg.gap;
    report.steps.push_back(std::move(s));
  }

  std::tie(report.max_prior_seq, report.max_prior_index) = max_prior(se);

  // Sequence-level p_G, when the flattened problem fits the cap.
  if (options.compute_sequence_pg) {
    try {
      const PgResult pg = solve_pg(flatten(se), options.pg);
      report.pg_sequence = pg.value;
      report.pg_sequence_gap = pg.gap;
    } catch (const std::exception& ex) {
      report.notes.push_back(std::string("sequence p_G skipped: ") + ex.what());
    }
  }

  // Largest-prior condition on the sequence.
  try {
    report.theorem2 =
        check_theorem2(se, report.max_prior_index, options.cone);
  } catch (const std::exception& ex) {
    report.notes.push_back(std::string("theorem2 skipped: ") + ex.what());
  }

  // Separable-optimality certificate for the built-in family.
  if (options.try_example2_certificate) {
    const PartyStructure& step = se.factors()[0].structure();
    const bool uniform =
        std::all_of(step.party_dims.begin(), step.party_dims.end(),
                    [&](int dd) { return dd == step.party_dims[0]; });
    if (uniform && step.steps == 1 &&
        se.factors()[0].size() == step.party_dims[0] + 2) {
      const int d = step.party_dims[0], m = step.parties();
      bool matches = true;
      try {
        const StateEnsemble model = example2_step_ensemble(d, m);
        for (const StateEnsemble& e : se.factors())
          for (int i = 0; matches && i < e.size(); ++i)
            matches = std::abs(e.item(i).prior - model.item(i).prior) <= 1e-12 &&
                      max_abs_difference(e.item(i).state, model.item(i).state) <=
                          1e-12;
      } catch (const std::exception&) {
        matches = false;
      }
      if (matches) {
        const SeparableCertificate cert =
            build_example2_certificate(d, m, se.steps());
        report.theorem4 = verify_theorem4_certificate(se, cert);
        if (report.theorem4->verdict == Verdict::Holds)
          for (int l = 0; l < se.steps(); ++l)
            if (!report.steps[static_cast<size_t>(l)].pl)
              report.steps[static_cast<size_t>(l)].pl = CertifiedValue{
                  report.theorem4->step_success[static_cast<size_t>(l)],
                  "theorem4"};
      }
    }
  }

  // Per-step optimality comparison.
  {
    std::vector<std::optional<CertifiedValue>> per_step;
    per_step.reserve(report.steps.size());
    for (const StepSummary& s : report.steps) per_step.push_back(s.pl);
    report.theorem3 = check_theorem3(se, per_step, options.pg);
  }

  // Resolve factorizability. The Yes paths certify p_L(xE) exactly; the No
  // path needs every step pinned at its largest prior plus a sound
  // refutation of the combined condition.
  std::optional<double> exact_pl;
  std::string yes_reason, no_reason;
  if (report.theorem2 && report.theorem2->verdict == Verdict::Holds) {
    exact_pl = report.theorem2->certified_pl;
    yes_reason = "largest-prior condition holds for the sequence";
  } else if (report.theorem4 && report.theorem4->verdict == Verdict::Holds) {
    exact_pl = report.theorem4->trace_h;
    yes_reason = "separable-optimality certificate accepted";
  } else if (report.theorem3 && report.theorem3->verdict == Verdict::Holds) {
    exact_pl = report.theorem3->product_pg;
    yes_reason = "every step is globally optimal under LOCC";
  }

  const bool all_steps_pinned = std::all_of(
      report.steps.begin(), report.steps.end(), [](const StepSummary& s) {
        return s.theorem1.verdict == Verdict::Holds;
      });
  if (report.theorem2 && report.theorem2->verdict == Verdict::Fails &&
      all_steps_pinned)
    no_reason = "per-step optima are the largest priors but the sequence "
                "condition is refuted at " +
                index_string(report.theorem2->refuted.front());

  if (!yes_reason.empty() && !no_reason.empty()) {
    report.factorizable = Factorizable::Undecided;
    report.factorizable_reason = "inconsistent evidence: " + yes_reason +
                                 " vs " + no_reason;
  } else if (!yes_reason.empty()) {
    report.factorizable = Factorizable::Yes;
    report.factorizable_reason = yes_reason;
  } else if (!no_reason.empty()) {
    report.factorizable = Factorizable::No;
    report.factorizable_reason = no_reason;
  }

  // Bounds: lower from the largest prior, certified products and exact
  // values; upper from the guessing probabilities.
  report.pl_lower = report.max_prior_seq;
  {
    bool all_certified = true;
    double product = 1.0;
    for (const StepSummary& s : report.steps) {
      if (!s.pl) {
        all_certified = false;
        break;
      }
      product *= s.pl->value;
    }
    if (all_certified) report.pl_lower = std::max(report.pl_lower, product);
  }
  if (exact_pl) report.pl_lower = std::max(report.pl_lower, *exact_pl);

  report.pl_upper = report.pg_product + report.pg_product_gap;
  if (report.pg_sequence)
    report.pl_upper =
        std::min(report.pl_upper, *report.pg_sequence + report.pg_sequence_gap);
  if (exact_pl) report.pl_upper = std::min(report.pl_upper, *exact_pl);

  if (report.factorizable == Factorizable::Yes)
    report.corollary2 = check_corollary2(se, report);

  // Soundness audit: re-derive each analyzed operator and re-check the
  // verdict from scratch.
  if (options.run_audit) {
    for (size_t l = 0; l < report.steps.size(); ++l) {
      const StateEnsemble& e = se.factors()[l];
      const TheoremOneResult& t1 = report.steps[l].theorem1;
      const Matrix ref = e.item(t1.x).prior * e.item(t1.x).state.entries();
      for (int i = 0; i < e.size(); ++i) {
        HermitianOperator diff(e.structure(), e.item(0).state.ordering(),
                               ref - e.item(i).prior * e.item(i).state.entries());
        ++report.audited_verdicts;
        const VerifyResult vr =
            audit_verdict(diff, t1.evidence[static_cast<size_t>(i)],
                          options.cone.refute.margin);
        if (!vr.ok)
          report.audit_failures.push_back(
              "step " + std::to_string(l) + " evidence " + std::to_string(i) +
              ": " + vr.issues.front());
      }
    }
    if (report.theorem2) {
      const WeightedState pivot = sequence_item(se, report.theorem2->x);
      for (const auto& [index, verdict] : report.theorem2->evidence) {
        const WeightedState item = sequence_item(se, index);
        HermitianOperator diff(pivot.state.structure(), Ordering::StepMajor,
                               pivot.prior * pivot.state.entries() -
                                   item.prior * item.state.entries());
        ++report.audited_verdicts;
        const VerifyResult vr =
            audit_verdict(diff, verdict, options.cone.refute.margin);
        if (!vr.ok)
          report.audit_failures.push_back("theorem2 " + index_string(index) +
                                          ": " + vr.issues.front());
      }
    }
  }

  return report;
}

}  // namespace qseq
