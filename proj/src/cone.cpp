#include "qseq/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qseq {

namespace {

// splitmix64; per-restart streams are derived from (seed, restart) so the
// search is reproducible regardless of how restarts are scheduled.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed, std::uint64_t stream) {
    state = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    next();
  }
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // (0, 1]
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
  // Box-Muller pair; kept hand-rolled so streams do not depend on the
  // standard library's distribution internals.
  void gaussian_pair(double& g0, double& g1) {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(2.0 * std::numbers::pi * u2);
    g1 = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  Vector unit_complex(long dim) {
    Vector v(dim);
    for (long i = 0; i < dim; ++i) {
      double re, im;
      gaussian_pair(re, im);
      v(i) = Cplx(re, im);
    }
    v.normalize();
    return v;
  }
};

HermitianOperator as_step_major(const HermitianOperator& op) {
  return op.ordering() == Ordering::StepMajor ? op : regroup_to_step_major(op);
}

HermitianOperator as_party_major(const HermitianOperator& op) {
  return op.ordering() == Ordering::PartyMajor ? op : regroup_to_party_major(op);
}

bool uniform_party_dims(const PartyStructure& s) {
  return std::all_of(s.party_dims.begin(), s.party_dims.end(),
                     [&](int d) { return d == s.party_dims[0]; });
}

ProductPureState random_product_state(const PartyStructure& s, Rng& rng) {
  std::vector<Vector> vecs;
  vecs.reserve(static_cast<size_t>(s.parties()));
  for (int k = 0; k < s.parties(); ++k)
    vecs.push_back(rng.unit_complex(s.party_dim(k)));
  return ProductPureState(s, std::move(vecs));
}

struct RestartOutcome {
  double value;
  std::vector<Vector> vectors;
  std::vector<double> trace;
};

RestartOutcome run_restart(const HermitianOperator& op, const SeesawParams& p,
                           int restart) {
  Rng rng(p.seed, static_cast<std::uint64_t>(restart));
  const PartyStructure& s = op.structure();
  ProductPureState state = random_product_state(s, rng);

  RestartOutcome out;
  out.value = expectation(op, state);
  out.trace.push_back(out.value);

  for (int sweep = 0; sweep < p.sweeps; ++sweep) {
    const double before = out.value;
    for (int k = 0; k < s.parties(); ++k) {
      const Matrix contracted = contract_all_but_one(op, state, k);
      EigMin low = eig_min(contracted);
      state.party_vectors[static_cast<size_t>(k)] = low.vector;
      out.value = low.value;
      out.trace.push_back(out.value);
    }
    if (before - out.value < p.improvement_tol) break;
  }
  out.vectors = state.party_vectors;
  return out;
}

}  // namespace

ConeVerdict certify_psd(const HermitianOperator& op) {
  ConeVerdict verdict;
  const HermitianOperator sm = as_step_major(op);
  const double low = min_eigenvalue(sm.entries());
  verdict.best_found = low;
  if (low >= -tol::psd_floor) {
    verdict.status = ConeStatus::CertifiedBlockPositive;
    DecompositionTerm term;
    term.block_positive = sm;
    term.bp_provenance = {BlockPositiveProvenance::Kind::Psd, 0, 1.0};
    verdict.certificate = DecompositionCertificate{sm, {std::move(term)}};
  }
  return verdict;
}

HermitianOperator known_primitive_bp(int m, int dprime) {
  const PartyStructure s = PartyStructure::uniform(m, dprime);
  return identity(s) - static_cast<double>(dprime) * ghz(m, dprime);
}

SeesawResult seesaw_min_product(const HermitianOperator& op,
                                const SeesawParams& params) {
  if (op.ordering() != Ordering::PartyMajor)
    throw std::invalid_argument("seesaw_min_product: operator must be party-major");
  if (params.restarts < 1)
    throw std::invalid_argument("seesaw_min_product: need at least one restart");

  std::vector<RestartOutcome> outcomes(static_cast<size_t>(params.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < params.restarts; ++r)
    outcomes[static_cast<size_t>(r)] = run_restart(op, params, r);

  int best = 0;
  for (int r = 1; r < params.restarts; ++r)
    if (outcomes[static_cast<size_t>(r)].value <
        outcomes[static_cast<size_t>(best)].value)
      best = r;

  RestartOutcome& chosen = outcomes[static_cast<size_t>(best)];
  return SeesawResult{chosen.value,
                      ProductPureState(op.structure(), std::move(chosen.vectors)),
                      best, std::move(chosen.trace)};
}

ConeVerdict refute_block_positivity(const HermitianOperator& op,
                                    const RefuteParams& params) {
  const HermitianOperator pm = as_party_major(op);
  SeesawResult r = seesaw_min_product(pm, params.seesaw);
  ConeVerdict verdict;
  verdict.best_found = r.min_value;
  if (r.min_value <= -params.margin) {
    verdict.status = ConeStatus::Refuted;
    verdict.witness = Witness{std::move(r.state), r.min_value};
  }
  return verdict;
}

VerifyResult verify_decomposition(const DecompositionCertificate& cert) {
  VerifyResult result;
  auto fail = [&](std::string msg) {
    result.ok = false;
    result.issues.push_back(std::move(msg));
  };

  const HermitianOperator& target = cert.target;
  if (target.ordering() != Ordering::StepMajor)
    fail("target must be step-major");
  if (cert.terms.empty()) fail("certificate has no terms");

  Matrix sum = Matrix::Zero(target.dim(), target.dim());
  for (size_t t = 0; t < cert.terms.size(); ++t) {
    const DecompositionTerm& term = cert.terms[t];
    const std::string tag = "term " + std::to_string(t);

    int steps = 0;
    std::vector<const HermitianOperator*> factors;
    if (term.block_positive) {
      factors.push_back(&*term.block_positive);
      steps += term.block_positive->structure().steps;
    }
    if (term.separable.size() != term.separable_provenance.size()) {
      fail(tag + ": separable factor/provenance counts differ");
      continue;
    }
    for (const HermitianOperator& f : term.separable) {
      factors.push_back(&f);
      steps += f.structure().steps;
    }
    if (factors.empty()) {
      fail(tag + ": no factors");
      continue;
    }
    bool shape_ok = steps == target.structure().steps;
    for (const HermitianOperator* f : factors)
      shape_ok = shape_ok &&
                 f->structure().party_dims == target.structure().party_dims &&
                 f->ordering() == Ordering::StepMajor;
    if (!shape_ok) {
      fail(tag + ": factor shapes do not tile the target");
      continue;
    }

    // Provenance of the leading block-positive factor.
    if (term.block_positive) {
      const HermitianOperator& bp = *term.block_positive;
      const BlockPositiveProvenance& prov = term.bp_provenance;
      if (prov.kind == BlockPositiveProvenance::Kind::Psd) {
        const double low = min_eigenvalue(bp.entries());
        if (low < -tol::psd_floor)
          fail(tag + ": claimed-PSD factor has min eigenvalue " +
               std::to_string(low));
      } else {
        if (!(prov.scale > 0.0))
          fail(tag + ": primitive scale must be positive");
        const HermitianOperator pm = as_party_major(bp);
        if (pm.structure().party_dim(0) != prov.ghz_dim) {
          fail(tag + ": primitive dimension does not match the factor");
        } else {
          const HermitianOperator prim =
              known_primitive_bp(pm.structure().parties(), prov.ghz_dim);
          const double dev =
              (pm.entries() - prov.scale * prim.entries()).cwiseAbs().maxCoeff();
          if (dev > tol::reconstruction)
            fail(tag + ": factor is not the scaled primitive (deviation " +
                 std::to_string(dev) + ")");
        }
      }
    }

    // Provenance of each separable factor.
    for (size_t s = 0; s < term.separable.size(); ++s) {
      const HermitianOperator& factor = term.separable[s];
      const SeparableProvenance& prov = term.separable_provenance[s];
      if (factor.structure().steps != 1) {
        fail(tag + ": separable factor " + std::to_string(s) +
             " spans more than one step");
        continue;
      }
      if (prov.product_terms.empty()) {
        fail(tag + ": separable factor " + std::to_string(s) +
             " has no product decomposition");
        continue;
      }
      Matrix rebuilt = Matrix::Zero(factor.dim(), factor.dim());
      bool prov_ok = true;
      for (const auto& product : prov.product_terms) {
        if (static_cast<int>(product.size()) != factor.structure().parties()) {
          prov_ok = false;
          break;
        }
        Matrix p = Matrix::Identity(1, 1);
        for (const Matrix& local : product) {
          if (min_eigenvalue(0.5 * (local + local.adjoint())) < -tol::psd_floor)
            prov_ok = false;
          p = kernels::kron(p, local);
        }
        rebuilt += p;
      }
      if (!prov_ok) {
        fail(tag + ": separable factor " + std::to_string(s) +
             " has a non-PSD or malformed product term");
        continue;
      }
      const double dev = (rebuilt - factor.entries()).cwiseAbs().maxCoeff();
      if (dev > tol::reconstruction)
        fail(tag + ": separable factor " + std::to_string(s) +
             " does not match its product decomposition (deviation " +
             std::to_string(dev) + ")");
    }

    Matrix product = Matrix::Identity(1, 1);
    for (const HermitianOperator* f : factors)
      product = kernels::kron(product, f->entries());
    sum += product;
  }

  if (result.ok) {
    const double dev = (sum - target.entries()).cwiseAbs().maxCoeff();
    if (dev > tol::reconstruction)
      fail("terms sum to the wrong operator (deviation " + std::to_string(dev) +
           ")");
  }
  return result;
}

std::vector<std::vector<HermitianOperator>> telescope(
    const std::vector<HermitianOperator>& a,
    const std::vector<HermitianOperator>& b) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("telescope: need equal nonempty lists");
  for (size_t l = 0; l < a.size(); ++l) {
    if (!(a[l].structure() == b[l].structure()) ||
        a[l].ordering() != b[l].ordering())
      throw std::invalid_argument("telescope: pair " + std::to_string(l) +
                                  " structures differ");
    if (!a[l].structure().same_party_dims(a[0].structure()))
      throw std::invalid_argument("telescope: party dimensions differ at " +
                                  std::to_string(l));
  }
  const size_t K = a.size();
  std::vector<std::vector<HermitianOperator>> terms;
  terms.reserve(K);
  for (size_t j = 0; j < K; ++j) {
    std::vector<HermitianOperator> factors;
    factors.reserve(K);
    for (size_t l = 0; l < j; ++l) factors.push_back(a[l]);
    factors.push_back(a[j] - b[j]);
    for (size_t l = j + 1; l < K; ++l) factors.push_back(b[l]);
    terms.push_back(std::move(factors));
  }
  return terms;
}

ConeVerdict analyze_block_positivity(const HermitianOperator& op,
                                     const ConeAnalysisParams& params) {
  ConeVerdict psd = certify_psd(op);
  if (psd.status == ConeStatus::CertifiedBlockPositive) return psd;

  if (params.allow_primitives && uniform_party_dims(op.structure())) {
    const HermitianOperator sm = as_step_major(op);
    const HermitianOperator pm = as_party_major(op);
    const int dprime = static_cast<int>(pm.structure().party_dim(0));
    // Tr(1 - d' Phi) = d'^m - d'; the candidate scale comes from the trace.
    const double denom = static_cast<double>(pm.dim()) - dprime;
    if (denom > 0) {
      const double alpha = sm.trace() / denom;
      if (alpha > 0.0) {
        const HermitianOperator prim =
            known_primitive_bp(pm.structure().parties(), dprime);
        const double dev =
            (pm.entries() - alpha * prim.entries()).cwiseAbs().maxCoeff();
        if (dev <= tol::reconstruction) {
          ConeVerdict verdict;
          verdict.status = ConeStatus::CertifiedBlockPositive;
          verdict.best_found = 0.0;  // the primitive family has see-saw minimum 0
          DecompositionTerm term;
          term.block_positive = sm;
          term.bp_provenance = {BlockPositiveProvenance::Kind::GhzPrimitive,
                                dprime, alpha};
          verdict.certificate = DecompositionCertificate{sm, {std::move(term)}};
          return verdict;
        }
      }
    }
  }

  return refute_block_positivity(op, params.refute);
}

VerifyResult audit_verdict(const HermitianOperator& op, const ConeVerdict& v,
                           double margin) {
  VerifyResult result;
  auto fail = [&](std::string msg) {
    result.ok = false;
    result.issues.push_back(std::move(msg));
  };

  if (v.status == ConeStatus::Refuted) {
    if (!v.witness) {
      fail("refutation without witness");
      return result;
    }
    // Re-evaluate from scratch through the full-vector quadratic form.
    const HermitianOperator pm = as_party_major(op);
    const Vector f = full_vector(v.witness->state);
    const double value = (f.adjoint() * pm.entries() * f)(0).real();
    if (value > -margin / 2)
      fail("witness re-evaluates to " + std::to_string(value));
    if (certify_psd(op).status == ConeStatus::CertifiedBlockPositive)
      fail("refuted operator is PSD-certifiable");
  } else if (v.status == ConeStatus::CertifiedBlockPositive) {
    if (!v.certificate) {
      fail("certification without certificate");
      return result;
    }
    const VerifyResult inner = verify_decomposition(*v.certificate);
    if (!inner.ok) {
      result.ok = false;
      for (const std::string& issue : inner.issues)
        result.issues.push_back("certificate: " + issue);
    }
    const HermitianOperator sm = as_step_major(op);
    if ((sm.entries() - v.certificate->target.entries()).cwiseAbs().maxCoeff() >
        tol::reconstruction)
      fail("certificate target differs from the audited operator");
    // Spot-check the defining property on random product states.
    const HermitianOperator pm = as_party_major(op);
    Rng rng(default_seed, 0xA0D17ULL);
    for (int trial = 0; trial < 10; ++trial) {
      ProductPureState s = random_product_state(pm.structure(), rng);
      if (expectation(pm, s) < -1e-8) {
        fail("certified operator has negative product expectation");
        break;
      }
    }
  }
  return result;
}

}  // namespace qseq
