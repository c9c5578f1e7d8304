#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qseq/operator.hpp"

namespace qseq {

// Block positivity is decided one-sidedly: PSD or a verified decomposition
// certifies membership in the dual cone, a product state with negative
// expectation refutes it, and everything else stays Undecided.
enum class ConeStatus { CertifiedBlockPositive, Refuted, Undecided };

struct Witness {
  ProductPureState state;
  double expectation;
};

// Explicit sum of products of per-party PSD operators (single step each).
// product_terms[t][k] acts on party k.
struct SeparableProvenance {
  std::vector<std::vector<Matrix>> product_terms;
};

struct BlockPositiveProvenance {
  enum class Kind { Psd, GhzPrimitive };
  Kind kind = Kind::Psd;
  // For GhzPrimitive: the factor equals scale * (1 - d' Phi_{d'}) after
  // regrouping its steps party-major, with d' the merged local dimension.
  int ghz_dim = 0;
  double scale = 1.0;
};

// One term of a block-positive decomposition: an optional leading
// block-positive factor spanning the first steps, followed by separable
// single-step factors. The term's matrix is the Kronecker chain in order.
struct DecompositionTerm {
  std::optional<HermitianOperator> block_positive;  // step-major
  BlockPositiveProvenance bp_provenance;
  std::vector<HermitianOperator> separable;         // step-major, 1 step each
  std::vector<SeparableProvenance> separable_provenance;
};

// Certifies `target` (step-major) as block positive: the terms sum to the
// target, each term is block-positive-by-construction (BP x separable x ..),
// and every provenance is independently checkable.
struct DecompositionCertificate {
  HermitianOperator target;
  std::vector<DecompositionTerm> terms;
};

struct ConeVerdict {
  ConeStatus status = ConeStatus::Undecided;
  std::optional<Witness> witness;                       // set when Refuted
  std::optional<DecompositionCertificate> certificate;  // set when Certified
  double best_found = 0.0;  // lowest product-state expectation seen
};

// PSD sufficient test: Certified iff min eigenvalue >= -tol::psd_floor,
// otherwise Undecided (PSD alone cannot refute).
ConeVerdict certify_psd(const HermitianOperator& op);

// The registered block-positive primitive 1_{d'}^m - d' Phi_{d'}^m (single
// step, m parties of dimension d'). Block positivity of this family is an
// axiom of the checker; the see-saw minimum 0 is regression-tested.
HermitianOperator known_primitive_bp(int m, int dprime);

struct SeesawParams {
  int restarts = default_restarts;
  int sweeps = default_sweeps;
  std::uint64_t seed = default_seed;
  double improvement_tol = tol::seesaw_improvement;
};

struct SeesawResult {
  double min_value = 0.0;
  ProductPureState state;
  int restart = 0;               // restart that produced the minimum
  std::vector<double> objective_trace;  // per-update objectives, that restart
};

// Multi-restart alternating minimization of the product-state expectation.
// Each restart draws per-party vectors from the complex unit sphere using a
// per-restart stream derived from `seed`, then repeatedly replaces party k's
// vector by the minimal eigenvector of the contracted operator. Restarts run
// in parallel; the merge picks the lowest value, ties toward the lowest
// restart index, so results are deterministic for a fixed seed.
SeesawResult seesaw_min_product(const HermitianOperator& op /*party-major*/,
                                const SeesawParams& params = {});

struct RefuteParams {
  SeesawParams seesaw;
  double margin = tol::refutation_margin;
};

// Refuted with the witnessing product state if the see-saw drops below
// -margin; Undecided otherwise. Accepts either ordering; step-major input is
// regrouped party-major first.
ConeVerdict refute_block_positivity(const HermitianOperator& op,
                                    const RefuteParams& params = {});

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> issues;
};

// Recomputes everything a certificate claims: structural consistency, each
// provenance, and the entrywise reconstruction of the target.
VerifyResult verify_decomposition(const DecompositionCertificate& cert);

// Telescoping of x_l A_l - x_l B_l into K terms
// A_1 x .. x A_{j-1} x (A_j - B_j) x B_{j+1} x .. x B_K; the sum of the
// returned factor lists reproduces the difference exactly. Pairs (A_l, B_l)
// must match in structure; all factors share party dimensions.
std::vector<std::vector<HermitianOperator>> telescope(
    const std::vector<HermitianOperator>& a,
    const std::vector<HermitianOperator>& b);

struct ConeAnalysisParams {
  bool allow_primitives = true;  // accept scaled registered primitives
  RefuteParams refute;
};

// Combined decision procedure: PSD test, then scaled-primitive match (for
// uniform party dimensions), then see-saw refutation. Accepts either
// ordering.
ConeVerdict analyze_block_positivity(const HermitianOperator& op,
                                     const ConeAnalysisParams& params = {});

// Re-checks a verdict from scratch: a Refuted witness must re-evaluate
// negative, a certificate must verify, and no certificate may coexist with
// a refutation. Used by the soundness audit.
VerifyResult audit_verdict(const HermitianOperator& op, const ConeVerdict& v,
                           double margin = tol::refutation_margin);

}  // namespace qseq
