#pragma once

#include <utility>
#include <vector>

#include "qseq/operator.hpp"

namespace qseq {

struct WeightedState {
  double prior;
  HermitianOperator state;
};

// Priors eta_i > 0 summing to 1, states PSD with unit trace. Priors that sum
// to within tol::prior_renorm of 1 are renormalized; anything further off is
// rejected.
class StateEnsemble {
 public:
  StateEnsemble(PartyStructure structure, std::vector<WeightedState> items);

  const PartyStructure& structure() const { return structure_; }
  const std::vector<WeightedState>& items() const { return items_; }
  int size() const { return static_cast<int>(items_.size()); }
  const WeightedState& item(int i) const { return items_[static_cast<size_t>(i)]; }

 private:
  PartyStructure structure_;
  std::vector<WeightedState> items_;
};

// POVM: PSD operators summing to the identity within tol::prior_sum.
class Measurement {
 public:
  Measurement(PartyStructure structure, std::vector<HermitianOperator> operators);

  const PartyStructure& structure() const { return structure_; }
  const std::vector<HermitianOperator>& operators() const { return operators_; }
  int size() const { return static_cast<int>(operators_.size()); }

 private:
  PartyStructure structure_;
  std::vector<HermitianOperator> operators_;
};

// Entries are 0-based: c[l] in {0, .., n_l - 1}. Reports print them 1-based.
using SequenceIndex = std::vector<int>;

// L step ensembles over the same party dimensions; the sequence ensemble is
// their tensor product, materialized lazily per index.
class SequenceEnsemble {
 public:
  explicit SequenceEnsemble(std::vector<StateEnsemble> factors);

  const std::vector<StateEnsemble>& factors() const { return factors_; }
  int steps() const { return static_cast<int>(factors_.size()); }
  std::vector<int> counts() const;              // n_l per step
  PartyStructure sequence_structure() const;    // party dims with L steps

 private:
  std::vector<StateEnsemble> factors_;
};

// Lexicographic enumeration of {0..n_1-1} x .. x {0..n_L-1}.
std::vector<SequenceIndex> enumerate_indices(const std::vector<int>& counts);

// Prior prod_l eta_{c_l} and state x_l rho_{c_l} (step-major).
WeightedState sequence_item(const SequenceEnsemble& se, const SequenceIndex& c);

// Eagerly expands all prod_l n_l items; intended for small cases.
StateEnsemble flatten(const SequenceEnsemble& se);

// Per-step POVMs combined into the product POVM indexed like
// enumerate_indices(counts).
Measurement product_measurement(const std::vector<Measurement>& per_step);

// Average success probability sum_i eta_i Tr(rho_i M_i); operator counts
// must match.
double success_probability(const StateEnsemble& e, const Measurement& m);
double success_probability(const SequenceEnsemble& se, const Measurement& m);

// Largest prior and its index; ties break toward the smallest index.
std::pair<double, int> max_prior(const StateEnsemble& e);
std::pair<double, SequenceIndex> max_prior(const SequenceEnsemble& se);

}  // namespace qseq
