#include "qseq/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qseq {

namespace {

void check_state(const WeightedState& ws, int i) {
  if (ws.prior <= 0.0)
    throw std::invalid_argument("state " + std::to_string(i) +
                                ": prior must be positive");
  const double mineig = min_eigenvalue(ws.state.entries());
  if (mineig < -tol::psd_floor)
    throw std::invalid_argument("state " + std::to_string(i) +
                                " is not PSD (min eigenvalue " +
                                std::to_string(mineig) + ")");
  if (std::abs(ws.state.trace() - 1.0) > tol::prior_sum)
    throw std::invalid_argument("state " + std::to_string(i) +
                                " has trace " + std::to_string(ws.state.trace()));
}

}  // namespace

StateEnsemble::StateEnsemble(PartyStructure structure,
                             std::vector<WeightedState> items)
    : structure_(std::move(structure)), items_(std::move(items)) {
  structure_.validate();
  if (items_.empty()) throw std::invalid_argument("ensemble has no states");

  double sum = 0.0;
  for (size_t i = 0; i < items_.size(); ++i) {
    const WeightedState& ws = items_[i];
    if (!(ws.state.structure() == structure_))
      throw std::invalid_argument("state " + std::to_string(i) +
                                  " structure differs from the ensemble");
    check_state(ws, static_cast<int>(i));
    sum += ws.prior;
  }
  if (std::abs(sum - 1.0) > tol::prior_renorm)
    throw std::invalid_argument("priors sum to " + std::to_string(sum));
  if (std::abs(sum - 1.0) > tol::prior_sum)
    for (WeightedState& ws : items_) ws.prior /= sum;
}

Measurement::Measurement(PartyStructure structure,
                         std::vector<HermitianOperator> operators)
    : structure_(std::move(structure)), operators_(std::move(operators)) {
  structure_.validate();
  if (operators_.empty()) throw std::invalid_argument("measurement has no outcomes");

  Matrix sum = Matrix::Zero(structure_.total_dim(), structure_.total_dim());
  for (size_t i = 0; i < operators_.size(); ++i) {
    const HermitianOperator& m = operators_[i];
    if (!(m.structure() == structure_))
      throw std::invalid_argument("outcome " + std::to_string(i) +
                                  " structure differs from the measurement");
    const double mineig = min_eigenvalue(m.entries());
    if (mineig < -tol::psd_floor)
      throw std::invalid_argument("outcome " + std::to_string(i) +
                                  " is not PSD (min eigenvalue " +
                                  std::to_string(mineig) + ")");
    sum += m.entries();
  }
  const double dev =
      (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
  if (dev > tol::prior_sum)
    throw std::invalid_argument("outcomes do not resolve the identity (max "
                                "deviation " + std::to_string(dev) + ")");
}

SequenceEnsemble::SequenceEnsemble(std::vector<StateEnsemble> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("sequence has no steps");
  for (size_t l = 1; l < factors_.size(); ++l)
    if (!factors_[l].structure().same_party_dims(factors_[0].structure()) ||
        factors_[l].structure().steps != factors_[0].structure().steps)
      throw std::invalid_argument("step " + std::to_string(l) +
                                  " structure differs from step 0");
}

std::vector<int> SequenceEnsemble::counts() const {
  std::vector<int> n(factors_.size());
  for (size_t l = 0; l < factors_.size(); ++l) n[l] = factors_[l].size();
  return n;
}

PartyStructure SequenceEnsemble::sequence_structure() const {
  const PartyStructure& step = factors_[0].structure();
  return PartyStructure(step.party_dims, step.steps * steps());
}

std::vector<SequenceIndex> enumerate_indices(const std::vector<int>& counts) {
  long total = 1;
  for (int n : counts) {
    if (n < 1) throw std::invalid_argument("enumerate_indices: count < 1");
    total *= n;
  }
  std::vector<SequenceIndex> out;
  out.reserve(static_cast<size_t>(total));
  SequenceIndex c(counts.size(), 0);
  for (long i = 0; i < total; ++i) {
    out.push_back(c);
    for (size_t l = counts.size(); l-- > 0;) {
      if (++c[l] < counts[l]) break;
      c[l] = 0;
    }
  }
  return out;
}

WeightedState sequence_item(const SequenceEnsemble& se, const SequenceIndex& c) {
  if (static_cast<int>(c.size()) != se.steps())
    throw std::invalid_argument("sequence index has wrong length");
  for (int l = 0; l < se.steps(); ++l)
    if (c[static_cast<size_t>(l)] < 0 ||
        c[static_cast<size_t>(l)] >= se.factors()[static_cast<size_t>(l)].size())
      throw std::invalid_argument("sequence index entry " + std::to_string(l) +
                                  " out of range");

  const WeightedState& first =
      se.factors()[0].item(c[0]);
  double prior = first.prior;
  HermitianOperator state = first.state;
  for (int l = 1; l < se.steps(); ++l) {
    const WeightedState& ws =
        se.factors()[static_cast<size_t>(l)].item(c[static_cast<size_t>(l)]);
    prior *= ws.prior;
    state = tensor(state, ws.state);
  }
  return {prior, std::move(state)};
}

StateEnsemble flatten(const SequenceEnsemble& se) {
  std::vector<WeightedState> items;
  for (const SequenceIndex& c : enumerate_indices(se.counts()))
    items.push_back(sequence_item(se, c));
  return StateEnsemble(se.sequence_structure(), std::move(items));
}

Measurement product_measurement(const std::vector<Measurement>& per_step) {
  if (per_step.empty())
    throw std::invalid_argument("product_measurement: no step measurements");
  std::vector<int> counts(per_step.size());
  for (size_t l = 0; l < per_step.size(); ++l) {
    counts[l] = per_step[l].size();
    if (!per_step[l].structure().same_party_dims(per_step[0].structure()) ||
        per_step[l].structure().steps != per_step[0].structure().steps)
      throw std::invalid_argument("step " + std::to_string(l) +
                                  " measurement structure differs from step 0");
  }

  const PartyStructure& step = per_step[0].structure();
  PartyStructure combined(step.party_dims,
                          step.steps * static_cast<int>(per_step.size()));
  std::vector<HermitianOperator> ops;
  for (const SequenceIndex& c : enumerate_indices(counts)) {
    HermitianOperator m = per_step[0].operators()[static_cast<size_t>(c[0])];
    for (size_t l = 1; l < per_step.size(); ++l)
      m = tensor(m, per_step[l].operators()[static_cast<size_t>(c[l])]);
    ops.push_back(std::move(m));
  }
  return Measurement(std::move(combined), std::move(ops));
}

double success_probability(const StateEnsemble& e, const Measurement& m) {
  if (m.size() != e.size())
    throw std::invalid_argument("measurement has " + std::to_string(m.size()) +
                                " outcomes for " + std::to_string(e.size()) +
                                " states");
  if (!(m.structure() == e.structure()))
    throw std::invalid_argument("success_probability: structure mismatch");
  double p = 0.0;
  for (int i = 0; i < e.size(); ++i)
    p += e.item(i).prior *
         (e.item(i).state.entries() * m.operators()[static_cast<size_t>(i)].entries())
             .trace()
             .real();
  return p;
}

double success_probability(const SequenceEnsemble& se, const Measurement& m) {
  const auto indices = enumerate_indices(se.counts());
  if (m.size() != static_cast<int>(indices.size()))
    throw std::invalid_argument("measurement outcome count does not match the "
                                "sequence index set");
  double p = 0.0;
  for (size_t i = 0; i < indices.size(); ++i) {
    const WeightedState ws = sequence_item(se, indices[i]);
    if (!(ws.state.structure() == m.structure()))
      throw std::invalid_argument("success_probability: structure mismatch");
    p += ws.prior * (ws.state.entries() * m.operators()[i].entries()).trace().real();
  }
  return p;
}

std::pair<double, int> max_prior(const StateEnsemble& e) {
  double best = -1.0;
  int arg = 0;
  for (int i = 0; i < e.size(); ++i)
    if (e.item(i).prior > best) {
      best = e.item(i).prior;
      arg = i;
    }
  return {best, arg};
}

std::pair<double, SequenceIndex> max_prior(const SequenceEnsemble& se) {
  double best = 1.0;
  SequenceIndex arg(static_cast<size_t>(se.steps()));
  for (int l = 0; l < se.steps(); ++l) {
    const auto [value, index] = max_prior(se.factors()[static_cast<size_t>(l)]);
    best *= value;
    arg[static_cast<size_t>(l)] = index;
  }
  return {best, arg};
}

}  // namespace qseq
