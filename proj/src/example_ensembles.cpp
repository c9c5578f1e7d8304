#include "qseq/example_ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace qseq {

namespace {

double ipow(int base, int exp) {
  double v = 1.0;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

void require_dm(int d, int m) {
  if (d < 2 || m < 2)
    throw std::invalid_argument("example families need d, m >= 2");
}

}  // namespace

double example1_prior(int d, int m, int which) {
  require_dm(d, m);
  const double dm = ipow(d, m);
  switch (which) {
    case 1: return 2.0 * dm / (d + 3.0 * dm);
    case 2: return (d + dm) / (d + 3.0 * dm);
    default: throw std::invalid_argument("example1 state index must be 1 or 2");
  }
}

HermitianOperator example1_state(int d, int m, int which) {
  require_dm(d, m);
  const double dm = ipow(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d);
  switch (which) {
    case 1: return (1.0 / (2.0 * dm)) * (identity(s) + dm * ghz(m, d));
    case 2: return ghz(m, d);
    default: throw std::invalid_argument("example1 state index must be 1 or 2");
  }
}

StateEnsemble example1_step_ensemble(int d, int m) {
  std::vector<WeightedState> items;
  for (int which = 1; which <= 2; ++which)
    items.push_back({example1_prior(d, m, which), example1_state(d, m, which)});
  return StateEnsemble(PartyStructure::uniform(m, d), std::move(items));
}

HermitianOperator example1_sequence_operator(int d, int m) {
  require_dm(d, m);
  const double dm = ipow(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d);
  const HermitianOperator phi = ghz(m, d);
  return tensor(identity(s) - static_cast<double>(d) * phi,
                identity(s) + dm * phi);
}

ProductPureState example1_sigma(int d, int m) {
  require_dm(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d, 2);
  // Each party holds its two step-qudits in the state sum_i |ii> / sqrt(d).
  Vector v = Vector::Zero(static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i) v(static_cast<long>(i) * d + i) = 1.0 / std::sqrt(d);
  return ProductPureState(s, std::vector<Vector>(static_cast<size_t>(m), v));
}

double example2_prior(int d, int m, int which) {
  require_dm(d, m);
  const double dm = ipow(d, m);
  if (which >= 1 && which <= d) return 1.0 / (dm + d);
  if (which == d + 1) return (dm - d) / (dm + d);
  if (which == d + 2) return d / (dm + d);
  throw std::invalid_argument("example2 state index out of range");
}

HermitianOperator example2_state(int d, int m, int which) {
  require_dm(d, m);
  const double dm = ipow(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d);
  if (which >= 1 && which <= d) return basis_product_projector(m, d, which - 1);
  if (which == d + 1) {
    HermitianOperator complement = identity(s);
    for (int j = 0; j < d; ++j) complement -= basis_product_projector(m, d, j);
    return (1.0 / (dm - d)) * complement;
  }
  if (which == d + 2) return ghz(m, d);
  throw std::invalid_argument("example2 state index out of range");
}

StateEnsemble example2_step_ensemble(int d, int m) {
  std::vector<WeightedState> items;
  for (int which = 1; which <= d + 2; ++which)
    items.push_back({example2_prior(d, m, which), example2_state(d, m, which)});
  return StateEnsemble(PartyStructure::uniform(m, d), std::move(items));
}

HermitianOperator example2_R(int d, int m, int which) {
  require_dm(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d);
  if (which >= 1 && which <= d) return basis_product_projector(m, d, which - 1);
  if (which == d + 1) {
    HermitianOperator complement = identity(s);
    for (int j = 0; j < d; ++j) complement -= basis_product_projector(m, d, j);
    return complement;
  }
  if (which == d + 2) return static_cast<double>(d) * ghz(m, d);
  throw std::invalid_argument("example2 operator index out of range");
}

Measurement example2_measurement(int d, int m) {
  require_dm(d, m);
  const PartyStructure s = PartyStructure::uniform(m, d);
  std::vector<HermitianOperator> outcomes;
  for (int i = 0; i < d; ++i) outcomes.push_back(basis_product_projector(m, d, i));
  HermitianOperator complement = identity(s);
  for (int j = 0; j < d; ++j) complement -= basis_product_projector(m, d, j);
  outcomes.push_back(std::move(complement));
  outcomes.push_back(zero(s));
  return Measurement(s, std::move(outcomes));
}

}  // namespace qseq
