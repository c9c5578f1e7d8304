#include "qseq/party_structure.hpp"

#include <sstream>

namespace qseq {

PartyStructure::PartyStructure(std::vector<int> dims, int L)
    : party_dims(std::move(dims)), steps(L) {
  validate();
}

PartyStructure PartyStructure::uniform(int m, int d, int L) {
  return PartyStructure(std::vector<int>(static_cast<size_t>(m), d), L);
}

long PartyStructure::step_dim() const {
  long dim = 1;
  for (int d : party_dims) dim *= d;
  return dim;
}

long PartyStructure::total_dim() const {
  long dim = 1;
  for (int l = 0; l < steps; ++l) dim *= step_dim();
  return dim;
}

long PartyStructure::party_dim(int k) const {
  if (k < 0 || k >= parties())
    throw std::invalid_argument("party index out of range");
  long dim = 1;
  for (int l = 0; l < steps; ++l) dim *= party_dims[static_cast<size_t>(k)];
  return dim;
}

bool PartyStructure::same_party_dims(const PartyStructure& other) const {
  return party_dims == other.party_dims;
}

void PartyStructure::validate() const {
  if (parties() < 2)
    throw std::invalid_argument("need at least two parties, got " +
                                std::to_string(parties()));
  for (int d : party_dims)
    if (d < 2)
      throw std::invalid_argument("party dimensions must be >= 2, got " +
                                  std::to_string(d));
  if (steps < 1)
    throw std::invalid_argument("step count must be >= 1, got " +
                                std::to_string(steps));

  // Overflow-safe cap check: multiply step by step against the cap.
  const long cap = dimension_cap();
  long dim = 1;
  for (int l = 0; l < steps; ++l) {
    for (int d : party_dims) {
      if (dim > cap / d)
        throw std::invalid_argument("total dimension exceeds the cap of " +
                                    std::to_string(cap) + " (" +
                                    to_string(*this) + ")");
      dim *= d;
    }
  }
}

std::string to_string(const PartyStructure& s) {
  std::ostringstream os;
  os << "parties(";
  for (size_t k = 0; k < s.party_dims.size(); ++k)
    os << (k ? "," : "") << s.party_dims[k];
  os << ") steps " << s.steps;
  return os.str();
}

}  // namespace qseq
