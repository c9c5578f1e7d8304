#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qseq/config.hpp"

namespace qseq {

// How the tensor factors of an L-step, m-party space are laid out.
//
//   StepMajor : (step 1: party 1..m)(step 2: party 1..m)...  -- the order in
//               which sequence states are built, one step at a time.
//   PartyMajor: (party 1: step 1..L)(party 2: step 1..L)...  -- the order in
//               which each party sees its own subsystems; separability and
//               block positivity are always judged in this grouping.
enum class Ordering { StepMajor, PartyMajor };

// Local dimensions d_1..d_m shared by every step, plus the step count L.
// Total dimension is (prod_k d_k)^L and must stay under the configured cap.
struct PartyStructure {
  std::vector<int> party_dims;
  int steps = 1;

  PartyStructure() = default;
  PartyStructure(std::vector<int> dims, int L);

  // m parties, all of the same dimension d.
  static PartyStructure uniform(int m, int d, int L = 1);

  int parties() const { return static_cast<int>(party_dims.size()); }
  long step_dim() const;              // prod_k d_k
  long total_dim() const;             // step_dim()^L
  long party_dim(int k) const;        // d_k^L, the party-major block size

  bool same_party_dims(const PartyStructure& other) const;
  void validate() const;              // throws std::invalid_argument

  bool operator==(const PartyStructure&) const = default;
};

std::string to_string(const PartyStructure& s);

}  // namespace qseq
