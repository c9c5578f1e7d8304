#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qseq/kernels.hpp"
#include "qseq/party_structure.hpp"

namespace qseq {

using kernels::Cplx;
using kernels::Matrix;
using kernels::Vector;

// Dense Hermitian operator tagged with its party/step structure and factor
// ordering. Construction symmetrizes (A + A^dag)/2 after checking the input
// is Hermitian within tol::hermiticity.
class HermitianOperator {
 public:
  HermitianOperator(PartyStructure structure, Ordering ordering, Matrix entries);

  const PartyStructure& structure() const { return structure_; }
  Ordering ordering() const { return ordering_; }
  const Matrix& entries() const { return entries_; }
  long dim() const { return entries_.rows(); }
  double trace() const { return entries_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double scale);

 private:
  PartyStructure structure_;
  Ordering ordering_;
  Matrix entries_;
};

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator*(double scale, HermitianOperator a);

// Largest absolute entry of a - b; throws on structure mismatch.
double max_abs_difference(const HermitianOperator& a, const HermitianOperator& b);

// --- constructors -----------------------------------------------------------

HermitianOperator identity(const PartyStructure& structure);
HermitianOperator zero(const PartyStructure& structure);

// m-party d-level GHZ state (1/d) sum_{i,j} |i..i><j..j| (single step).
HermitianOperator ghz(int m, int d);

// Projector |i..i><i..i| onto the i-th all-equal product basis state.
HermitianOperator basis_product_projector(int m, int d, int i);

// --- structure manipulation -------------------------------------------------

// Kronecker product of two step-major operators over the same party dims;
// steps add. This is the "append steps to the sequence" product.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

// Kronecker chain; requires a non-empty list.
HermitianOperator tensor_chain(const std::vector<HermitianOperator>& factors);

// Regrouping between the two factor orderings. Pure subsystem permutation:
// trace, spectrum and Hermiticity are preserved, and the two maps are
// mutually inverse.
HermitianOperator regroup_to_party_major(const HermitianOperator& op);
HermitianOperator regroup_to_step_major(const HermitianOperator& op);

// Step permutation of a step-major operator: output step s takes input step
// sigma[s]. Used to carry cone evidence across permutation-symmetric indices.
HermitianOperator permute_steps(const HermitianOperator& op,
                                const std::vector<int>& sigma);

// Reinterpret the same matrix under a different structure of equal total
// dimension. The caller asserts the factor layouts are compatible (e.g. one
// d^m-dimensional "party" re-read as one step of m d-level parties).
HermitianOperator reinterpret_structure(const HermitianOperator& op,
                                        PartyStructure structure,
                                        Ordering ordering);

// --- product pure states ----------------------------------------------------

// One unit vector per party, each of dimension d_k^L (party-major grouping).
struct ProductPureState {
  PartyStructure structure;
  std::vector<Vector> party_vectors;

  ProductPureState(PartyStructure s, std::vector<Vector> vecs);
  void validate() const;
};

// Full (prod_k d_k^L)-dimensional vector, party-major layout.
Vector full_vector(const ProductPureState& state);

// <psi_1 x..x psi_m| op |psi_1 x..x psi_m> for a party-major operator.
double expectation(const HermitianOperator& op, const ProductPureState& state);

// The d_k^L-square Hermitian matrix <x_{j!=k} psi_j| op |x_{j!=k} psi_j>,
// linear in op. Requires op party-major. Returned as a bare matrix since it
// acts on a single party's space.
Matrix contract_all_but_one(const HermitianOperator& op,
                            const ProductPureState& state, int k);

// --- spectra ----------------------------------------------------------------

struct EigMin {
  double value;
  Vector vector;  // unit eigenvector, residual ||op v - value v|| <= 1e-9
};

EigMin eig_min(const HermitianOperator& op);
EigMin eig_min(const Matrix& hermitian);
double min_eigenvalue(const Matrix& hermitian);
std::vector<double> eigenvalues(const HermitianOperator& op);  // ascending

}  // namespace qseq
