#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qseq::kernels {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Entry counts below this stay serial; OpenMP overhead dominates otherwise.
inline constexpr long parallel_grain = 1L << 15;

// Kronecker product C[i1*nb+i2, j1*nb+j2] = A(i1,j1)*B(i2,j2).
Matrix kron(const Matrix& a, const Matrix& b);

// Flat-index permutation for reordering tensor factors.
// dims[f] is the dimension of factor f in the *input* layout (factor 0 most
// significant); order[s] names the input factor placed at output slot s.
// Returns perm with perm[input_index] = output_index.
std::vector<long> factor_permutation(const std::vector<long>& dims,
                                     const std::vector<int>& order);

// Similarity transform by a basis permutation: B[perm[i], perm[j]] = A(i, j).
Matrix apply_index_permutation(const Matrix& a, const std::vector<long>& perm);

// Partial quadratic form over all tensor slots except `slot`.
// dims[k] is the dimension of slot k; vectors[j] (j != slot) are unit
// vectors; vectors[slot] is ignored. Returns the dims[slot]-square matrix
//   B[a,b] = <v_0 .. e_a .. v_{m-1}| A |v_0 .. e_b .. v_{m-1}>.
Matrix contract_except(const Matrix& a, const std::vector<long>& dims,
                       const std::vector<Vector>& vectors, int slot);

// Serial reference implementations, kept for correctness tests and for the
// kernel benchmark. Results are bit-identical to the parallel versions.
namespace ref {
Matrix kron(const Matrix& a, const Matrix& b);
Matrix apply_index_permutation(const Matrix& a, const std::vector<long>& perm);
Matrix contract_except(const Matrix& a, const std::vector<long>& dims,
                       const std::vector<Vector>& vectors, int slot);
}  // namespace ref

}  // namespace qseq::kernels
