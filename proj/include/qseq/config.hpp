#pragma once

#include <atomic>
#include <cstdint>

namespace qseq {

// Numeric tolerances used throughout. Values are part of the library
// contract; callers that need looser checks pass explicit overrides.
namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double unit_norm = 1e-12;
inline constexpr double psd_floor = 1e-9;        // eigenvalue floor for PSD checks
inline constexpr double dual_psd_floor = 1e-8;   // dual-feasibility eigenvalue floor
inline constexpr double prior_sum = 1e-9;
inline constexpr double prior_renorm = 1e-6;     // renormalize if |sum-1| below this
inline constexpr double refutation_margin = 1e-7;
inline constexpr double seesaw_improvement = 1e-10;
inline constexpr double reconstruction = 1e-9;   // certificate reconstruction mismatch
inline constexpr double slackness = 1e-9;
inline constexpr double solver_default = 1e-6;   // default duality-gap target
inline constexpr double theorem3_equality = 1e-6;
}  // namespace tol

inline constexpr int default_restarts = 32;
inline constexpr int default_sweeps = 200;
inline constexpr int solver_iteration_cap = 10000;
inline constexpr std::uint64_t default_seed = 20240;  // fixed so runs repeat bit-for-bit

// Safety bound on the total Hilbert-space dimension (prod_k d_k)^L.
// Dense storage only; the cap keeps a single operator under ~256 MiB.
int dimension_cap();
void set_dimension_cap(int cap);

}  // namespace qseq
