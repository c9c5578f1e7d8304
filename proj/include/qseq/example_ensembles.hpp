#pragma once

#include "qseq/ensemble.hpp"

namespace qseq {

// Built-in example families used by the repro command and the test suites.
// `which` is 1-based, matching the state numbering in the file format.

// Example 1: two m-qudit states, a GHZ/identity mixture against the GHZ
// state, with priors 2d^m/(d+3d^m) and (d+d^m)/(d+3d^m).
double example1_prior(int d, int m, int which);
HermitianOperator example1_state(int d, int m, int which);
StateEnsemble example1_step_ensemble(int d, int m);

// The two-step witness operator (1 - d Phi) x (1 + d^m Phi), step-major.
HermitianOperator example1_sequence_operator(int d, int m);

// The product state with each party holding a GHZ pair across its two
// steps; evaluates the operator above to 2 - d - 1/d^(m-1).
ProductPureState example1_sigma(int d, int m);

// Example 2: d all-equal basis projectors, the normalized complement, and
// the GHZ state, with priors 1/(d^m+d), (d^m-d)/(d^m+d), d/(d^m+d).
double example2_prior(int d, int m, int which);
HermitianOperator example2_state(int d, int m, int which);
StateEnsemble example2_step_ensemble(int d, int m);

// R_i = (d^m+d) eta_i rho_i: the basis projectors, the complement, d*Phi.
HermitianOperator example2_R(int d, int m, int which);

// The local-basis measurement: the d basis projectors, the complement, and
// a zero outcome for the GHZ state.
Measurement example2_measurement(int d, int m);

}  // namespace qseq
