#pragma once

#include <utility>

#include "spinvalve/types.hpp"

namespace spinvalve {

// Two fermionic modes on a 4-dimensional Fock space. The basis is frozen as
// |n1 n2> in the order |00>, |01>, |10>, |11>, i.e. index = 2*n1 + n2.
// Mode 1 carries no string; mode 2 carries the parity string through mode 1:
//   d1 = a (x) I,   d2 = Z (x) a,
// which realizes {d_i, d_j^+} = delta_ij, {d_i, d_j} = 0 exactly.
std::pair<Matrix4, Matrix4> build_annihilators();

// Parity phases exp(+i pi n1) = diag(1,1,-1,-1) and
// exp(-i pi n2) = diag(1,-1,1,-1). On occupation eigenstates the sign of the
// exponent is immaterial; both are their own inverse.
Matrix4 parity_phase_1();
Matrix4 parity_phase_2();

// H = omega (d1^+ d2 + d2^+ d1)
//   + B [ Iq (n1 - 1/2) + Ia (n2 - 1/2) ],   Iq/Ia = +-1/2 per qubit/aux.
// The spectator spins are classical labels, not dynamical degrees of freedom.
Matrix4 build_valve_hamiltonian(const ValveParams& params);

// Hopping operators dressed by the lead contraction:
//   Spin:        T_L = t (d1 + alpha P1 d2),  T_R = t (d2 + alpha P2 d1)
//   FreeFermion: T_L = t (d1 + alpha d2),     T_R = t (d2 + alpha d1)
// For Spin the parity phases cancel the strings: P1 d2 = I (x) a and
// P2 d1 = a (x) Z, so spin cross-hopping is string-free while the fermionic
// variant keeps the string sign.
std::pair<Matrix4, Matrix4> build_jump_operators(const ValveParams& params);

}  // namespace spinvalve
