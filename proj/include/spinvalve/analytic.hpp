#pragma once

#include "spinvalve/types.hpp"

namespace spinvalve {

struct DerivedScales {
    double gamma;        // lead-induced rate t^2 / b
    double omega_tilde;  // renormalized valve coupling
    double delta_n;      // occupation bias n_L - n_R
};

// The renormalization is omega + 2 alpha t^2 (p_L + p_R): the anticommutator
// T^+T + TT^+ carries the cross-hopping term with weight 2 alpha t^2 per lead
// (see the valve-model identity tests), and that is exactly what the
// stationary solution of the generator shifts omega by.
DerivedScales derived_scales(const ValveParams& params);

// Closed form for the magnitude of the stationary spin current into the right
// lead. Exact for the generator built by build_liouvillian (verified to 1e-12
// against the superoperator over both statistics). The qubit/aux states enter
// only through the effective detuning B * (Ia - Iq); equal spectator spins
// leave a uniform shift and no detuning.
double current_closed_form(const ValveParams& params);

// Measurement contrast C = j(no detuning) / j(detuning B). Returns +infinity
// at an exact interference zero of the denominator; throws Indeterminate when
// both currents vanish (e.g. delta_n = 0).
double contrast(const ValveParams& params);

// Detuning at which the direct (alpha t) and two-step (t, omega) transport
// amplitudes cancel: B_int = (1 - alpha^2) omega_tilde / alpha.
// Throws AlphaZero when alpha = 0 (no interference channel).
double interference_coupling(const ValveParams& params);

// Reference dipolar coupling scale B_0 = (8/5)^3 * (b/4) = 1.024 b.
double proton_coupling(double bandwidth);

struct SearchRange {
    double b_min = 1e-3;    // in units of bandwidth
    double b_max = 1e3;
    int points = 512;       // coarse logarithmic grid
    double rel_tol = 1e-8;  // golden-section refinement target
};

struct ContrastOptimum {
    double b_max;         // maximizing coupling
    double c_max;         // contrast there
    double polarization;  // the P this optimum belongs to
};

// Maximizes C(B) at lead polarization P (n_L = (1+P)/2, n_R = (1-P)/2) over a
// logarithmic B grid followed by golden-section refinement. Throws
// BoundaryMaximum when the maximizer sits on the range edge (widen the range;
// expected as P -> 0 where the optimum diverges) and Error for P outside (0,1).
ContrastOptimum optimize_contrast(const ValveParams& params, double polarization,
                                  const SearchRange& search = {});

// Lowest-order transport rate at detuning B (unnormalized):
//   Spin:        |t^2 (omega/B - alpha)|^2   (vanishes at B = omega/alpha)
//   FreeFermion: |t^2 omega/B|^2             (even in B, never vanishes)
// Throws DivisionByZero for B = 0.
double perturbative_rate(const ValveParams& params);

}  // namespace spinvalve
