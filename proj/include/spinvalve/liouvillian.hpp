#pragma once

#include "spinvalve/types.hpp"

namespace spinvalve {

// Generator of the valve's reduced dynamics on column-stacked 4x4 density
// matrices (column index fastest), with counting phases lambda_L/lambda_R
// attached to the lead-exchange terms:
//
//   L[rho] = -i [H + sum_eta p_eta (T^+T + TT^+), rho]
//            - 1/(2b) sum_eta { n_eta (TT^+ rho + rho TT^+)
//                             + (1-n_eta)(T^+T rho + rho T^+T) }
//            + 1/b sum_eta { n_eta e^{+i lambda} T^+ rho T
//                          + (1-n_eta) e^{-i lambda} T rho T^+ }.
//
// At lambda = 0 this is a trace-preserving Lindblad generator.
Matrix16 build_liouvillian(const ValveParams& params, double lambda_left, double lambda_right);

struct SteadyStateResult {
    Matrix4 rho;        // stationary density matrix, trace 1
    double residual;    // max |(L vec(rho))_k| after the solve
    int nullspace_dim;  // kernel dimension of L at singular-value tolerance 1e-10
};

// Stationary state of the lambda = 0 generator. Solves the 16-dimensional
// system with one row replaced by the trace constraint (partial-pivoting LU).
// Throws DegenerateSteadyState when the kernel is not one-dimensional
// (e.g. t = 0) and NumericalFailure when the residual exceeds 1e-8.
SteadyStateResult steady_state(const Matrix16& liouvillian);

struct CurrentResult {
    Lead lead;
    double signed_current;      // positive = net spin entering the named lead
    double magnitude;           // |signed_current|
    SteadyStateResult steady;   // diagnostics of the underlying solve
};

// Mean stationary spin current into the given lead,
//   j = i Tr[(dL/dlambda_eta)|_0 rho_ss]
//     = (1/b) Tr[(1-n_eta) T rho T^+  -  n_eta T^+ rho T].
CurrentResult spin_current(const ValveParams& params, Lead lead);

// Independent extraction: central finite difference of the generator's
// dominant eigenvalue mu(lambda), located by inverse power iteration with
// zero shift (the eigenvalue continuously connected to the stationary zero
// mode). Returns Re[i (mu(+d) - mu(-d)) / (2d)]; agrees with spin_current
// within max(1e-6, 10 dlambda^2). Throws NumericalFailure if the iteration
// does not converge.
double current_via_eigenvalue(const ValveParams& params, Lead lead, double dlambda = 1e-5);

}  // namespace spinvalve
