#pragma once

#include <cstdint>
#include <vector>

#include "spinvalve/types.hpp"

namespace spinvalve {

// Exact finite-chain cross-check: N bulk spins per lead plus the two valve
// spins, evolved unitarily in the full 2^(2N+2)-dimensional spin space with no
// fermionization anywhere - independence from the master-equation pipeline is
// the point.
struct ChainConfig {
    int n_per_side = 5;       // bulk spins per lead, 2..6 (2N+2 <= 14 spins)
    ValveParams params{};
    double dt = 0.005;        // integrator step, units 1/b
    double t_max = 5.0;
    int samples = 1;          // initial-state draws for partial polarization
    std::uint64_t seed = 12345;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> delta_s_right;  // sum_j <s_j^z>(t) - <s_j^z>(0) over the right lead
    double norm_drift = 0.0;            // max | ||psi|| - 1 | over the samples
    double sz_drift = 0.0;              // max |S^z_total(t) - S^z_total(0)|
};

// Site layout: 0..N-1 left lead (N-1 touches the valve), N and N+1 the valve
// sites, N+2..2N+1 right lead (N+2 touches the valve). Basis state bit k is
// spin k, set = up. XY bonds are stored as amplitudes of s+_p s-_q + h.c.:
// lead bonds b/2, lead-valve t, cross couplings alpha*t, valve bond omega.
// The spectator fields contribute the only diagonal, B (Iq z_N + Ia z_{N+1}).
class ChainHamiltonian {
  public:
    struct Bond {
        int p, q;
        double amplitude;
    };

    explicit ChainHamiltonian(const ChainConfig& config);

    int spins() const { return spins_; }
    Eigen::Index dim() const { return dim_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    double diagonal(Eigen::Index basis_index) const { return diag_[basis_index]; }

    // out = H in, O(bonds * dim)
    void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

    double s_z_right(const Eigen::VectorXcd& psi) const;
    double s_z_total(const Eigen::VectorXcd& psi) const;

  private:
    int n_;
    int spins_;
    Eigen::Index dim_;
    std::vector<Bond> bonds_;
    std::vector<double> diag_;
    std::vector<double> z_right_;
    std::vector<double> z_total_;
};

// Throws SizeExceeded for n_per_side > 6 and Error for n_per_side < 2.
ChainHamiltonian build_chain_hamiltonian(const ChainConfig& config);

// Fixed-step 4th-order integration of |psi(t)> = e^{-iHt} |initial>, recording
// the transferred right-lead spin on the configured time grid. If the norm
// drifts beyond 1e-8 the step is halved and the run retried (up to 3 times)
// before NormDrift is thrown.
Trajectory evolve(const ChainConfig& config, const Eigen::VectorXcd& initial);

// Least-squares slope of delta_s_right over [t1, t2]. Throws WindowInvalid if
// t2 <= t1, the window leaves the trajectory, or fewer than two samples fall
// inside it.
double early_time_current(const Trajectory& traj, double t1, double t2);

struct OracleRun {
    Trajectory mixture;                 // ensemble-averaged transferred spin
    double current;                     // slope of the mixture over the window
    std::vector<double> sample_slopes;  // one slope per lead-configuration draw
};

// Full oracle protocol. Lead sites are drawn as product states with per-site
// up-probability n_eta (deterministic at full polarization); the valve pair is
// prepared in the eigenstates of the master-equation stationary density matrix
// and the (up to four) trajectories combined with its eigenvalues as weights.
// Preparing the valve at its stationary mixture removes the slow valve-filling
// transient, which would otherwise swamp the short pre-recurrence window the
// finite chain offers.
OracleRun oracle_current(const ChainConfig& config, double window_start, double window_end);

}  // namespace spinvalve
