#include "spinvalve/chain_oracle.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "spinvalve/liouvillian.hpp"

namespace spinvalve {

ChainHamiltonian::ChainHamiltonian(const ChainConfig& cfg) : n_(cfg.n_per_side) {
    if (n_ > 6)
        throw SizeExceeded("n_per_side = " + std::to_string(n_)
                           + " exceeds 6 (more than 14 spins)");
    if (n_ < 2) throw Error("n_per_side must be at least 2");
    validate(cfg.params);

    const ValveParams& p = cfg.params;
    const int N = n_;
    spins_ = 2 * N + 2;
    dim_ = Eigen::Index(1) << spins_;

    for (int i = 0; i + 1 < N; ++i) {
        bonds_.push_back({i, i + 1, 0.5 * p.bandwidth});
        bonds_.push_back({N + 2 + i, N + 3 + i, 0.5 * p.bandwidth});
    }
    bonds_.push_back({N - 1, N, p.t});
    bonds_.push_back({N - 1, N + 1, p.alpha * p.t});
    bonds_.push_back({N, N + 1, p.omega});
    bonds_.push_back({N + 1, N + 2, p.t});
    bonds_.push_back({N, N + 2, p.alpha * p.t});

    diag_.resize(dim_);
    z_right_.resize(dim_);
    z_total_.resize(dim_);
    const std::uint64_t right_mask = ((std::uint64_t(1) << N) - 1) << (N + 2);
    for (Eigen::Index s = 0; s < dim_; ++s) {
        auto u = std::uint64_t(s);
        double z1 = (u >> N & 1) ? 0.5 : -0.5;
        double z2 = (u >> (N + 1) & 1) ? 0.5 : -0.5;
        diag_[s] = p.big_b * (spin_z(p.qubit) * z1 + spin_z(p.aux) * z2);
        z_right_[s] = 0.5 * (2.0 * std::popcount(u & right_mask) - N);
        z_total_[s] = 0.5 * (2.0 * std::popcount(u) - spins_);
    }
}

void ChainHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.resize(dim_);
    for (Eigen::Index s = 0; s < dim_; ++s) out(s) = diag_[s] * in(s);
    for (const Bond& b : bonds_) {
        const Eigen::Index mask = (Eigen::Index(1) << b.p) | (Eigen::Index(1) << b.q);
        for (Eigen::Index s = 0; s < dim_; ++s) {
            if (((s >> b.p) ^ (s >> b.q)) & 1) out(s ^ mask) += b.amplitude * in(s);
        }
    }
}

double ChainHamiltonian::s_z_right(const Eigen::VectorXcd& psi) const {
    double acc = 0.0;
    for (Eigen::Index s = 0; s < dim_; ++s) acc += std::norm(psi(s)) * z_right_[s];
    return acc;
}

double ChainHamiltonian::s_z_total(const Eigen::VectorXcd& psi) const {
    double acc = 0.0;
    for (Eigen::Index s = 0; s < dim_; ++s) acc += std::norm(psi(s)) * z_total_[s];
    return acc;
}

ChainHamiltonian build_chain_hamiltonian(const ChainConfig& config) {
    return ChainHamiltonian(config);
}

namespace {

Trajectory integrate(const ChainHamiltonian& H, const Eigen::VectorXcd& initial, double dt_out,
                     long out_steps, int refine) {
    const double dt = dt_out / refine;
    const Eigen::Index dim = H.dim();
    Eigen::VectorXcd psi = initial.normalized();
    Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), h(dim);
    const Complex mi(0, -1);

    Trajectory traj;
    traj.times.reserve(out_steps + 1);
    traj.delta_s_right.reserve(out_steps + 1);
    const double sr0 = H.s_z_right(psi);
    const double sz0 = H.s_z_total(psi);
    traj.times.push_back(0.0);
    traj.delta_s_right.push_back(0.0);

    for (long k = 1; k <= out_steps * refine; ++k) {
        H.apply(psi, h);
        k1 = mi * h;
        stage = psi + (0.5 * dt) * k1;
        H.apply(stage, h);
        k2 = mi * h;
        stage = psi + (0.5 * dt) * k2;
        H.apply(stage, h);
        k3 = mi * h;
        stage = psi + dt * k3;
        H.apply(stage, h);
        k4 = mi * h;
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (k % refine == 0) {
            traj.times.push_back(double(k / refine) * dt_out);
            traj.delta_s_right.push_back(H.s_z_right(psi) - sr0);
            traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
            traj.sz_drift = std::max(traj.sz_drift, std::abs(H.s_z_total(psi) - sz0));
        }
    }
    return traj;
}

}  // namespace

Trajectory evolve(const ChainConfig& cfg, const Eigen::VectorXcd& initial) {
    ChainHamiltonian H(cfg);
    if (initial.size() != H.dim())
        throw Error("initial state has dimension " + std::to_string(initial.size())
                    + ", expected " + std::to_string(H.dim()));
    if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0)) throw Error("dt and t_max must be positive");
    const long out_steps = std::lround(cfg.t_max / cfg.dt);
    if (out_steps < 1) throw Error("t_max shorter than one step");

    for (int attempt = 0; attempt <= 3; ++attempt) {
        Trajectory traj = integrate(H, initial, cfg.dt, out_steps, 1 << attempt);
        if (traj.norm_drift < 1e-8) return traj;
    }
    throw NormDrift("norm drift above 1e-8 even after 3 step halvings");
}

double early_time_current(const Trajectory& traj, double t1, double t2) {
    if (!(t2 > t1)) throw WindowInvalid("window end must exceed window start");
    if (traj.times.empty() || t2 > traj.times.back() * (1.0 + 1e-12) + 1e-12)
        throw WindowInvalid("window extends past the end of the trajectory");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long m = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double x = traj.times[i];
        if (x < t1 || x > t2) continue;
        double y = traj.delta_s_right[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw WindowInvalid("window contains fewer than two samples");
    double denom = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / denom;
}

OracleRun oracle_current(const ChainConfig& cfg, double window_start, double window_end) {
    if (!(window_end > window_start)) throw WindowInvalid("window end must exceed window start");
    if (window_end > cfg.t_max * (1.0 + 1e-12))
        throw WindowInvalid("window extends past t_max");
    if (cfg.samples < 1) throw Error("samples must be at least 1");

    // Valve preparation: eigenstates of the stationary density matrix. The
    // Fock basis |n1 n2> maps onto the two valve spins as bit N = n1,
    // bit N+1 = n2; on this two-site subspace the mapping carries no string
    // signs, so amplitudes transfer verbatim.
    SteadyStateResult ss = steady_state(build_liouvillian(cfg.params, 0.0, 0.0));
    Matrix4 rho = 0.5 * (ss.rho + ss.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4> es(rho);

    const int N = cfg.n_per_side;
    ChainHamiltonian H(cfg);

    OracleRun run;
    run.sample_slopes.reserve(cfg.samples);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int draw = 0; draw < cfg.samples; ++draw) {
        std::mt19937_64 rng(cfg.seed + std::uint64_t(draw));
        Eigen::Index lead_mask = 0;
        for (int i = 0; i < N; ++i)
            if (unit(rng) < cfg.params.n_left) lead_mask |= Eigen::Index(1) << i;
        for (int i = 0; i < N; ++i)
            if (unit(rng) < cfg.params.n_right) lead_mask |= Eigen::Index(1) << (N + 2 + i);

        Trajectory draw_traj;
        for (int k = 0; k < 4; ++k) {
            double w = es.eigenvalues()(k);
            if (w < 1e-12) continue;
            Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(H.dim());
            for (int n1 = 0; n1 < 2; ++n1)
                for (int n2 = 0; n2 < 2; ++n2) {
                    Eigen::Index s = lead_mask | (Eigen::Index(n1) << N)
                                     | (Eigen::Index(n2) << (N + 1));
                    psi(s) = es.eigenvectors()(2 * n1 + n2, k);
                }
            Trajectory t = evolve(cfg, psi);
            if (draw_traj.times.empty()) {
                draw_traj.times = t.times;
                draw_traj.delta_s_right.assign(t.times.size(), 0.0);
            }
            for (std::size_t i = 0; i < t.delta_s_right.size(); ++i)
                draw_traj.delta_s_right[i] += w * t.delta_s_right[i];
            draw_traj.norm_drift = std::max(draw_traj.norm_drift, t.norm_drift);
            draw_traj.sz_drift = std::max(draw_traj.sz_drift, t.sz_drift);
        }

        run.sample_slopes.push_back(early_time_current(draw_traj, window_start, window_end));
        if (run.mixture.times.empty()) {
            run.mixture.times = draw_traj.times;
            run.mixture.delta_s_right.assign(draw_traj.times.size(), 0.0);
        }
        const double inv_s = 1.0 / cfg.samples;
        for (std::size_t i = 0; i < draw_traj.delta_s_right.size(); ++i)
            run.mixture.delta_s_right[i] += inv_s * draw_traj.delta_s_right[i];
        run.mixture.norm_drift = std::max(run.mixture.norm_drift, draw_traj.norm_drift);
        run.mixture.sz_drift = std::max(run.mixture.sz_drift, draw_traj.sz_drift);
    }

    run.current = early_time_current(run.mixture, window_start, window_end);
    return run;
}

}  // namespace spinvalve
