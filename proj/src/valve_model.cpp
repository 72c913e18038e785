#include "spinvalve/valve_model.hpp"

namespace spinvalve {

void validate(const ValveParams& p) {
    if (!(p.bandwidth > 0.0))
        throw Error("bandwidth must be positive, got " + std::to_string(p.bandwidth));
    if (!(p.t >= 0.0))
        throw Error("t must be non-negative, got " + std::to_string(p.t));
    if (!(p.alpha >= 0.0 && p.alpha < 1.0))
        throw Error("alpha must lie in [0, 1), got " + std::to_string(p.alpha));
    if (!(p.n_left >= 0.0 && p.n_left <= 1.0))
        throw Error("n_left must lie in [0, 1], got " + std::to_string(p.n_left));
    if (!(p.n_right >= 0.0 && p.n_right <= 1.0))
        throw Error("n_right must lie in [0, 1], got " + std::to_string(p.n_right));
}

namespace {

Matrix4 kron2(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B) {
    Matrix4 K;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            K.block<2, 2>(2 * r, 2 * c) = A(r, c) * B;
    return K;
}

const Eigen::Matrix2cd kLower = (Eigen::Matrix2cd() << 0, 1, 0, 0).finished();
const Eigen::Matrix2cd kParity = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();

}  // namespace

std::pair<Matrix4, Matrix4> build_annihilators() {
    return {kron2(kLower, Eigen::Matrix2cd::Identity()), kron2(kParity, kLower)};
}

Matrix4 parity_phase_1() {
    return Vector4(1, 1, -1, -1).asDiagonal();
}

Matrix4 parity_phase_2() {
    return Vector4(1, -1, 1, -1).asDiagonal();
}

Matrix4 build_valve_hamiltonian(const ValveParams& p) {
    validate(p);
    auto [d1, d2] = build_annihilators();
    Matrix4 n1 = d1.adjoint() * d1;
    Matrix4 n2 = d2.adjoint() * d2;
    Matrix4 half = 0.5 * Matrix4::Identity();
    Matrix4 hop = d1.adjoint() * d2 + d2.adjoint() * d1;
    return p.omega * hop + p.big_b * (spin_z(p.qubit) * (n1 - half) + spin_z(p.aux) * (n2 - half));
}

std::pair<Matrix4, Matrix4> build_jump_operators(const ValveParams& p) {
    validate(p);
    auto [d1, d2] = build_annihilators();
    if (p.statistics == Statistics::Spin) {
        return {p.t * (d1 + p.alpha * (parity_phase_1() * d2)),
                p.t * (d2 + p.alpha * (parity_phase_2() * d1))};
    }
    return {p.t * (d1 + p.alpha * d2), p.t * (d2 + p.alpha * d1)};
}

}  // namespace spinvalve
