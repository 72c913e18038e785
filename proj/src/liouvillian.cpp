#include "spinvalve/liouvillian.hpp"

#include <cmath>

#include "spinvalve/valve_model.hpp"

namespace spinvalve {

namespace {

Matrix16 kron4(const Matrix4& X, const Matrix4& Y) {
    Matrix16 K;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            K.block<4, 4>(4 * r, 4 * c) = X(r, c) * Y;
    return K;
}

// vec(A rho) and vec(rho A) under column stacking
Matrix16 lmul(const Matrix4& A) { return kron4(Matrix4::Identity(), A); }
Matrix16 rmul(const Matrix4& A) { return kron4(A.transpose(), Matrix4::Identity()); }

// vec(A rho B) = kron(B^T, A) vec(rho)
Matrix16 sandwich(const Matrix4& A, const Matrix4& B) { return kron4(B.transpose(), A); }

Vector16 trace_functional() {
    Vector16 tr = Vector16::Zero();
    for (int k = 0; k < 4; ++k) tr(5 * k) = 1.0;
    return tr;
}

}  // namespace

Matrix16 build_liouvillian(const ValveParams& p, double lambda_left, double lambda_right) {
    validate(p);
    auto [TL, TR] = build_jump_operators(p);
    Matrix4 Heff = build_valve_hamiltonian(p)
                 + p.p_left * (TL.adjoint() * TL + TL * TL.adjoint())
                 + p.p_right * (TR.adjoint() * TR + TR * TR.adjoint());

    Matrix16 L = Complex(0, -1) * (lmul(Heff) - rmul(Heff));

    const double inv_b = 1.0 / p.bandwidth;
    struct LeadTerm {
        const Matrix4& T;
        double n;
        double lambda;
    } leads[2] = {{TL, p.n_left, lambda_left}, {TR, p.n_right, lambda_right}};

    for (const auto& ld : leads) {
        Matrix4 Td = ld.T.adjoint();
        Matrix4 TTd = ld.T * Td;
        Matrix4 TdT = Td * ld.T;
        L -= 0.5 * inv_b
             * (ld.n * (lmul(TTd) + rmul(TTd)) + (1.0 - ld.n) * (lmul(TdT) + rmul(TdT)));
        L += inv_b
             * (ld.n * std::exp(Complex(0, ld.lambda)) * sandwich(Td, ld.T)
                + (1.0 - ld.n) * std::exp(Complex(0, -ld.lambda)) * sandwich(ld.T, Td));
    }
    return L;
}

SteadyStateResult steady_state(const Matrix16& L) {
    Eigen::JacobiSVD<Matrix16> svd(L);
    int null_dim = 0;
    for (int k = 0; k < 16; ++k)
        if (svd.singularValues()(k) <= 1e-10) ++null_dim;
    if (null_dim > 1)
        throw DegenerateSteadyState("stationary state is not unique: kernel dimension "
                                    + std::to_string(null_dim));

    Matrix16 A = L;
    A.row(0) = trace_functional().transpose();
    Vector16 rhs = Vector16::Zero();
    rhs(0) = 1.0;
    Vector16 x = A.partialPivLu().solve(rhs);

    double residual = (L * x).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
        throw NumericalFailure("stationary solve residual " + std::to_string(residual));

    SteadyStateResult result;
    result.rho = Eigen::Map<const Matrix4>(x.data());  // column-major = unstack
    result.residual = residual;
    result.nullspace_dim = null_dim;
    return result;
}

CurrentResult spin_current(const ValveParams& p, Lead lead) {
    SteadyStateResult ss = steady_state(build_liouvillian(p, 0.0, 0.0));
    auto [TL, TR] = build_jump_operators(p);
    const Matrix4& T = (lead == Lead::Left) ? TL : TR;
    double n = (lead == Lead::Left) ? p.n_left : p.n_right;
    Matrix4 Td = T.adjoint();
    double j = ((1.0 - n) * (Td * T * ss.rho).trace() - n * (T * Td * ss.rho).trace()).real()
               / p.bandwidth;
    return {lead, j, std::abs(j), ss};
}

namespace {

Complex dominant_eigenvalue(const Matrix16& L) {
    // The eigenvalue continuously connected to the stationary zero mode is the
    // one of smallest modulus for small counting phases, so inverse power
    // iteration with zero shift homes in on it.
    Eigen::PartialPivLU<Matrix16> lu(L);
    Vector16 x = Vector16::Zero();
    for (int k = 0; k < 4; ++k) x(5 * k) = 0.5;  // vec(I)/2: overlaps the zero mode

    Complex mu_prev(0, 0);
    for (int it = 0; it < 200; ++it) {
        Vector16 y = lu.solve(x);
        y.normalize();
        Complex mu = y.dot(L * y);
        if (it > 0 && std::abs(mu - mu_prev) <= 1e-14 * std::max(1.0, std::abs(mu)))
            return mu;
        mu_prev = mu;
        x = y;
    }
    throw NumericalFailure("inverse power iteration did not converge");
}

}  // namespace

double current_via_eigenvalue(const ValveParams& p, Lead lead, double dlambda) {
    auto mu = [&](double lam) {
        double lamL = (lead == Lead::Left) ? lam : 0.0;
        double lamR = (lead == Lead::Right) ? lam : 0.0;
        return dominant_eigenvalue(build_liouvillian(p, lamL, lamR));
    };
    Complex slope = (mu(dlambda) - mu(-dlambda)) / (2.0 * dlambda);
    return (Complex(0, 1) * slope).real();
}

}  // namespace spinvalve
