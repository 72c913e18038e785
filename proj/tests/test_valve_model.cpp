#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinvalve/valve_model.hpp"

using namespace spinvalve;

namespace {

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

Matrix4 anticomm(const Matrix4& x, const Matrix4& y) { return x * y + y * x; }

}  // namespace

TEST_CASE("annihilators obey the canonical anticommutation algebra exactly") {
    auto [d1, d2] = build_annihilators();
    Matrix4 I = Matrix4::Identity();

    CHECK(max_abs(anticomm(d1, d1.adjoint()) - I) == 0.0);
    CHECK(max_abs(anticomm(d2, d2.adjoint()) - I) == 0.0);
    CHECK(max_abs(anticomm(d1, d2)) == 0.0);
    CHECK(max_abs(anticomm(d1, d2.adjoint())) == 0.0);
    CHECK(max_abs(anticomm(d2, d1.adjoint())) == 0.0);
    CHECK(max_abs(d1 * d1) == 0.0);
    CHECK(max_abs(d2 * d2) == 0.0);
}

TEST_CASE("matrix representation is frozen: |00>,|01>,|10>,|11> with string on mode 2") {
    auto [d1, d2] = build_annihilators();

    Matrix4 d1_expect = Matrix4::Zero();
    d1_expect(0, 2) = 1;
    d1_expect(1, 3) = 1;
    Matrix4 d2_expect = Matrix4::Zero();
    d2_expect(0, 1) = 1;
    d2_expect(2, 3) = -1;  // string sign from occupied mode 1

    CHECK(max_abs(d1 - d1_expect) == 0.0);
    CHECK(max_abs(d2 - d2_expect) == 0.0);

    CHECK(max_abs(parity_phase_1() - Matrix4(Vector4(1, 1, -1, -1).asDiagonal())) == 0.0);
    CHECK(max_abs(parity_phase_2() - Matrix4(Vector4(1, -1, 1, -1).asDiagonal())) == 0.0);
}

TEST_CASE("valve hamiltonian is hermitian with the expected spectra") {
    ValveParams p;  // silicon defaults, B = 0
    Matrix4 H = build_valve_hamiltonian(p);
    CHECK(max_abs(H - H.adjoint()) == 0.0);

    // B = 0: single-excitation doublet at +-omega, empty/full states at 0
    Eigen::SelfAdjointEigenSolver<Matrix4> es(H);
    Eigen::Vector4d w = es.eigenvalues();
    CHECK(w(0) == doctest::Approx(-0.125).epsilon(1e-14));
    CHECK(w(1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w(2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w(3) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("qubit up + aux up turns the field into a uniform per-sector shift") {
    ValveParams p;
    p.qubit = SpinState::Up;
    p.aux = SpinState::Up;
    p.big_b = 0.7;
    Matrix4 shifted = build_valve_hamiltonian(p);
    p.big_b = 0.0;
    Matrix4 base = build_valve_hamiltonian(p);

    auto [d1, d2] = build_annihilators();
    Matrix4 number = d1.adjoint() * d1 + d2.adjoint() * d2;
    Matrix4 expect = 0.5 * 0.7 * (number - Matrix4::Identity());
    CHECK(max_abs(shifted - base - expect) < 1e-15);
}

TEST_CASE("qubit down + aux up detunes the single-excitation doublet by exactly B") {
    ValveParams p;
    p.omega = 0.0;
    p.big_b = 0.7;
    Matrix4 H = build_valve_hamiltonian(p);
    // diagonal: |01> at +B/2, |10> at -B/2
    CHECK(H(1, 1).real() == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(H(2, 2).real() == doctest::Approx(-0.35).epsilon(1e-15));
    CHECK(H(1, 1).real() - H(2, 2).real() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("jump operators: limits and the frozen cross-term sign") {
    ValveParams p;  // t = alpha = 0.125

    SUBCASE("alpha = 0 reduces to bare hopping") {
        p.alpha = 0.0;
        auto [TL, TR] = build_jump_operators(p);
        auto [d1, d2] = build_annihilators();
        CHECK(max_abs(TL - 0.125 * d1) == 0.0);
        CHECK(max_abs(TR - 0.125 * d2) == 0.0);
    }

    SUBCASE("t = 0 kills both operators") {
        p.t = 0.0;
        auto [TL, TR] = build_jump_operators(p);
        CHECK(max_abs(TL) == 0.0);
        CHECK(max_abs(TR) == 0.0);
    }

    SUBCASE("operators are linear in t") {
        auto [TL1, TR1] = build_jump_operators(p);
        p.t = 0.25;
        auto [TL2, TR2] = build_jump_operators(p);
        CHECK(max_abs(TL2 - 2.0 * TL1) == 0.0);
        CHECK(max_abs(TR2 - 2.0 * TR1) == 0.0);
    }

    SUBCASE("<10|T_L|11>: parity phase cancels the string for Spin, keeps it for FreeFermion") {
        // d2|11> = -|10>; the mode-1 parity contributes another (-1) only for Spin.
        auto [TLs, TRs] = build_jump_operators(p);
        CHECK(TLs(2, 3) == Complex(0.015625, 0.0));
        p.statistics = Statistics::FreeFermion;
        auto [TLf, TRf] = build_jump_operators(p);
        CHECK(TLf(2, 3) == Complex(-0.015625, 0.0));
        (void)TRs;
        (void)TRf;
    }
}

TEST_CASE("anticommutator sum: flat for FreeFermion, hopping-shifted for Spin") {
    ValveParams p;
    p.t = 1.0;
    p.alpha = 0.3;
    auto [d1, d2] = build_annihilators();
    Matrix4 hop = d1.adjoint() * d2 + d2.adjoint() * d1;
    Matrix4 flat = (1.0 + 0.09) * Matrix4::Identity();

    p.statistics = Statistics::FreeFermion;
    auto [FL, FR] = build_jump_operators(p);
    CHECK(max_abs(FL.adjoint() * FL + FL * FL.adjoint() - flat) < 1e-14);
    CHECK(max_abs(FR.adjoint() * FR + FR * FR.adjoint() - flat) < 1e-14);

    // The Spin variant picks up 2 alpha t^2 (d1^+ d2 + h.c.): the term that
    // renormalizes the valve coupling in the stationary current.
    p.statistics = Statistics::Spin;
    auto [SL, SR] = build_jump_operators(p);
    Matrix4 shifted = flat + 2.0 * 0.3 * hop;
    CHECK(max_abs(SL.adjoint() * SL + SL * SL.adjoint() - shifted) < 1e-14);
    CHECK(max_abs(SR.adjoint() * SR + SR * SR.adjoint() - shifted) < 1e-14);
}

TEST_CASE("parameter validation") {
    ValveParams p;

    p.alpha = 1.0;
    CHECK_THROWS_AS(build_jump_operators(p), Error);
    p.alpha = 0.999;
    CHECK_NOTHROW(build_jump_operators(p));

    p = ValveParams{};
    p.bandwidth = 0.0;
    CHECK_THROWS_AS(build_valve_hamiltonian(p), Error);

    p = ValveParams{};
    p.n_left = 1.5;
    CHECK_THROWS_AS(build_valve_hamiltonian(p), Error);

    p = ValveParams{};
    p.t = -0.1;
    CHECK_THROWS_AS(build_jump_operators(p), Error);
}
