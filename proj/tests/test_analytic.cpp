#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spinvalve/analytic.hpp"
#include "spinvalve/liouvillian.hpp"

using namespace spinvalve;

namespace {

ValveParams silicon() { return ValveParams{}; }  // defaults are the silicon point

ValveParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ValveParams p;
    p.t = 0.01 + 0.29 * unit(rng);
    p.omega = 0.01 + 0.29 * unit(rng);
    p.big_b = -3.0 + 6.0 * unit(rng);
    p.alpha = 0.5 * unit(rng);
    p.n_left = unit(rng);
    p.n_right = unit(rng);
    p.statistics = unit(rng) < 0.5 ? Statistics::Spin : Statistics::FreeFermion;
    return p;
}

}  // namespace

TEST_CASE("derived scales at the default working point") {
    DerivedScales s = derived_scales(silicon());
    CHECK(s.gamma == doctest::Approx(0.015625).epsilon(1e-15));
    CHECK(s.omega_tilde == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(s.delta_n == doctest::Approx(1.0).epsilon(1e-15));

    ValveParams p = silicon();
    p.p_left = 0.05;
    p.p_right = 0.02;
    s = derived_scales(p);
    // omega + 2 alpha t^2 (pL + pR)
    CHECK(s.omega_tilde ==
          doctest::Approx(0.125 + 2.0 * 0.125 * 0.015625 * 0.07).epsilon(1e-15));
}

TEST_CASE("renormalized coupling carries the principal-value shifts exactly") {
    // the 2-alpha weight is forced by agreement with the full generator
    ValveParams p = silicon();
    p.p_left = 0.05;
    p.p_right = 0.02;
    p.big_b = 0.3;
    double closed = current_closed_form(p);
    double direct = spin_current(p, Lead::Right).magnitude;
    CHECK(closed == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("closed form at reference points") {
    ValveParams p = silicon();
    CHECK(current_closed_form(p) == doctest::Approx(8320.0 / 1052801.0).epsilon(1e-12));

    p.n_left = p.n_right = 0.8;
    CHECK(current_closed_form(p) == 0.0);
}

TEST_CASE("no cross coupling: both statistics give the same lorentzian") {
    ValveParams p = silicon();
    p.alpha = 0.0;
    p.big_b = 0.4;
    DerivedScales s = derived_scales(p);
    double expected = 2.0 * s.delta_n * s.gamma * s.omega_tilde * s.omega_tilde /
                      (p.big_b * p.big_b + s.gamma * s.gamma +
                       4.0 * s.omega_tilde * s.omega_tilde);
    p.statistics = Statistics::Spin;
    CHECK(current_closed_form(p) == doctest::Approx(expected).epsilon(1e-14));
    p.statistics = Statistics::FreeFermion;
    CHECK(current_closed_form(p) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("closed form matches the superoperator across parameter space") {
    std::mt19937_64 rng(314159);
    for (int draw = 0; draw < 50; ++draw) {
        ValveParams p = random_params(rng);
        double closed = current_closed_form(p);
        double direct = spin_current(p, Lead::Right).magnitude;
        CHECK(std::abs(closed - direct) <= 1e-9 * std::max(direct, 1e-12));
    }
}

TEST_CASE("contrast reference values") {
    ValveParams p = silicon();
    p.big_b = 0.0;
    CHECK(contrast(p) == doctest::Approx(1.0).epsilon(1e-14));

    p.big_b = interference_coupling(silicon());
    CHECK(std::isinf(contrast(p)));

    p.big_b = 1.024;  // the reference dipolar scale B_0
    CHECK(contrast(p) == doctest::Approx(10955.2).epsilon(1e-3));

    p.big_b = 2.048;  // twice that
    CHECK(contrast(p) == doctest::Approx(60.02).epsilon(1e-3));

    p.n_left = p.n_right = 0.3;
    CHECK_THROWS_AS((void)contrast(p), Indeterminate);
}

TEST_CASE("interference zero is exact and isolated") {
    ValveParams p = silicon();
    double b_int = interference_coupling(p);
    CHECK(b_int == doctest::Approx(0.984375).epsilon(1e-15));

    p.big_b = b_int;
    CHECK(current_closed_form(p) < 1e-12);
    p.big_b = b_int * 1.01;
    CHECK(current_closed_form(p) > 0.0);
    p.big_b = b_int * 0.99;
    CHECK(current_closed_form(p) > 0.0);
}

TEST_CASE("interference coupling edge cases") {
    ValveParams p = silicon();
    p.alpha = 0.0;
    CHECK_THROWS_AS((void)interference_coupling(p), AlphaZero);

    p = silicon();
    p.omega = 0.0;
    CHECK(interference_coupling(p) == 0.0);

    p = silicon();
    p.alpha = 1e-4;  // weak cross coupling: B_int ~ omega / alpha
    CHECK(interference_coupling(p) ==
          doctest::Approx(p.omega / p.alpha).epsilon(1e-2));
}

TEST_CASE("reference dipolar scale") {
    CHECK(proton_coupling(1.0) == doctest::Approx(1.024).epsilon(1e-15));
    CHECK(proton_coupling(2.0) == doctest::Approx(2.048).epsilon(1e-15));
    CHECK(proton_coupling(0.5) == doctest::Approx(0.512).epsilon(1e-15));
}

TEST_CASE("phase-free contrast is bounded and monotone in the coupling") {
    ValveParams p = silicon();
    p.statistics = Statistics::FreeFermion;
    double previous = 0.0;
    double largest = 0.0;
    for (int k = 0; k <= 120; ++k) {
        p.big_b = 1e-3 * std::pow(1e6, k / 120.0);  // 1e-3 .. 1e3
        double c = contrast(p);
        CHECK(std::isfinite(c));
        CHECK(c >= previous * (1.0 - 1e-12));
        previous = c;
        largest = std::max(largest, c);
    }
    // saturates: the cross channel keeps conducting at large coupling
    CHECK(largest < 20.0);
}

TEST_CASE("parity phases make the current odd in the coupling sign") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        ValveParams p;
        p.t = 0.05 + 0.25 * unit(rng);
        p.omega = 0.05 + 0.25 * unit(rng);
        p.alpha = 0.05 + 0.45 * unit(rng);
        p.n_left = 0.75 + 0.25 * unit(rng);
        p.n_right = 0.25 * unit(rng);
        p.statistics = Statistics::Spin;

        DerivedScales s = derived_scales(p);
        const double eps = 1e-4;
        p.big_b = +eps;
        double plus = current_closed_form(p);
        p.big_b = -eps;
        double minus = current_closed_form(p);
        double expected_sign = -(s.omega_tilde * s.delta_n * p.alpha);
        CHECK((plus - minus) * expected_sign > 0.0);
    }
}

TEST_CASE("contrast optimum at near-full polarization sits at the interference zero") {
    ContrastOptimum opt = optimize_contrast(silicon(), 0.999);
    double b_int = interference_coupling(silicon());
    CHECK(std::abs(opt.b_max - b_int) / b_int < 0.05);
    CHECK(opt.c_max > 1e2);
    CHECK(opt.polarization == 0.999);
}

TEST_CASE("optimum trends with polarization") {
    const double ps[] = {0.999, 0.75, 0.5, 0.25, 0.1};
    std::vector<ContrastOptimum> opts;
    for (double p : ps) opts.push_back(optimize_contrast(silicon(), p));
    for (std::size_t k = 1; k < opts.size(); ++k) {
        CHECK(opts[k].c_max < opts[k - 1].c_max);   // contrast degrades
        CHECK(opts[k].b_max > opts[k - 1].b_max);   // optimum drifts to larger coupling
    }

    // frozen optimizer outputs
    const double b_ref[] = {0.985301, 1.294874, 1.922985, 3.822403, 9.539380};
    const double c_ref[] = {8222.97, 37.5846, 21.9249, 17.5385, 16.6079};
    for (std::size_t k = 0; k < opts.size(); ++k) {
        CHECK(opts[k].b_max == doctest::Approx(b_ref[k]).epsilon(1e-3));
        CHECK(opts[k].c_max == doctest::Approx(c_ref[k]).epsilon(1e-3));
    }
}

TEST_CASE("optimum dominates its neighbourhood and the coarse grid") {
    const double pol = 0.75;
    ContrastOptimum opt = optimize_contrast(silicon(), pol);

    ValveParams p = silicon();
    p.n_left = (1.0 + pol) / 2.0;
    p.n_right = (1.0 - pol) / 2.0;

    p.big_b = opt.b_max * (1.0 + 1e-4);
    CHECK(contrast(p) <= opt.c_max);
    p.big_b = opt.b_max * (1.0 - 1e-4);
    CHECK(contrast(p) <= opt.c_max);

    for (int k = 0; k < 200; ++k) {
        p.big_b = proton_coupling(1.0) * (0.05 + (3.0 - 0.05) * k / 199.0);
        CHECK(contrast(p) <= opt.c_max * (1.0 + 1e-12));
    }
}

TEST_CASE("optimizer rejects bad input and cramped ranges") {
    CHECK_THROWS_AS((void)optimize_contrast(silicon(), 0.0), Error);
    CHECK_THROWS_AS((void)optimize_contrast(silicon(), 1.0), Error);
    CHECK_THROWS_AS((void)optimize_contrast(silicon(), -0.5), Error);

    SearchRange cramped;
    cramped.b_min = 1e-3;
    cramped.b_max = 1e-2;  // the P=0.1 optimum lies far above this window
    CHECK_THROWS_AS((void)optimize_contrast(silicon(), 0.1, cramped), BoundaryMaximum);
}

TEST_CASE("lowest-order rate: exact zero with phases, no zero without") {
    ValveParams p = silicon();
    p.big_b = p.omega / p.alpha;  // = 1: the two second-order paths cancel
    p.statistics = Statistics::Spin;
    CHECK(perturbative_rate(p) == 0.0);

    p.statistics = Statistics::FreeFermion;
    double t2 = p.t * p.t;
    CHECK(perturbative_rate(p) == (t2 * p.alpha) * (t2 * p.alpha));

    p.big_b = 0.37;
    double plus = perturbative_rate(p);
    p.big_b = -0.37;
    CHECK(perturbative_rate(p) == plus);  // even without the phase factor

    p.big_b = 0.0;
    CHECK_THROWS_AS((void)perturbative_rate(p), DivisionByZero);
}
