#include "spinvalve/analytic.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace spinvalve {

DerivedScales derived_scales(const ValveParams& p) {
    return {p.t * p.t / p.bandwidth,
            p.omega + 2.0 * p.alpha * p.t * p.t * (p.p_left + p.p_right),
            p.n_left - p.n_right};
}

double current_closed_form(const ValveParams& p) {
    validate(p);
    auto [gamma, omega_t, dn] = derived_scales(p);
    const double xi = (p.statistics == Statistics::Spin) ? 1.0 : 0.0;
    const double B = p.big_b * (spin_z(p.aux) - spin_z(p.qubit));
    const double a = p.alpha;
    const double a2 = a * a;
    const double up = 1.0 + a2;
    const double dm = 1.0 - a2;

    double num = a2 * B * B
               + dm * dm * (a2 * gamma * gamma * (1.0 - xi * dn * dn)
                            - 2.0 * xi * a * omega_t * B * dn / dm + omega_t * omega_t);
    double den = up * up * B * B
               + dm * dm * (up * up * gamma * gamma
                            - 4.0 * xi * a * omega_t * B * dn / dm + 4.0 * omega_t * omega_t);
    if (den == 0.0) return 0.0;  // the all-zero corner
    return std::abs(2.0 * up * dn * gamma * num / den);
}

double contrast(const ValveParams& p) {
    ValveParams flat = p;
    flat.big_b = 0.0;  // uniform-shift branch: no detuning
    double j_up = current_closed_form(flat);
    double j_dn = current_closed_form(p);
    if (j_up < 1e-300 && j_dn < 1e-300)
        throw Indeterminate("both currents vanish; contrast undefined");
    if (j_dn < 1e-300) return std::numeric_limits<double>::infinity();
    return j_up / j_dn;
}

double interference_coupling(const ValveParams& p) {
    validate(p);
    if (p.alpha == 0.0) throw AlphaZero("no interference channel at alpha = 0");
    return (1.0 - p.alpha * p.alpha) * derived_scales(p).omega_tilde / p.alpha;
}

double proton_coupling(double bandwidth) {
    return (8.0 / 5.0) * (8.0 / 5.0) * (8.0 / 5.0) * bandwidth / 4.0;
}

ContrastOptimum optimize_contrast(const ValveParams& params, double polarization,
                                  const SearchRange& search) {
    if (!(polarization > 0.0 && polarization < 1.0))
        throw Error("polarization must lie strictly inside (0, 1), got "
                    + std::to_string(polarization));
    ValveParams p = params;
    p.n_left = 0.5 * (1.0 + polarization);
    p.n_right = 0.5 * (1.0 - polarization);

    auto c_at = [&](double B) {
        ValveParams q = p;
        q.big_b = B;
        return contrast(q);
    };

    const int n = search.points;
    std::vector<double> grid(n);
    const double lo_b = search.b_min * p.bandwidth;
    const double hi_b = search.b_max * p.bandwidth;
    for (int i = 0; i < n; ++i)
        grid[i] = lo_b * std::pow(hi_b / lo_b, double(i) / double(n - 1));

    int best = 0;
    double best_c = -1.0;
    for (int i = 0; i < n; ++i) {
        double c = c_at(grid[i]);
        if (c > best_c) {
            best_c = c;
            best = i;
        }
    }
    if (best == 0 || best == n - 1)
        throw BoundaryMaximum("contrast maximum at search-range edge B = "
                              + std::to_string(grid[best]) + "; widen the range");

    // golden-section refinement inside the bracketing grid cell pair
    double lo = grid[best - 1];
    double hi = grid[best + 1];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = c_at(x1);
    double f2 = c_at(x2);
    while (hi - lo > search.rel_tol * hi) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = c_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = c_at(x1);
        }
    }
    double b_star = 0.5 * (lo + hi);
    return {b_star, c_at(b_star), polarization};
}

double perturbative_rate(const ValveParams& p) {
    validate(p);
    if (p.big_b == 0.0) throw DivisionByZero("perturbative rate undefined at B = 0");
    const double t2 = p.t * p.t;
    double amplitude = (p.statistics == Statistics::Spin)
                           ? t2 * (p.omega / p.big_b - p.alpha)
                           : t2 * (p.omega / p.big_b);
    return amplitude * amplitude;
}

}  // namespace spinvalve
