#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinvalve {

using Complex  = std::complex<double>;
using Matrix4  = Eigen::Matrix4cd;
using Vector4  = Eigen::Vector4cd;
using Matrix16 = Eigen::Matrix<Complex, 16, 16>;
using Vector16 = Eigen::Matrix<Complex, 16, 1>;

// Spin-1/2 exchange statistics of the transported excitations. Spin keeps the
// parity phases in the cross-coupling jump operators; FreeFermion drops them.
enum class Statistics { Spin, FreeFermion };

enum class SpinState { Up, Down };
enum class Lead { Left, Right };

// z-projection carried by a frozen spectator spin-1/2
constexpr double spin_z(SpinState s) { return s == SpinState::Up ? 0.5 : -0.5; }

// All model constants. Energies are quoted in units of the lead bandwidth
// parameter b (default 1). Defaults are the silicon working point
// t = omega = alpha = 1/8 with fully polarized leads.
struct ValveParams {
    double t         = 0.125;  // lead-valve hopping amplitude
    double omega     = 0.125;  // valve-valve coupling
    double big_b     = 0.0;    // qubit-valve coupling B (signed)
    double alpha     = 0.125;  // cross-coupling ratio, in [0,1)
    double bandwidth = 1.0;    // lead band parameter b > 0 (sets the units)
    double n_left    = 1.0;    // lead occupations in [0,1]
    double n_right   = 0.0;
    double p_left    = 0.0;    // principal-value shifts of the lead coupling
    double p_right   = 0.0;
    Statistics statistics = Statistics::Spin;
    SpinState qubit = SpinState::Down;
    SpinState aux   = SpinState::Up;
};

// Rejects out-of-domain parameters. alpha = 1 is refused outright: the
// interference coupling diverges there and the valve spectrum degenerates.
void validate(const ValveParams& params);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSteadyState : Error { using Error::Error; };
struct NumericalFailure      : Error { using Error::Error; };
struct AlphaZero             : Error { using Error::Error; };
struct Indeterminate         : Error { using Error::Error; };
struct BoundaryMaximum       : Error { using Error::Error; };
struct DivisionByZero        : Error { using Error::Error; };
struct SizeExceeded          : Error { using Error::Error; };
struct NormDrift             : Error { using Error::Error; };
struct WindowInvalid         : Error { using Error::Error; };
struct ConfigError           : Error { using Error::Error; };

}  // namespace spinvalve
