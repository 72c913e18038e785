#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinvalve/types.hpp"

namespace spinvalve {

enum class SweepMode { Current, ContrastVsB, ContrastVsP, Oracle, Perturbative };
enum class OutputFormat { Csv, Json };

struct Axis {
    bool present = false;  // absent -> per-mode default grid (or a single point)
    std::string var;       // swept parameter; defaults to B (ContrastVsP: P)
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    bool log = false;
};

// Exact-chain settings, used by Oracle mode only. Zeros mean "derive":
// window defaults to [2/b, n_per_side/b], t_max to the window end.
struct OracleSettings {
    int n_per_side = 5;
    double dt = 0.005;
    double t_max = 0.0;
    int samples = 1;
    std::uint64_t seed = 12345;
    double window_start = 0.0;
    double window_end = 0.0;
};

struct SweepSpec {
    SweepMode mode = SweepMode::Current;
    ValveParams base{};
    Axis axis{};
    std::string output_path;  // empty -> stdout
    OutputFormat format = OutputFormat::Csv;
    OracleSettings oracle{};
};

// Line-oriented `key = value` text with `#` comments. Recognized keys:
// mode, t, omega, B, alpha, b, nL, nR, pL, pR, xi, qubit, aux,
// axis.var, axis.min, axis.max, axis.points, axis.scale,
// output.path, output.format. Unknown keys are rejected with their line
// number; so are malformed values and out-of-range parameters. `mode` is
// mandatory. Throws ConfigError.
SweepSpec parse_config(const std::string& text);

// Re-checks a spec assembled or modified outside parse_config (e.g. by CLI
// flag overrides). Throws ConfigError.
void validate_spec(const SweepSpec& spec);

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// One row per axis point, ascending; throws NumericalFailure (and kin) with
// the failing point identified in the message.
//   Current:     <var>, j_signed, j_magnitude   (right lead)
//   ContrastVsB: B_over_B0, C_spin, C_fermion
//   ContrastVsP: P, B_max, C_max
//   Perturbative: <var>, rate_spin, rate_fermion
//   Oracle:      <var>, j_oracle, j_master
SweepTable evaluate_sweep(const SweepSpec& spec);

// 12 significant digits; infinities render as the bare token "inf"/"-inf".
std::string format_value(double v);

// Header + newline-terminated rows. JSON is an array of row objects with the
// same field names; infinities become the string "inf"/"-inf" there.
std::string to_csv(const SweepTable& table);
std::string to_json(const SweepTable& table);

// Full pipeline: validates, evaluates, serializes, writes to output_path (or
// stdout when empty). Returns the process exit code: 0 success, 2 invalid
// configuration, 3 numerical failure; failures are described on `diagnostics`.
int run_sweep(const SweepSpec& spec, std::ostream& diagnostics);

}  // namespace spinvalve
