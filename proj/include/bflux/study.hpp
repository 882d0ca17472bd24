#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bflux/spectral.hpp"
#include "bflux/verification.hpp"

namespace bflux {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Problem {
    study1d,
    study2d_periodic,
    study2d_square,
    study2d_disk,
    decouple_check,
    property_suite,
};

std::string to_string(Problem problem);

/// Plain-text `key = value` study description with `#` comments. Keys:
/// problem, m, p_list, refinements, mode, b, c, seed, output.
struct StudyConfig {
    Problem problem = Problem::study1d;
    int m = 1;
    std::vector<int> p_list{0, 1, 2, 3};
    int refinements = 0;  // 0 picks the per-problem default
    RefinementMode mode = RefinementMode::normal;
    double b0 = 1.0;
    double b1 = 1.0;
    double c = 2.0;
    std::uint64_t seed = 42;
    std::string output = ".";

    int levels() const;  // resolved refinement count
};

StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_file(const std::string& path);

// ---------------------------------------------------------------------------
// Refinement studies. Levels solve independently; the worker pool is capped
// by the BFLUX_THREADS environment variable (0 or unset = hardware limit).
// ---------------------------------------------------------------------------
ConvergenceTable run_study_1d(int m, int p, int levels, double b, double c);
ConvergenceTable run_study_2d(Problem problem, int p, RefinementMode mode, int levels,
                              const Coefficients& coeff);

struct DecoupleResult {
    int nx = 0;
    int ny = 0;
    int p = 0;
    double discrepancy = 0.0;
};

std::vector<DecoupleResult> run_decouple_check(const Coefficients& coeff,
                                               const std::vector<int>& grid_sizes,
                                               const std::vector<int>& p_values);

struct PropertyReport {
    InequalityReport appendix;
    SpectralCheckReport spectral;

    bool passed() const {
        return appendix.total() == 0 && spectral.ratio_bounds_hold &&
               spectral.max_eigen_identity_error < 1e-11 &&
               spectral.max_l2_orthogonality_error < 1e-11 &&
               spectral.max_mode_orthogonality_error < 1e-11;
    }
};

PropertyReport run_property_suite(std::uint64_t seed);

// ---------------------------------------------------------------------------
// CSV output: header `level,ncells,h,dofs,h1b,h2b,rate_h1b,rate_h2b`, floats
// in shortest round-trip decimal, rate cells empty on the first row.
// ---------------------------------------------------------------------------
void write_table(const ConvergenceTable& table, const std::string& path);
ConvergenceTable read_table(const std::string& path);

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

/// Worker cap from BFLUX_THREADS (0 or unset: hardware concurrency).
int thread_cap();

/// Execute the config: write CSVs / reports under config.output and log
/// progress. Returns 0 on success, 2 on numerical failure (config problems
/// throw ConfigError before this point).
int run(const StudyConfig& config, std::ostream& log);

}  // namespace bflux
