#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spectre/blaschke.hpp"

namespace spectre::cli {

enum class Format { csv, json };
enum class Figure { map_graphs, spectrum_vs_lambda };

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kValidationError = 2,
    kNonConvergence = 3,
};

struct RunConfig {
    double lambda_re = 0.4;
    double lambda_im = 0.0;
    int N = 8;
    int M = 40;
    double tol = 1e-9;
    std::string output_path;  ///< empty: write to standard output
    Format format = Format::csv;
    Figure figure = Figure::spectrum_vs_lambda;

    [[nodiscard]] BlaschkeParam param() const { return BlaschkeParam(cplx{lambda_re, lambda_im}); }
};

/// Throws DomainError naming the first violated bound:
/// |lambda| < 1, 1 <= N <= 64, 8 <= M <= 128, 1e-14 <= tol <= 1e-3.
void validate(const RunConfig& config);

struct CommandResult {
    int exit_code = kSuccess;
    std::string payload;  ///< file contents
    std::string summary;  ///< one or more human-readable lines
};

/// Each command validates the config, computes, and returns the serialized result.
/// Numerical non-convergence surfaces as ConvergenceError.
[[nodiscard]] CommandResult cmd_matrix(const RunConfig& config);
[[nodiscard]] CommandResult cmd_spectrum(const RunConfig& config);
[[nodiscard]] CommandResult cmd_interval(const RunConfig& config);
[[nodiscard]] CommandResult cmd_verify(const RunConfig& config);
[[nodiscard]] CommandResult cmd_figure_data(const RunConfig& config);

/// One row of the spectrum_vs_lambda figure data: the moduli of lambda^n and
/// ((lambda + 1) / 2)^n next to the nearest collocation eigenvalues.
struct SweepRow {
    double lambda;
    int n;
    double circle_analytic;
    double circle_computed;
    double fixed_analytic;
    double fixed_computed;
};

/// lambda on `points` equispaced values over [-0.99, 0.99], n = 0..n_max, M collocation nodes.
[[nodiscard]] std::vector<SweepRow> spectrum_sweep(int M, int points = 199, int n_max = 4);

/// The four map-graph parameters: -0.7, 0.4, -0.3 - i sqrt(0.4), 0.1 + i sqrt(0.15).
[[nodiscard]] std::vector<cplx> map_graph_parameters();

/// "re,im" with 17 significant digits.
[[nodiscard]] std::string format_complex(cplx value);
[[nodiscard]] std::string format_real(double value);

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::string& path, std::string_view content);

/// Parses arguments, dispatches, writes output, maps errors onto exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectre::cli
