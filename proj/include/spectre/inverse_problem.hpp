#pragma once

#include <string>
#include <vector>

#include "spectre/interval_transfer.hpp"

namespace spectre {

/// Residual of one functional equation on a grid.
struct FunctionalEquationReport {
    std::string equation;
    std::vector<double> grid;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Phi(x) = x/2 - (1/pi) arccos(lambda cos(pi x / 2)) and its derivative, real lambda in (-1, 1).
[[nodiscard]] BranchValue closed_form_branch(double lambda, double x);

/// Chebyshev-distributed grid cos(pi j / (n - 1)), j = 0..n-1, ascending. n >= 2.
[[nodiscard]] std::vector<double> chebyshev_grid(int n);

/// |Phi_1 + Phi_2 - x| < 1e-11, branches from interval_branch.
[[nodiscard]] FunctionalEquationReport verify_sum_identity(double lambda, int grid_size);

/// |sin(pi Phi_1) + sin(pi Phi_2) - lambda sin(pi x)| < 1e-10.
[[nodiscard]] FunctionalEquationReport verify_sine_identity(double lambda, int grid_size);

/// |F(Phi(x)) - x| < 1e-10 (1e-9 for |lambda| > 0.85) with the closed-form Phi; fails
/// also when Phi is not strictly increasing on the grid.
[[nodiscard]] FunctionalEquationReport verify_lift_inverse(double lambda, int grid_size);

/// |Phi_1' cos(pi Phi_1) + Phi_2' cos(pi Phi_2) - lambda cos(pi x)| < 1e-9.
[[nodiscard]] FunctionalEquationReport verify_designed_eigenfunction(double lambda, int grid_size);

/// |Phi_1' + Phi_2' - 1| < 1e-10.
[[nodiscard]] FunctionalEquationReport verify_derivative_sum(double lambda, int grid_size);

/// All five reports above.
[[nodiscard]] std::vector<FunctionalEquationReport> verify_inverse_problem(double lambda, int grid_size = 257);

}  // namespace spectre
