#include "spectre/inverse_problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spectre/errors.hpp"

namespace spectre {

namespace {

IntervalMapContext real_context(double lambda) {
    if (!(std::abs(lambda) < 1.0)) throw DomainError("lambda must be real with |lambda| < 1");
    return IntervalMapContext(BlaschkeParam(cplx{lambda, 0.0}));
}

FunctionalEquationReport run(std::string name, int grid_size, double tol, const std::function<double(double)>& residual) {
    FunctionalEquationReport rep;
    rep.equation = std::move(name);
    rep.grid = chebyshev_grid(grid_size);
    rep.tolerance = tol;
    for (const double x : rep.grid) rep.max_residual = std::max(rep.max_residual, residual(x));
    rep.pass = rep.max_residual < tol;
    return rep;
}

}  // namespace

BranchValue closed_form_branch(double lambda, double x) {
    const double c = std::cos(kPi * x / 2.0);
    const double u = lambda * c;
    const double value = x / 2.0 - std::acos(u) / kPi;
    const double derivative = 0.5 - 0.5 * lambda * std::sin(kPi * x / 2.0) / std::sqrt(1.0 - u * u);
    return {value, derivative};
}

std::vector<double> chebyshev_grid(int n) {
    if (n < 2) throw DomainError("chebyshev_grid: need at least 2 points");
    return chebyshev_lobatto(n);
}

FunctionalEquationReport verify_sum_identity(double lambda, int grid_size) {
    const auto ctx = real_context(lambda);
    return run("sum", grid_size, 1e-11, [&](double x) {
        return std::abs(interval_branch(ctx, 1, x).value + interval_branch(ctx, 2, x).value - x);
    });
}

FunctionalEquationReport verify_sine_identity(double lambda, int grid_size) {
    const auto ctx = real_context(lambda);
    return run("sine", grid_size, 1e-10, [&](double x) {
        const double a = interval_branch(ctx, 1, x).value;
        const double b = interval_branch(ctx, 2, x).value;
        return std::abs(std::sin(kPi * a) + std::sin(kPi * b) - lambda * std::sin(kPi * x));
    });
}

FunctionalEquationReport verify_lift_inverse(double lambda, int grid_size) {
    const auto ctx = real_context(lambda);
    const double tol = std::abs(lambda) > 0.85 ? 1e-9 : 1e-10;
    auto rep = run("lift_inverse", grid_size, tol, [&](double x) {
        return std::abs(lift(ctx.param(), closed_form_branch(lambda, x).value) - x);
    });
    for (std::size_t j = 1; j < rep.grid.size(); ++j) {
        if (!(closed_form_branch(lambda, rep.grid[j]).value > closed_form_branch(lambda, rep.grid[j - 1]).value)) {
            rep.pass = false;
        }
    }
    return rep;
}

FunctionalEquationReport verify_designed_eigenfunction(double lambda, int grid_size) {
    const auto ctx = real_context(lambda);
    return run("designed_eigenfunction", grid_size, 1e-9, [&](double x) {
        const auto a = interval_branch(ctx, 1, x);
        const auto b = interval_branch(ctx, 2, x);
        return std::abs(a.derivative * std::cos(kPi * a.value) + b.derivative * std::cos(kPi * b.value) -
                        lambda * std::cos(kPi * x));
    });
}

FunctionalEquationReport verify_derivative_sum(double lambda, int grid_size) {
    const auto ctx = real_context(lambda);
    return run("derivative_sum", grid_size, 1e-10, [&](double x) {
        return std::abs(interval_branch(ctx, 1, x).derivative + interval_branch(ctx, 2, x).derivative - 1.0);
    });
}

std::vector<FunctionalEquationReport> verify_inverse_problem(double lambda, int grid_size) {
    return {verify_sum_identity(lambda, grid_size), verify_sine_identity(lambda, grid_size),
            verify_lift_inverse(lambda, grid_size), verify_designed_eigenfunction(lambda, grid_size),
            verify_derivative_sum(lambda, grid_size)};
}

}  // namespace spectre
