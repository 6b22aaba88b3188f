#include "spectre/interval_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "extended_precision.hpp"
#include "spectre/errors.hpp"

namespace spectre {

namespace {

constexpr double kEndpointSlack = 1e-12;

void check_domain(double x, const char* who) {
    if (!(x >= IntervalMapContext::x0() - kEndpointSlack && x <= IntervalMapContext::x1() + kEndpointSlack)) {
        throw DomainError(std::string(who) + ": x = " + std::to_string(x) + " is outside [-1, 1]");
    }
}

// solves G(y) = t by Newton's method inside a shrinking bracket
double solve_lift(const IntervalMapContext& ctx, double t) {
    double lo = -3.0;
    double hi = 3.0;
    double y = std::clamp(0.5 * (t + 1.0) - 1.0, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double r = ctx.lifted(y) - t;
        if (r == 0.0) return y;
        if (r > 0.0) hi = y; else lo = y;
        double next = y - r / ctx.lifted_deriv(y);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - y);
        y = next;
        if (step <= 1e-16 * std::max(1.0, std::abs(y))) break;
    }
    return y;
}

double richardson_second(const IntervalMapContext& ctx, int k, double x) {
    auto d = [&](double h) {
        return (interval_branch_extended(ctx, k, x + h).derivative - interval_branch_extended(ctx, k, x - h).derivative) /
               (2.0 * h);
    };
    constexpr double h = 1e-3;
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <typename F>
double one_sided_derivative(const F& f, double x, double h) {
    // 5-point, fourth order; h < 0 gives the backward stencil
    return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2 * h) + 16.0 * f(x + 3 * h) - 3.0 * f(x + 4 * h)) /
           (12.0 * h);
}

}  // namespace

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
    if (d.coeffs.empty()) d.coeffs.push_back(0.0);
    return d;
}

IntervalMapContext::IntervalMapContext(BlaschkeParam param)
    : param_(param), z0_(fixed_point(param)), phase_(std::arg(z0_)) {}

cplx IntervalMapContext::project(double x) const { return std::polar(1.0, kPi * (x - x0()) + phase_); }

cplx IntervalMapContext::project_deriv(double x) const { return cplx{0.0, kPi} * project(x); }

double IntervalMapContext::lifted(double x) const {
    const double y0 = phase_ / kPi;
    return lift(param_, y0 + x - x0()) - lift(param_, y0) + x0();
}

double IntervalMapContext::lifted_deriv(double x) const { return lift_deriv(param_, phase_ / kPi + x - x0()); }

BranchValue interval_branch_extended(const IntervalMapContext& context, int k, double x) {
    if (k != 1 && k != 2) throw DomainError("interval_branch: k must be 1 or 2");
    const double y = solve_lift(context, x + 2.0 * (k - 1));
    return {y, 1.0 / context.lifted_deriv(y)};
}

BranchValue interval_branch(const IntervalMapContext& context, int k, double x) {
    check_domain(x, "interval_branch");
    auto b = interval_branch_extended(context, k, std::clamp(x, context.x0(), context.x1()));
    b.value = std::clamp(b.value, context.x0(), context.x1());
    return b;
}

double T_eval(const IntervalMapContext& context, double x) {
    check_domain(x, "T_eval");
    const double g = context.lifted(std::clamp(x, context.x0(), context.x1()));
    return std::clamp(g > context.x1() ? g - 2.0 : g, context.x0(), context.x1());
}

double T_deriv(const IntervalMapContext& context, double x) {
    check_domain(x, "T_deriv");
    return context.lifted_deriv(x);
}

double T_deriv_at_fixed_point(const IntervalMapContext& context) {
    const double a = context.param().modulus();
    return 2.0 * (a * std::cos(context.param().phase()) - 1.0) / (a * a - 1.0);
}

bool BranchMatchingReport::passed(double tol01, double tol2, double tol_inverse) const {
    auto below = [](const auto& arr, double tol) {
        return std::all_of(arr.begin(), arr.end(), [tol](double v) { return v < tol; });
    };
    return below(order0, tol01) && below(order1, tol01) && below(order2, tol2) && inverse_residual < tol_inverse;
}

BranchMatchingReport check_branch_matching(const IntervalMapContext& context) {
    const double x0 = context.x0();
    const double x1 = context.x1();
    const auto p1a = interval_branch(context, 1, x0);
    const auto p1b = interval_branch(context, 1, x1);
    const auto p2a = interval_branch(context, 2, x0);
    const auto p2b = interval_branch(context, 2, x1);

    BranchMatchingReport rep;
    rep.order0 = {std::abs(p1a.value - x0), std::abs(p2b.value - x1), std::abs(p2a.value - p1b.value)};
    rep.order1 = {std::abs(p1a.derivative - p2b.derivative), std::abs(p2a.derivative - p1b.derivative)};
    rep.order2 = {std::abs(richardson_second(context, 1, x0) - richardson_second(context, 2, x1)),
                  std::abs(richardson_second(context, 2, x0) - richardson_second(context, 1, x1))};
    for (int j = 0; j < 128; ++j) {
        const double x = x0 + (x1 - x0) * j / 127.0;
        for (int k = 1; k <= 2; ++k) {
            const double y = interval_branch(context, k, x).value;
            rep.inverse_residual = std::max(rep.inverse_residual, std::abs(context.lifted(y) - 2.0 * (k - 1) - x));
        }
    }
    return rep;
}

double apply_interval_transfer(const IntervalMapContext& context, const std::function<double(double)>& f, double x) {
    double acc = 0.0;
    for (int k = 1; k <= 2; ++k) {
        const auto b = interval_branch_extended(context, k, x);
        acc += b.derivative * f(b.value);
    }
    return acc;
}

cplx apply_interval_transfer(const IntervalMapContext& context, const std::function<cplx(double)>& f, double x) {
    cplx acc{};
    for (int k = 1; k <= 2; ++k) {
        const auto b = interval_branch_extended(context, k, x);
        acc += b.derivative * f(b.value);
    }
    return acc;
}

std::vector<double> chebyshev_lobatto(int M) {
    if (M < 2) throw DomainError("chebyshev_lobatto: M must be >= 2");
    std::vector<double> x(M);
    for (int j = 0; j < M; ++j) x[j] = -std::cos(kPi * j / (M - 1));
    x.front() = -1.0;
    x.back() = 1.0;
    return x;
}

Eigen::VectorXd cardinal_functions(const std::vector<double>& nodes, double y) {
    const int M = static_cast<int>(nodes.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(M);
    Eigen::VectorXd terms(M);
    double denom = 0.0;
    for (int i = 0; i < M; ++i) {
        const double diff = y - nodes[i];
        if (diff == 0.0) {
            out(i) = 1.0;
            return out;
        }
        double w = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == M - 1) w *= 0.5;
        terms(i) = w / diff;
        denom += terms(i);
    }
    return terms / denom;
}

IntervalDiscretization collocation_matrix(const IntervalMapContext& context, int M) {
    if (M < 8 || M > 256) throw DomainError("collocation_matrix: M must be in [8, 256]");
    const auto wide = detail::wide_collocation(context.param(), M);
    Eigen::MatrixXd A(M, M);
    for (int j = 0; j < M; ++j) {
        for (int i = 0; i < M; ++i) A(j, i) = static_cast<double>(wide(j, i));
    }
    auto eigenvalues = detail::wide_eigenvalues(wide);
    sort_by_modulus(eigenvalues);
    return {M, chebyshev_lobatto(M), std::move(A), context, std::move(eigenvalues)};
}

SpectrumPrediction interval_spectrum_predicted(const IntervalMapContext& context, int n_max) {
    auto pred = predicted_spectrum(context.param(), n_max);
    const double q = 1.0 / T_deriv_at_fixed_point(context);
    double v = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        v *= q;
        pred.entries.push_back({cplx{v, 0.0}, 1, EigenFamily::fixed_point, n});
    }
    std::stable_sort(pred.entries.begin(), pred.entries.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a.value);
        const double mb = std::abs(b.value);
        if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb))) return ma > mb;
        return std::arg(a.value) < std::arg(b.value);
    });
    return pred;
}

double dual_functional(const Polynomial& f, int n) {
    Polynomial d = f;
    for (int i = 0; i < n; ++i) d = d.derivative();
    return d(IntervalMapContext::x1()) - d(IntervalMapContext::x0());
}

DualFunctionalReport dual_functional_check(const IntervalMapContext& context, const Polynomial& f, int order) {
    if (f.degree() > 12) throw DomainError("dual_functional_check: degree must be <= 12");
    if (order != 0 && order != 1) throw DomainError("dual_functional_check: order must be 0 or 1");
    const double x0 = context.x0();
    const double x1 = context.x1();
    const double m = interval_branch(context, 1, x0).derivative;
    const std::function<double(double)> fx = [&f](double x) { return f(x); };
    auto Lf = [&](double x) { return apply_interval_transfer(context, fx, x); };

    DualFunctionalReport rep{};
    rep.order = order;
    rep.applicable = true;
    if (order == 0) {
        rep.lhs = Lf(x1) - Lf(x0);
        rep.rhs = m * dual_functional(f, 0);
        rep.tol = 1e-9;
    } else {
        rep.tol = 1e-8;
        if (std::abs(dual_functional(f, 0)) > 1e-12) {
            rep.applicable = false;
            return rep;
        }
        constexpr double h = 1e-3;
        rep.lhs = one_sided_derivative(Lf, x1, -h) - one_sided_derivative(Lf, x0, h);
        rep.rhs = m * m * dual_functional(f, 1);
    }
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

double intertwine_check(const IntervalMapContext& context, const TrigPolynomial& f) {
    const CircleFunction fc = [&f](cplx z) { return f(z); };
    const std::function<cplx(double)> qf = [&](double y) { return context.project_deriv(y) * f(context.project(y)); };
    double worst = 0.0;
    for (int j = 0; j < 128; ++j) {
        const double x = context.x0() + (context.x1() - context.x0()) * j / 127.0;
        const cplx lhs = apply_interval_transfer(context, qf, x);
        const cplx rhs =
            context.project_deriv(x) * apply_transfer(context.param(), fc, context.project(x), TransferWeight::complex_derivative);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

MayerReport mayer_check(const IntervalMapContext& context, const std::vector<cplx>& eigenvalues, double modulus_bound,
                        int fixed_family_depth) {
    MayerReport rep{};
    rep.modulus_bound = modulus_bound;
    rep.fixed_family_depth = fixed_family_depth;
    for (const cplx mu : eigenvalues) {
        if (mu.imag() > 1e-6 && std::abs(mu) < modulus_bound) rep.nonreal.push_back(mu);
    }
    sort_by_modulus(rep.nonreal);
    rep.nonreal_pairs_below = static_cast<int>(rep.nonreal.size());
    const cplx lam = context.param().lambda();
    for (const cplx mu : rep.nonreal) {
        cplx power = lam;
        for (int n = 1; std::abs(power) > 1e-10; ++n, power *= lam) {
            if (std::abs(mu - power) < 1e-7 || std::abs(mu - std::conj(power)) < 1e-7) {
                ++rep.nonreal_matched;
                break;
            }
        }
    }

    const double q = 1.0 / T_deriv_at_fixed_point(context);
    double v = 1.0;
    for (int n = 1; n <= fixed_family_depth; ++n) {
        v *= q;
        double best = std::numeric_limits<double>::infinity();
        for (const cplx mu : eigenvalues) best = std::min(best, std::abs(mu - v));
        rep.fixed_family_error = std::max(rep.fixed_family_error, best);
    }
    rep.multipliers = {interval_branch(context, 1, context.x0()).derivative,
                       interval_branch(context, 2, context.x1()).derivative};
    return rep;
}

}  // namespace spectre
