#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "spectre/blaschke.hpp"
#include "spectre/fourier_transfer.hpp"
#include "spectre/spectral.hpp"

namespace spectre {

/// Real polynomial sum_k coeffs[k] x^k.
struct Polynomial {
    std::vector<double> coeffs;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Polynomial derivative() const;
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// The interval map T on I = [-1, 1] induced by tau through
///
///     p(x) = z0 exp(i pi (x - x0)),   p o T = tau o p,
///
/// so that p(x0) = z0 and T(x0) = x0.
class IntervalMapContext {
public:
    explicit IntervalMapContext(BlaschkeParam param);

    [[nodiscard]] const BlaschkeParam& param() const noexcept { return param_; }
    [[nodiscard]] static constexpr double x0() noexcept { return -1.0; }
    [[nodiscard]] static constexpr double x1() noexcept { return 1.0; }
    [[nodiscard]] cplx z0() const noexcept { return z0_; }
    [[nodiscard]] double phase_offset() const noexcept { return phase_; }

    [[nodiscard]] cplx project(double x) const;
    [[nodiscard]] cplx project_deriv(double x) const;

    /// Lift of T anchored at the fixed point: G(x0) = x0, G(x1) = x1 + 2, G' > 0.
    /// T is G reduced into I. Defined on all of R.
    [[nodiscard]] double lifted(double x) const;
    [[nodiscard]] double lifted_deriv(double x) const;

private:
    BlaschkeParam param_;
    cplx z0_;
    double phase_;
};

struct BranchValue {
    double value;
    double derivative;
};

/// Phi_k(x), k in {1, 2}, the solution of G(y) = x + 2(k - 1) in I, together with
/// Phi_k'(x) = 1 / T'(Phi_k(x)). Throws DomainError for x outside I or bad k.
[[nodiscard]] BranchValue interval_branch(const IntervalMapContext& context, int k, double x);

/// Same branch without the domain check, continued analytically past the endpoints
/// (used for finite differences at x0, x1).
[[nodiscard]] BranchValue interval_branch_extended(const IntervalMapContext& context, int k, double x);

/// T(x) in I. Throws DomainError for x outside I.
[[nodiscard]] double T_eval(const IntervalMapContext& context, double x);
[[nodiscard]] double T_deriv(const IntervalMapContext& context, double x);

/// T'(x0) = 2 (|lambda| cos(alpha) - 1) / (|lambda|^2 - 1).
[[nodiscard]] double T_deriv_at_fixed_point(const IntervalMapContext& context);

/// Branch matching conditions at the endpoints:
///   [0] |Phi_1(x0) - x0|          [1] |Phi_2(x1) - x1|
///   [2] |Phi_1^(n)(x0) - Phi_2^(n)(x1)|, n >= 1
///   [3] |Phi_2(x0) - Phi_1(x1)|   [4] |Phi_2^(n)(x0) - Phi_1^(n)(x1)|, n >= 1
/// order1 holds the derivative versions of [2], [4] (analytic derivatives);
/// order2 the second-derivative versions by Richardson-extrapolated differences.
struct BranchMatchingReport {
    std::array<double, 3> order0{};  ///< conditions [0], [1], [3]
    std::array<double, 2> order1{};  ///< conditions [2], [4] with n = 1
    std::array<double, 2> order2{};  ///< conditions [2], [4] with n = 2
    double inverse_residual = 0.0;   ///< sup of |G(Phi_k(x)) - 2(k-1) - x| on a 128-point grid

    [[nodiscard]] bool passed(double tol01 = 1e-10, double tol2 = 1e-6, double tol_inverse = 1e-11) const;
};

[[nodiscard]] BranchMatchingReport check_branch_matching(const IntervalMapContext& context);

/// (L_I f)(x) = sum_k Phi_k'(x) f(Phi_k(x)).
[[nodiscard]] double apply_interval_transfer(const IntervalMapContext& context,
                                             const std::function<double(double)>& f, double x);
[[nodiscard]] cplx apply_interval_transfer(const IntervalMapContext& context, const std::function<cplx(double)>& f,
                                           double x);

/// Chebyshev-Lobatto points cos(pi j / (M - 1)), j = M-1, ..., 0 (ascending).
[[nodiscard]] std::vector<double> chebyshev_lobatto(int M);

/// Barycentric cardinal functions of the Chebyshev-Lobatto nodes at y.
[[nodiscard]] Eigen::VectorXd cardinal_functions(const std::vector<double>& nodes, double y);

struct IntervalDiscretization {
    int M;
    std::vector<double> nodes;
    /// A(j, i) = sum_k Phi_k'(x_j) l_i(Phi_k(x_j)). T is a real map for every lambda,
    /// so the matrix is real; non-real eigenvalues come in conjugate pairs.
    Eigen::MatrixXd matrix;
    IntervalMapContext context;
    /// Eigenvalues of the same matrix assembled and reduced in extended precision,
    /// sorted by modulus. The small eigenvalues are ill-conditioned in the nodal
    /// basis; double-precision assembly alone loses them near 1e-8.
    std::vector<cplx> eigenvalues;
};

/// Throws DomainError for M < 8 or M > 256.
[[nodiscard]] IntervalDiscretization collocation_matrix(const IntervalMapContext& context, int M);

/// sigma(L_T) truncated at n_max together with T'(x0)^{-n}, 1 <= n <= n_max.
[[nodiscard]] SpectrumPrediction interval_spectrum_predicted(const IntervalMapContext& context, int n_max);

struct DualFunctionalReport {
    int order;
    double lhs;       ///< l_order(L_I f)
    double rhs;       ///< Phi_1'(x0)^(order+1) l_order(f)
    double residual;  ///< |lhs - rhs|
    double tol;
    bool applicable;  ///< false for order 1 when l_0(f) != 0

    [[nodiscard]] bool passed() const { return !applicable || residual < tol; }
};

/// l_n(f) = f^(n)(x1) - f^(n)(x0).
[[nodiscard]] double dual_functional(const Polynomial& f, int n);

/// Order 0: l_0(L_I f) = Phi_1'(x0) l_0(f), tolerance 1e-9.
/// Order 1, only when l_0(f) = 0: l_1(L_I f) = Phi_1'(x0)^2 l_1(f), tolerance 1e-8,
/// with l_1(L_I f) from 5-point one-sided stencils (h = 1e-3).
/// Throws DomainError for degree > 12 or order outside {0, 1}.
[[nodiscard]] DualFunctionalReport dual_functional_check(const IntervalMapContext& context, const Polynomial& f,
                                                         int order);

/// sup over 128 equispaced points of I of |L_I (Q_p f) - Q_p (L_T f)|, with
/// (Q_p f)(x) = p'(x) f(p(x)) and L_T the complex-derivative branch sum.
[[nodiscard]] double intertwine_check(const IntervalMapContext& context, const TrigPolynomial& f);

/// Summary of the non-real part of a collocation spectrum.
struct MayerReport {
    int nonreal_pairs_below;            ///< conjugate pairs with |Im| > 1e-6 and modulus < modulus_bound
    int nonreal_matched;                ///< those within 1e-7 of some lambda^n or conj(lambda)^n
    double modulus_bound;
    double fixed_family_error;          ///< max over n of the distance from T'(x0)^{-n} to the spectrum
    int fixed_family_depth;
    std::array<double, 2> multipliers;  ///< Phi_1'(x0), Phi_2'(x1): both real
    std::vector<cplx> nonreal;          ///< the non-real eigenvalues counted, upper half-plane
};

[[nodiscard]] MayerReport mayer_check(const IntervalMapContext& context, const std::vector<cplx>& eigenvalues,
                                      double modulus_bound = 0.4, int fixed_family_depth = 4);

}  // namespace spectre
