#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "spectre/blaschke.hpp"

namespace spectre {

/// Trigonometric polynomial sum_k coeffs[k] z^(lowest + k) on the unit circle.
struct TrigPolynomial {
    int lowest = 0;
    std::vector<cplx> coeffs;

    [[nodiscard]] int highest() const { return lowest + static_cast<int>(coeffs.size()) - 1; }
    [[nodiscard]] cplx operator()(cplx z) const;
};

using CircleFunction = std::function<cplx(cplx)>;

/// How the branch sum weights each preimage.
enum class TransferWeight {
    /// (L f)(w) = sum_k phi_k'(w) f(phi_k(w)); the operator dual to composition under dz.
    complex_derivative,
    /// (L f)(w) = sum_k w phi_k'(w) / phi_k(w) f(phi_k(w)), i.e. weight |phi_k'| on the circle;
    /// the Perron-Frobenius operator for arc length, conjugate to the first via f -> z f.
    arc_length,
};

/// Evaluates the transfer operator at w by summing over the two inverse branches.
[[nodiscard]] cplx apply_transfer(const BlaschkeParam& param, const CircleFunction& f, cplx w,
                                  TransferWeight weight = TransferWeight::arc_length);

/// Discretization budget for the circle contour integrals.
struct QuadratureSpec {
    int min_points = 256;
    double target_tol = 1e-13;
    int max_points = 1 << 20;

    /// Defaults, with max_points overridden by SPECTRE_QUAD_MAX when set
    /// (min_points is lowered to the cap if needed, never below 64).
    static QuadratureSpec from_environment();
    void validate() const;
};

enum class AssemblyMethod { quadrature, fft, closed_form };

[[nodiscard]] std::string_view to_string(AssemblyMethod method);
[[nodiscard]] AssemblyMethod assembly_method_from_string(std::string_view name);

/// Finite section of the transfer operator in the Fourier basis, indices n, l in {-N, ..., N}:
///
///     entry(n, l) = (1 / 2 pi i) \oint z^(l - n) ((1 - conj(lambda) z) / (lambda - z))^n dz / z
///
/// This is c_n(L z^l) for the arc-length operator, equivalently c_{n-1}(L z^{l-1})
/// for the complex-derivative one.
class TransferMatrix {
public:
    TransferMatrix(BlaschkeParam param, int order, AssemblyMethod method, Eigen::MatrixXcd entries);

    [[nodiscard]] const BlaschkeParam& param() const noexcept { return param_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int size() const noexcept { return 2 * order_ + 1; }
    [[nodiscard]] AssemblyMethod method() const noexcept { return method_; }
    [[nodiscard]] const Eigen::MatrixXcd& dense() const noexcept { return entries_; }

    [[nodiscard]] bool contains(int n) const noexcept { return n >= -order_ && n <= order_; }
    [[nodiscard]] cplx at(int n, int l) const;
    [[nodiscard]] std::vector<cplx> diagonal() const;

    /// Copy with one entry replaced (fault injection, diagnostics).
    [[nodiscard]] TransferMatrix with_entry(int n, int l, cplx value) const;

private:
    BlaschkeParam param_;
    int order_;
    AssemblyMethod method_;
    Eigen::MatrixXcd entries_;
};

/// Single entry by the periodic trapezoidal rule, doubling the point count from
/// spec.min_points until successive values differ by < spec.target_tol.
[[nodiscard]] cplx entry_quadrature(const BlaschkeParam& param, int n, int l, const QuadratureSpec& spec = {});

/// Row n, l = -N..N, from one inverse DFT of the row generator
/// theta -> e^{-in theta} ((1 - conj(lambda) e^{i theta}) / (lambda - e^{i theta}))^n.
[[nodiscard]] std::vector<cplx> row_fft(const BlaschkeParam& param, int n, int order, const QuadratureSpec& spec = {});

/// Largest |n|, |l| accepted by entry_closed_form; binomials beyond it leave 64-bit range.
inline constexpr int kClosedFormMaxIndex = 64;

/// Binomial-sum closed form of the entries, with the sign convention fixed by
/// reconcile_closed_form_sign(). Throws IndexOverflowError beyond kClosedFormMaxIndex.
[[nodiscard]] cplx entry_closed_form(const BlaschkeParam& param, int n, int l);

/// The binomial sum exactly as printed, without sign reconciliation (n > 0).
[[nodiscard]] cplx entry_closed_form_raw(const BlaschkeParam& param, int n, int l);

/// Outcome of comparing the printed closed form against quadrature on a 5 x 5 probe.
struct SignReconciliation {
    bool alternating;          ///< true: value = (-1)^n * raw; false: value = raw
    double residual_plain;     ///< max |raw - quadrature| over the probe
    double residual_alternating;
};

/// Runs the probe once per process (at lambda = 0.3 + 0.4i, n, l = 1..5) and caches it.
[[nodiscard]] const SignReconciliation& reconcile_closed_form_sign();

[[nodiscard]] TransferMatrix assemble(const BlaschkeParam& param, int order,
                                      AssemblyMethod method = AssemblyMethod::quadrature,
                                      const QuadratureSpec& spec = {});

/// Maximum violations of the triangular structure:
///   (a) |L(0,0) - 1|
///   (b) |L(0,l)|, l != 0
///   (c) |L(-n,-l) - conj(L(n,l))|
///   (d) |L(-n,-n) - lambda^n|, n >= 0
///   (e) |L(n,l)| and |L(-n,-l)| for n >= 0, n > l
struct StructureReport {
    std::array<double, 5> violation{};
    double tol = 0.0;

    [[nodiscard]] bool passed() const;
    /// Index (0..4 for a..e) of the first property above tol, or -1.
    [[nodiscard]] int first_failure() const;
    static constexpr std::array<char, 5> labels{'a', 'b', 'c', 'd', 'e'};
};

[[nodiscard]] StructureReport validate_structure(const TransferMatrix& matrix, double tol);

/// |(1/2 pi i) \oint (L f) g dz - (1/2 pi i) \oint f (g o tau) dz| with L the
/// complex-derivative operator; both sides by adaptive trapezoidal quadrature.
[[nodiscard]] double duality_check(const BlaschkeParam& param, const TrigPolynomial& f, const TrigPolynomial& g,
                                   const QuadratureSpec& spec = {});

}  // namespace spectre
