#pragma once

#include <complex>
#include <numbers>

namespace spectre {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPoleTolerance = 1e-14;

/// Parameter of the degree-two circle map
///
///     tau(z) = z (lambda - z) / (1 - conj(lambda) z),   |lambda| < 1.
///
/// Construction validates |lambda| < 1; instances are immutable.
class BlaschkeParam {
public:
    explicit BlaschkeParam(cplx lambda);
    static BlaschkeParam polar(double modulus, double phase);

    [[nodiscard]] cplx lambda() const noexcept { return lambda_; }
    [[nodiscard]] double modulus() const noexcept { return modulus_; }
    /// arg(lambda) in (-pi, pi]; 0 when lambda == 0.
    [[nodiscard]] double phase() const noexcept { return phase_; }
    [[nodiscard]] bool is_real() const noexcept { return lambda_.imag() == 0.0; }

private:
    cplx lambda_;
    double modulus_;
    double phase_;
};

/// Radii of an annulus r < |z| < R certified invariant in the sense that
/// tau maps the inner boundary strictly inside and the outer boundary strictly outside.
struct AnnulusBounds {
    double r;
    double R;
};

/// The two preimages of a point under tau, labelled by the lift anchored at the fixed point.
struct BranchPair {
    cplx z1;
    cplx z2;
};

[[nodiscard]] cplx tau_eval(const BlaschkeParam& param, cplx z);
[[nodiscard]] cplx tau_deriv(const BlaschkeParam& param, cplx z);

/// Solves z^2 - (lambda + conj(lambda) w) z + w = 0.
///
/// z1 is the preimage lying on the arc swept first when the argument is tracked
/// continuously from the fixed point z0 (the branch fixing z0); z2 is the other one.
/// Throws DegenerateRootsError when the roots coincide to 1e-12.
[[nodiscard]] BranchPair inverse_branches(const BlaschkeParam& param, cplx w);

/// Both roots of tau(z) = w without branch labelling.
[[nodiscard]] BranchPair preimages(const BlaschkeParam& param, cplx w);

/// z0 = (lambda - 1) / (1 - conj(lambda)), the unique fixed point on the circle.
[[nodiscard]] cplx fixed_point(const BlaschkeParam& param);

/// min |tau'| over n_samples equispaced points of the unit circle (n_samples >= 256).
[[nodiscard]] double expansivity_margin(const BlaschkeParam& param, int n_samples);

/// Checks the annulus certificate at the given radii with `n_samples` equispaced points
/// per circle and a 1e-6 margin: sup_{|z|=r}|tau| < r, inf_{|z|=R}|tau| > R, and
/// tau, 1/tau analytic on the closed annulus (|lambda| < r, R < 1/|lambda|).
[[nodiscard]] bool certify_inner_radius(const BlaschkeParam& param, double r, int n_samples = 4096);
[[nodiscard]] bool certify_outer_radius(const BlaschkeParam& param, double R, int n_samples = 4096);

/// Widest certified annulus on the grid r = 0.99, 0.98, ..., 0.50 and
/// R = 1.01, 1.02, ..., 1.50. Every accepted radius is certified at 4096 samples
/// and re-checked at 8192. Throws ConvergenceError if r = 0.99 or R = 1.01 already
/// fails, OrientationError if tau reverses orientation.
[[nodiscard]] AnnulusBounds find_annulus(const BlaschkeParam& param);

/// Real lift with exp(i pi F(x)) = tau(exp(i pi x)) and F(x + 2) = F(x) + 4:
///
///     F(x) = 2x + 1 + (2/pi) atan(|lambda| sin(pi x - a) / (1 - |lambda| cos(pi x - a))),
///
/// a = arg(lambda).
[[nodiscard]] double lift(const BlaschkeParam& param, double x);
[[nodiscard]] double lift_deriv(const BlaschkeParam& param, double x);

/// Angular lift measured from the fixed point: tau(z0 e^{is}) = z0 e^{i g(s)} with
/// g(0) = 0, g increasing and g(s + 2 pi) = g(s) + 4 pi.
[[nodiscard]] double angular_lift(const BlaschkeParam& param, double s);

}  // namespace spectre
