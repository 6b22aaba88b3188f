#include "spectre/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectre/errors.hpp"

namespace spectre {

namespace {

constexpr double kCertificateMargin = 1e-6;
constexpr double kRootSeparation = 1e-12;

cplx pole_factor(const BlaschkeParam& param, cplx z) {
    const cplx d = 1.0 - std::conj(param.lambda()) * z;
    if (std::abs(d) <= kPoleTolerance) {
        throw PoleProximityError("tau: |1 - conj(lambda) z| <= 1e-14, z is at the pole 1/conj(lambda)");
    }
    return d;
}

cplx unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

// distance between two angles modulo 4 pi
double lift_distance(double a, double b) {
    double d = std::fmod(a - b, 4.0 * kPi);
    if (d < 0) d += 4.0 * kPi;
    return std::min(d, 4.0 * kPi - d);
}

double angle_from(cplx z, cplx origin) {
    double s = std::arg(z / origin);
    if (s < 0) s += 2.0 * kPi;
    return s;
}

}  // namespace

BlaschkeParam::BlaschkeParam(cplx lambda)
    : lambda_(lambda), modulus_(std::abs(lambda)), phase_(lambda == cplx{} ? 0.0 : std::arg(lambda)) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
        throw DomainError("lambda must be finite");
    }
    if (!(modulus_ < 1.0)) {
        throw DomainError("|lambda| must be < 1 (got " + std::to_string(modulus_) + ")");
    }
}

BlaschkeParam BlaschkeParam::polar(double modulus, double phase) {
    if (modulus < 0.0) throw DomainError("modulus must be nonnegative");
    return BlaschkeParam(std::polar(modulus, phase));
}

cplx tau_eval(const BlaschkeParam& param, cplx z) {
    const cplx d = pole_factor(param, z);
    return z * (param.lambda() - z) / d;
}

cplx tau_deriv(const BlaschkeParam& param, cplx z) {
    const cplx d = pole_factor(param, z);
    const cplx lam = param.lambda();
    const cplx lamc = std::conj(lam);
    return ((lam - 2.0 * z) * d + lamc * z * (lam - z)) / (d * d);
}

cplx fixed_point(const BlaschkeParam& param) {
    const cplx lam = param.lambda();
    return (lam - 1.0) / (1.0 - std::conj(lam));
}

double lift(const BlaschkeParam& param, double x) {
    const double a = param.modulus();
    const double u = kPi * x - param.phase();
    return 2.0 * x + 1.0 + (2.0 / kPi) * std::atan2(a * std::sin(u), 1.0 - a * std::cos(u));
}

double lift_deriv(const BlaschkeParam& param, double x) {
    const double a = param.modulus();
    const double c = std::cos(kPi * x - param.phase());
    return 2.0 + 2.0 * (a * c - a * a) / (1.0 - 2.0 * a * c + a * a);
}

double angular_lift(const BlaschkeParam& param, double s) {
    const double y0 = std::arg(fixed_point(param)) / kPi;
    return kPi * (lift(param, y0 + s / kPi) - lift(param, y0));
}

BranchPair preimages(const BlaschkeParam& param, cplx w) {
    const cplx lam = param.lambda();
    const cplx b = -(lam + std::conj(lam) * w);
    const cplx disc = b * b - 4.0 * w;
    const cplx sq = std::sqrt(disc);
    // pick the sign that avoids cancellation, second root from Vieta
    const cplx q = (std::real(std::conj(b) * sq) >= 0.0) ? -0.5 * (b + sq) : -0.5 * (b - sq);
    if (q == cplx{}) {
        throw DegenerateRootsError("inverse_branches: w = 0 has a double preimage");
    }
    const cplx r1 = q;
    const cplx r2 = w / q;
    if (std::abs(r1 - r2) <= kRootSeparation) {
        throw DegenerateRootsError("inverse_branches: preimages coincide, w is outside the covering annulus");
    }
    return {r1, r2};
}

BranchPair inverse_branches(const BlaschkeParam& param, cplx w) {
    const auto [r1, r2] = preimages(param, w);

    const cplx z0 = fixed_point(param);
    const double t = angle_from(w, z0);
    const double g1 = angular_lift(param, angle_from(r1, z0));
    const double g2 = angular_lift(param, angle_from(r2, z0));
    const double keep = lift_distance(g1, t) + lift_distance(g2, t + 2.0 * kPi);
    const double swap = lift_distance(g1, t + 2.0 * kPi) + lift_distance(g2, t);
    if (keep <= swap) return {r1, r2};
    return {r2, r1};
}

double expansivity_margin(const BlaschkeParam& param, int n_samples) {
    if (n_samples < 256) throw DomainError("expansivity_margin: n_samples must be >= 256");
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_samples; ++j) {
        m = std::min(m, std::abs(tau_deriv(param, unit(2.0 * kPi * j / n_samples))));
    }
    return m;
}

bool certify_inner_radius(const BlaschkeParam& param, double r, int n_samples) {
    if (!(r > param.modulus() + kCertificateMargin) || !(r < 1.0)) return false;
    for (int j = 0; j < n_samples; ++j) {
        if (!(std::abs(tau_eval(param, r * unit(2.0 * kPi * j / n_samples))) < r - kCertificateMargin)) return false;
    }
    return true;
}

bool certify_outer_radius(const BlaschkeParam& param, double R, int n_samples) {
    if (!(R > 1.0)) return false;
    if (param.modulus() > 0.0 && !(R < 1.0 / param.modulus() - kCertificateMargin)) return false;
    for (int j = 0; j < n_samples; ++j) {
        if (!(std::abs(tau_eval(param, R * unit(2.0 * kPi * j / n_samples))) > R + kCertificateMargin)) return false;
    }
    return true;
}

AnnulusBounds find_annulus(const BlaschkeParam& param) {
    // z tau'(z) / tau(z) is real on the circle; its sign fixes the orientation
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = 0; j < 4096; ++j) {
        const cplx z = unit(2.0 * kPi * j / 4096);
        const double v = std::real(z * tau_deriv(param, z) / tau_eval(param, z));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi < -1.0) throw OrientationError("find_annulus: tau reverses orientation; only the orientation-preserving case is implemented");
    if (!(lo > 1.0)) throw ConvergenceError("find_annulus: tau is not expanding on the circle");

    auto inner = [&](double r) { return certify_inner_radius(param, r, 4096) && certify_inner_radius(param, r, 8192); };
    auto outer = [&](double R) { return certify_outer_radius(param, R, 4096) && certify_outer_radius(param, R, 8192); };

    AnnulusBounds best{0.0, 0.0};
    for (int k = 0; k < 50; ++k) {
        const double r = (99 - k) / 100.0;
        if (!inner(r)) break;
        best.r = r;
    }
    for (int k = 0; k < 50; ++k) {
        const double R = (101 + k) / 100.0;
        if (!outer(R)) break;
        best.R = R;
    }
    if (best.r == 0.0 || best.R == 0.0) {
        throw ConvergenceError("find_annulus: no certified annulus on the search grid (|lambda| too close to 1)");
    }
    return best;
}

}  // namespace spectre
