#include "extended_precision.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spectre/errors.hpp"

#if defined(SPECTRE_HAVE_FLOAT128)
#include <boost/math/constants/constants.hpp>
#endif

namespace spectre::detail {

namespace {

#if defined(SPECTRE_HAVE_FLOAT128)
const wide kWidePi = boost::math::constants::pi<wide>();
const wide kWideEps = wide(1e-33);
#else
const wide kWidePi = 3.141592653589793238462643383279502884L;
const wide kWideEps = wide(1e-19L);
#endif

using std::abs;
using std::atan2;
using std::cos;
using std::sin;
using std::sqrt;

// G(x) = F(y0 + x + 1) - F(y0) - 1 with F the lift of tau, as in IntervalMapContext
struct WideLift {
    wide a;
    wide alpha;
    wide y0;
    wide F_y0;

    explicit WideLift(const BlaschkeParam& param) {
        const wide re = param.lambda().real();
        const wide im = param.lambda().imag();
        a = sqrt(re * re + im * im);
        alpha = a == 0 ? wide(0) : wide(atan2(im, re));
        // z0 = (lambda - 1) / (1 - conj(lambda))
        const wide nr = re - 1, ni = im, dr = 1 - re, di = im;
        const wide den = dr * dr + di * di;
        y0 = atan2((ni * dr - nr * di) / den, (nr * dr + ni * di) / den) / kWidePi;
        F_y0 = F(y0);
    }

    wide F(wide x) const {
        const wide u = kWidePi * x - alpha;
        return 2 * x + 1 + (2 / kWidePi) * atan2(a * sin(u), 1 - a * cos(u));
    }
    wide F_deriv(wide x) const {
        const wide c = cos(kWidePi * x - alpha);
        return 2 + 2 * (a * c - a * a) / (1 - 2 * a * c + a * a);
    }
    wide G(wide x) const { return F(y0 + x + 1) - F_y0 - 1; }
    wide G_deriv(wide x) const { return F_deriv(y0 + x + 1); }

    wide solve(wide t) const {
        wide lo = -3, hi = 3;
        wide y = std::clamp(wide((t + 1) / 2 - 1), lo, hi);
        for (int it = 0; it < 300; ++it) {
            const wide r = G(y) - t;
            if (r == 0) return y;
            if (r > 0) hi = y; else lo = y;
            wide next = y - r / G_deriv(y);
            if (!(next > lo && next < hi)) next = (lo + hi) / 2;
            const wide step = abs(next - y);
            y = next;
            if (step <= kWideEps * std::max(wide(1), wide(abs(y)))) break;
        }
        return y;
    }
};

}  // namespace

WideMatrix wide_collocation(const BlaschkeParam& param, int M) {
    const WideLift lift(param);
    std::vector<wide> nodes(M);
    for (int j = 0; j < M; ++j) nodes[j] = -cos(kWidePi * j / (M - 1));
    nodes.front() = -1;
    nodes.back() = 1;

    WideMatrix A = WideMatrix::Zero(M, M);
    std::vector<wide> terms(M);
    for (int j = 0; j < M; ++j) {
        for (int k = 1; k <= 2; ++k) {
            const wide y = std::clamp(lift.solve(nodes[j] + 2 * (k - 1)), wide(-1), wide(1));
            const wide d = 1 / lift.G_deriv(y);
            wide denom = 0;
            int hit = -1;
            for (int i = 0; i < M; ++i) {
                const wide diff = y - nodes[i];
                if (diff == 0) {
                    hit = i;
                    break;
                }
                wide w = (i % 2 == 0) ? wide(1) : wide(-1);
                if (i == 0 || i == M - 1) w /= 2;
                terms[i] = w / diff;
                denom += terms[i];
            }
            if (hit >= 0) {
                A(j, hit) += d;
            } else {
                for (int i = 0; i < M; ++i) A(j, i) += d * terms[i] / denom;
            }
        }
    }
    return A;
}

std::vector<cplx> wide_eigenvalues(const WideMatrix& A) {
    Eigen::EigenSolver<WideMatrix> solver(A, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("collocation eigenvalues: QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<cplx> out(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        out[i] = {static_cast<double>(ev(i).real()), static_cast<double>(ev(i).imag())};
    }
    return out;
}

std::vector<cplx> wide_eigenvalues(const WideComplexMatrix& A) {
    Eigen::ComplexEigenSolver<WideComplexMatrix> solver(A, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigenvalues: complex QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<cplx> out(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        out[i] = {static_cast<double>(ev(i).real()), static_cast<double>(ev(i).imag())};
    }
    return out;
}

namespace {

// entry(n, l) = mean over z_j of z^(l - n) g(z)^n, g = (1 - conj(lambda) z) / (lambda - z)
WideComplexMatrix trapezoid_fourier(const WideComplex& lam, int order, int points) {
    const int size = 2 * order + 1;
    WideComplexMatrix acc = WideComplexMatrix::Zero(size, size);
    std::vector<WideComplex> zpow(4 * order + 1);
    std::vector<WideComplex> gpow(size);
    for (int j = 0; j < points; ++j) {
        const wide t = 2 * kWidePi * j / points;
        const WideComplex z(cos(t), sin(t));
        const WideComplex zinv = std::conj(z);
        const WideComplex g = (wide(1) - std::conj(lam) * z) / (lam - z);
        const WideComplex ginv = (lam - z) / (wide(1) - std::conj(lam) * z);
        // zpow[k + 2 order] = z^k, gpow[n + order] = g^n
        zpow[2 * order] = wide(1);
        gpow[order] = wide(1);
        for (int k = 1; k <= 2 * order; ++k) {
            zpow[2 * order + k] = zpow[2 * order + k - 1] * z;
            zpow[2 * order - k] = zpow[2 * order - k + 1] * zinv;
        }
        for (int n = 1; n <= order; ++n) {
            gpow[order + n] = gpow[order + n - 1] * g;
            gpow[order - n] = gpow[order - n + 1] * ginv;
        }
        for (int n = -order; n <= order; ++n) {
            for (int l = -order; l <= order; ++l) {
                acc(n + order, l + order) += zpow[l - n + 2 * order] * gpow[n + order];
            }
        }
    }
    return acc / wide(points);
}

}  // namespace

WideComplexMatrix wide_fourier_matrix(const BlaschkeParam& param, int order, double tol, int max_points) {
    const WideComplex lam(param.lambda().real(), param.lambda().imag());
    int points = 256;
    while (points < 8 * (order + 2)) points *= 2;
    WideComplexMatrix prev = trapezoid_fourier(lam, order, points);
    while (true) {
        points *= 2;
        if (points > max_points) throw ConvergenceError("extended-precision assembly: no convergence within max_points");
        WideComplexMatrix next = trapezoid_fourier(lam, order, points);
        wide diff = 0;
        for (Eigen::Index i = 0; i < next.size(); ++i) diff = std::max(diff, abs(next(i) - prev(i)));
        if (diff < wide(tol)) return next;
        prev = std::move(next);
    }
}

}  // namespace spectre::detail
