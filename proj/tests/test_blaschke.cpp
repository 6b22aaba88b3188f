#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spectre/blaschke.hpp"
#include "spectre/errors.hpp"

using namespace spectre;

namespace {

cplx tau_direct(cplx lam, cplx z) { return z * (lam - z) / (1.0 - std::conj(lam) * z); }

std::vector<cplx> lambda_grid() {
    std::vector<cplx> out;
    for (double r : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        for (int k = 0; k < 8; ++k) out.push_back(std::polar(r, 2.0 * kPi * k / 8.0 - 3.0));
    }
    return out;
}

}  // namespace

TEST_CASE("parameter construction") {
    CHECK_THROWS_AS(BlaschkeParam(cplx{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(BlaschkeParam(cplx{0.8, 0.7}), DomainError);
    const auto p = BlaschkeParam::polar(0.7, -2.0137);
    CHECK(std::abs(p.lambda() - std::polar(0.7, -2.0137)) < 1e-15);
    CHECK(p.modulus() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(p.phase() == doctest::Approx(-2.0137).epsilon(1e-14));
    CHECK(BlaschkeParam(cplx{0.0, 0.0}).phase() == 0.0);
    CHECK(BlaschkeParam(cplx{-0.5, 0.0}).is_real());
}

TEST_CASE("tau values") {
    CHECK(std::abs(tau_eval(BlaschkeParam(cplx{0, 0}), cplx{0, 1}) - 1.0) < 1e-15);
    CHECK(std::abs(tau_eval(BlaschkeParam(cplx{0.4, 0}), -1.0) + 1.0) < 1e-15);
    CHECK(std::abs(tau_eval(BlaschkeParam(cplx{0.5, 0}), 1.0) + 1.0) < 1e-15);
    CHECK_THROWS_AS((void)tau_eval(BlaschkeParam(cplx{0.5, 0}), 2.0), PoleProximityError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> radius(0.0, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const cplx lam = std::polar(radius(rng), angle(rng));
        const cplx z = std::polar(1.0, angle(rng));
        const cplx w = tau_eval(BlaschkeParam(lam), z);
        worst = std::max(worst, std::abs(std::abs(w) - 1.0));
        worst = std::max(worst, std::abs(w - tau_direct(lam, z)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("tau derivative") {
    CHECK(std::abs(tau_deriv(BlaschkeParam(cplx{0, 0}), std::polar(1.0, 0.3)) + 2.0 * std::polar(1.0, 0.3)) < 1e-15);
    CHECK(std::abs(tau_deriv(BlaschkeParam(cplx{0.4, 0}), -1.0) - 10.0 / 7.0) < 1e-14);
    const BlaschkeParam mayer(cplx{0.1, std::sqrt(0.15)});
    CHECK(std::abs(tau_deriv(mayer, fixed_point(mayer)) - 15.0 / 7.0) < 1e-13);

    for (const cplx lam : lambda_grid()) {
        const BlaschkeParam p(lam);
        const double h = 1e-5;
        for (double rho : {0.8, 1.0, 1.2}) {
            for (int k = 0; k < 16; ++k) {
                const cplx z = std::polar(rho, 2.0 * kPi * k / 16.0);
                if (std::abs(1.0 - std::conj(lam) * z) < 0.3) continue;
                const cplx fd = (tau_direct(lam, z + h) - tau_direct(lam, z - h)) / (2.0 * h);
                const cplx d = tau_deriv(p, z);
                CHECK(std::abs(d - fd) < 1e-7 * std::max(1.0, std::abs(d)));
            }
        }
    }
}

TEST_CASE("inverse branches") {
    {
        const auto b = inverse_branches(BlaschkeParam(cplx{0, 0}), 1.0);
        CHECK(std::abs(b.z1 * b.z2 - 1.0) < 1e-15);
        CHECK(std::min(std::abs(b.z1 - cplx{0, 1}), std::abs(b.z1 - cplx{0, -1})) < 1e-15);
        CHECK(std::abs(b.z1 + b.z2) < 1e-15);
    }
    {
        const auto b = inverse_branches(BlaschkeParam(cplx{0.4, 0}), -1.0);
        CHECK(std::abs(b.z1 + b.z2) < 1e-14);
        CHECK(std::abs(std::abs(b.z1.real()) - 1.0) < 1e-14);
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (const cplx lam : lambda_grid()) {
        const BlaschkeParam p(lam);
        for (int i = 0; i < 25; ++i) {
            const cplx w = std::polar(1.0, angle(rng));
            const auto b = inverse_branches(p, w);
            CHECK(std::abs(tau_direct(lam, b.z1) - w) < 1e-12);
            CHECK(std::abs(tau_direct(lam, b.z2) - w) < 1e-12);
            CHECK(std::abs(b.z1 * b.z2 - w) < 1e-12);
            CHECK(std::abs(std::abs(b.z1) - 1.0) < 1e-12);
            CHECK(std::abs(b.z1 - b.z2) > 1e-6);
        }
    }
}

TEST_CASE("branch labelling covers the circle once per branch") {
    for (const cplx lam : {cplx{0.4, 0}, cplx{-0.7, 0}, cplx{0.3, 0.4}, std::polar(0.7, -2.0137)}) {
        const BlaschkeParam p(lam);
        const cplx z0 = fixed_point(p);
        CHECK(std::abs(inverse_branches(p, z0).z1 - z0) < 1e-12);

        // Track arg(phi_k / z0) continuously while w runs once around from z0.
        constexpr int kSteps = 4096;
        double sweep[2] = {0.0, 0.0};
        cplx prev[2] = {};
        cplx first2;
        for (int j = 0; j < kSteps; ++j) {
            const auto b = inverse_branches(p, z0 * std::polar(1.0, 2.0 * kPi * j / kSteps));
            const cplx cur[2] = {b.z1, b.z2};
            if (j == 0) first2 = b.z2;
            for (int k = 0; k < 2; ++k) {
                if (j > 0) sweep[k] += std::arg(cur[k] / prev[k]);
                prev[k] = cur[k];
            }
        }
        CHECK(sweep[0] > 0.0);
        CHECK(sweep[1] > 0.0);
        CHECK(std::abs(sweep[0] + sweep[1] - 2.0 * kPi) < 1e-2);
        // phi_1 ends where phi_2 starts.
        CHECK(std::abs(prev[0] - first2) < 1e-2);
        if (p.is_real()) CHECK(std::abs(sweep[0] - kPi) < 1e-2);
    }
}

TEST_CASE("fixed point") {
    CHECK(std::abs(fixed_point(BlaschkeParam(cplx{0.4, 0})) + 1.0) < 1e-15);
    CHECK(std::abs(fixed_point(BlaschkeParam(cplx{0, 0})) + 1.0) < 1e-15);
    const BlaschkeParam p(cplx{0.0, 0.5});
    const cplx z0 = fixed_point(p);
    CHECK(std::abs(z0 - cplx{-0.6, 0.8}) < 1e-15);
    CHECK(std::abs(tau_direct(p.lambda(), z0) - z0) < 1e-13);
    for (const cplx lam : lambda_grid()) {
        const cplx z = fixed_point(BlaschkeParam(lam));
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-13);
        CHECK(std::abs(tau_direct(lam, z) - z) < 1e-13);
    }
}

TEST_CASE("expansivity margin") {
    CHECK(expansivity_margin(BlaschkeParam(cplx{0, 0}), 256) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)expansivity_margin(BlaschkeParam(cplx{0.4, 0}), 100), DomainError);
    for (const cplx lam : lambda_grid()) {
        const double m = expansivity_margin(BlaschkeParam(lam), 1024);
        // |tau'| on the circle is 1 + (1 - |lam|^2) / |1 - conj(lam) z|^2 >= 1 + (1 - |lam|) / (1 + |lam|).
        CHECK(m > 1.0);
        CHECK(m >= 1.0 + (1.0 - std::abs(lam)) / (1.0 + std::abs(lam)) - 1e-12);
    }
    const double a = expansivity_margin(BlaschkeParam(cplx{0.4, 0}), 4096);
    const double b = expansivity_margin(BlaschkeParam(cplx{0.4, 0}), 8192);
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(a > 1.0);
    CHECK(a <= 2.0);
}

TEST_CASE("annulus") {
    const auto a0 = find_annulus(BlaschkeParam(cplx{0, 0}));
    CHECK(a0.r < 1.0);
    CHECK(a0.R > 1.0);
    CHECK(certify_inner_radius(BlaschkeParam(cplx{0, 0}), 0.9));
    CHECK(certify_outer_radius(BlaschkeParam(cplx{0, 0}), 1.1));

    for (const cplx lam : {cplx{0.4, 0}, cplx{0.8, 0}, cplx{0.3, 0.4}, cplx{-0.5, 0.2}}) {
        const BlaschkeParam p(lam);
        const auto ab = find_annulus(p);
        CHECK(ab.r < 1.0);
        CHECK(ab.R > 1.0);
        // Independent sampling certificate at twice the resolution.
        double sup_inner = 0.0;
        double inf_outer = 1e300;
        for (int k = 0; k < 8192; ++k) {
            const double t = 2.0 * kPi * k / 8192.0;
            sup_inner = std::max(sup_inner, std::abs(tau_direct(lam, std::polar(ab.r, t))));
            inf_outer = std::min(inf_outer, std::abs(tau_direct(lam, std::polar(ab.R, t))));
        }
        CHECK(sup_inner < ab.r);
        CHECK(inf_outer > ab.R);
        if (std::abs(lam - cplx{0.4, 0}) < 1e-15) {
            CHECK(ab.r <= 0.95);
            CHECK(ab.R >= 1.05);
        }
    }
    const auto a8 = find_annulus(BlaschkeParam(cplx{0.8, 0}));
    const auto a4 = find_annulus(BlaschkeParam(cplx{0.4, 0}));
    CHECK(a8.r >= a4.r);
    CHECK(a8.R <= a4.R);
    CHECK_THROWS_AS((void)find_annulus(BlaschkeParam(cplx{0.995, 0})), ConvergenceError);
}

TEST_CASE("lift") {
    const BlaschkeParam zero(cplx{0, 0});
    for (double x : {-3.2, -1.0, 0.0, 0.37, 2.5}) CHECK(lift(zero, x) == doctest::Approx(2 * x + 1).epsilon(1e-15));
    CHECK(std::abs(lift(BlaschkeParam(cplx{0.4, 0}), -1.0) + 1.0) < 1e-15);

    for (const cplx lam : lambda_grid()) {
        const BlaschkeParam p(lam);
        for (int k = 0; k <= 40; ++k) {
            const double x = -2.0 + 0.1 * k + 0.013;
            const double v = lift(p, x);
            CHECK(std::abs(lift(p, x + 2.0) - v - 4.0) < 1e-12);
            CHECK(std::abs(std::polar(1.0, kPi * v) - tau_direct(lam, std::polar(1.0, kPi * x))) < 1e-12);
            const double h = 1e-6;
            const double fd = (lift(p, x + h) - lift(p, x - h)) / (2 * h);
            CHECK(std::abs(lift_deriv(p, x) - fd) < 1e-6 * lift_deriv(p, x));
            if (p.is_real()) CHECK(lift_deriv(p, x) > 1.0);
        }
    }
}

TEST_CASE("angular lift") {
    const BlaschkeParam p(cplx{0.3, 0.4});
    const cplx z0 = fixed_point(p);
    CHECK(std::abs(angular_lift(p, 0.0)) < 1e-14);
    for (double s : {0.1, 1.0, 2.5, 4.0, 6.0}) {
        const double g = angular_lift(p, s);
        CHECK(std::abs(z0 * std::polar(1.0, g) - tau_direct(p.lambda(), z0 * std::polar(1.0, s))) < 1e-12);
        CHECK(std::abs(angular_lift(p, s + 2 * kPi) - g - 4 * kPi) < 1e-11);
        CHECK(angular_lift(p, s + 1e-3) > g);
    }
}
