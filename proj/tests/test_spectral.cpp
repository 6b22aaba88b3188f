#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "spectre/errors.hpp"
#include "spectre/spectral.hpp"

using namespace spectre;

namespace {

/// Arc-length branch sum from the roots of z^2 - (lam + conj(lam) w) z + w = 0.
cplx branch_sum_oracle(cplx lam, cplx w, const std::function<cplx(cplx)>& f) {
    const cplx b = lam + std::conj(lam) * w;
    const cplx disc = std::sqrt(b * b - 4.0 * w);
    cplx acc = 0.0;
    for (const cplx z : {(b + disc) / 2.0, (b - disc) / 2.0}) {
        const cplx d = ((lam - 2.0 * z) * (1.0 - std::conj(lam) * z) + std::conj(lam) * z * (lam - z)) /
                       ((1.0 - std::conj(lam) * z) * (1.0 - std::conj(lam) * z));
        acc += w / (z * d) * f(z);
    }
    return acc;
}

std::vector<cplx> exact_multiset(cplx lam, int N) {
    std::vector<cplx> out{1.0};
    for (int n = 1; n <= N; ++n) {
        out.push_back(std::pow(lam, n));
        out.push_back(std::pow(std::conj(lam), n));
    }
    return out;
}

int count_near(const std::vector<cplx>& v, cplx x, double tol) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [&](cplx y) { return std::abs(y - x) < tol; }));
}

}  // namespace

TEST_CASE("predicted spectrum multiplicities") {
    const auto half = predicted_spectrum(BlaschkeParam(cplx{0.5, 0}), 3);
    REQUIRE(half.entries.size() == 4);
    CHECK(half.entries[0].value == cplx{1.0, 0.0});
    CHECK(half.entries[0].multiplicity == 1);
    for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(half.entries[n].value - std::pow(0.5, n)) < 1e-15);
        CHECK(half.entries[n].multiplicity == 2);
        CHECK(half.entries[n].family == EigenFamily::circle);
        CHECK(half.entries[n].power == n);
    }
    CHECK(half.total_multiplicity() == 7);
    CHECK(half.expanded().size() == 7);

    const auto zero = predicted_spectrum(BlaschkeParam(cplx{0, 0}), 5);
    REQUIRE(zero.entries.size() == 1);
    CHECK(zero.entries[0].multiplicity == 1);

    const cplx lam{0.3, 0.4};
    const auto c = predicted_spectrum(BlaschkeParam(lam), 2);
    CHECK(c.entries.size() == 5);
    CHECK(c.total_multiplicity() == 5);
    const auto e = c.expanded();
    for (const cplx want : {cplx{1.0, 0.0}, lam, std::conj(lam), lam * lam, std::conj(lam * lam)}) {
        CHECK(count_near(e, want, 1e-15) == 1);
    }
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(std::abs(e[i]) <= std::abs(e[i - 1]) + 1e-15);
}

TEST_CASE("triangular read-off") {
    const auto h = eigenvalues_triangular(assemble(BlaschkeParam(cplx{0.5, 0}), 3));
    const std::vector<double> expect{0.125, 0.25, 0.5, 1.0, 0.5, 0.25, 0.125};
    REQUIRE(h.size() == 7);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(h[i] - expect[i]) < 1e-13);

    const auto z = eigenvalues_triangular(assemble(BlaschkeParam(cplx{0, 0}), 3));
    for (int i = 0; i < 7; ++i) CHECK(std::abs(z[i] - (i == 3 ? 1.0 : 0.0)) < 1e-14);

    const auto bad = assemble(BlaschkeParam(cplx{0.4, 0}), 3).with_entry(2, 1, 0.5);
    CHECK_THROWS_AS((void)eigenvalues_triangular(bad), StructureError);

    for (cplx lam : {cplx{0.4, 0}, cplx{-0.7, 0}, cplx{0.3, 0.4}, std::polar(0.7, -2.0137)}) {
        const auto t = eigenvalues_triangular(assemble(BlaschkeParam(lam), 12));
        CHECK(multiset_distance(t, exact_multiset(lam, 12)) < 1e-12);
    }
}

TEST_CASE("dense eigensolver") {
    const auto h = eigenvalues_dense(assemble(BlaschkeParam(cplx{0.5, 0}), 3));
    CHECK(multiset_distance(h, exact_multiset(0.5, 3)) < 1e-8);

    // At lambda = 0 the zero eigenvalue sits in Jordan chains l -> 2l of length 3, so a
    // backward-stable solver returns values of order eps^(1/3).
    const auto z = eigenvalues_dense(assemble(BlaschkeParam(cplx{0, 0}), 4));
    CHECK(count_near(z, 1.0, 1e-12) == 1);
    CHECK(count_near(z, 0.0, 1e-4) == 8);
    const auto ze = eigenvalues_dense_extended(BlaschkeParam(cplx{0, 0}), 4);
    CHECK(count_near(ze, 1.0, 1e-15) == 1);
    CHECK(count_near(ze, 0.0, 1e-9) == 8);

    const auto m = assemble(BlaschkeParam(cplx{0.8, 0}), 10);
    CHECK(multiset_distance(eigenvalues_dense(m), eigenvalues_triangular(m)) < 1e-6);

    for (cplx lam : {cplx{0.2, 0}, cplx{-0.5, 0}, cplx{0.4, 0}, cplx{0.8, 0}, cplx{0.3, 0.4}, std::polar(0.7, -2.0137)}) {
        const BlaschkeParam p(lam);
        CHECK(multiset_distance(eigenvalues_dense(assemble(p, 8)), exact_multiset(lam, 8)) < 1e-8);
        const auto t = eigenvalues_triangular(assemble(p, 12));
        CHECK(multiset_distance(eigenvalues_dense_extended(p, 12), t) < 1e-8);
        CHECK(multiset_distance(eigenvalues_dense_extended(p, 12), exact_multiset(lam, 12)) < 1e-14);
    }
    // The double-precision solve of the same double matrix loses the smallest eigenvalues.
    CHECK(multiset_distance(eigenvalues_dense(assemble(BlaschkeParam(cplx{0.4, 0}), 12)), exact_multiset(0.4, 12)) > 1e-8);
    CHECK_THROWS_AS((void)eigenvalues_dense_extended(BlaschkeParam(cplx{0.4, 0}), 0), DomainError);

    Eigen::MatrixXd r(2, 2);
    r << 0, -1, 1, 0;
    const auto rot = eigenvalues_dense(r);
    CHECK(count_near(rot, cplx{0, 1}, 1e-14) == 1);
    CHECK(count_near(rot, cplx{0, -1}, 1e-14) == 1);
}

TEST_CASE("sorting and multiset distance") {
    std::vector<cplx> v{cplx{0, 0.5}, 1.0, cplx{0.5, 0}, cplx{0, -0.5}, 0.1};
    sort_by_modulus(v);
    CHECK(v[0] == cplx{1.0, 0.0});
    CHECK(v[1] == cplx{0, -0.5});
    CHECK(v[2] == cplx{0.5, 0});
    CHECK(v[3] == cplx{0, 0.5});
    CHECK(v[4] == cplx{0.1, 0});
    const std::vector<cplx> a{1.0, 2.0};
    const std::vector<cplx> b{2.0 + 1e-3, 1.0};
    CHECK(multiset_distance(a, b) == doctest::Approx(1e-3));
}

TEST_CASE("matching") {
    const BlaschkeParam p(cplx{0.5, 0});
    const auto pred = predicted_spectrum(p, 8);
    const auto exact = pred.expanded();
    const auto self = match_spectra(exact, pred, 1e-9);
    CHECK(self.max_pair_error == 0.0);
    CHECK(self.passed());

    const auto tri = eigenvalues_triangular(assemble(p, 8));
    const auto rep = match_spectra(tri, pred, 1e-9);
    CHECK(rep.passed());
    CHECK(rep.unmatched_predicted.empty());
    CHECK(rep.unmatched_computed.empty());
    CHECK(rep.max_pair_error < 1e-12);

    std::vector<cplx> missing = exact;
    missing.erase(std::find(missing.begin(), missing.end(), cplx{0.5, 0.0}));
    const auto miss = match_spectra(missing, pred, 1e-9);
    CHECK_FALSE(miss.passed());
    CHECK(miss.unmatched_predicted.size() == 1);

    std::vector<cplx> shifted = exact;
    shifted[3] += 1e-6;
    CHECK_FALSE(match_spectra(shifted, pred, 1e-9).passed());

    std::vector<cplx> extra = exact;
    extra.push_back(0.3);
    const auto ex = match_spectra(extra, pred, 1e-9);
    CHECK(ex.unmatched_computed.size() == 1);

    std::vector<cplx> tiny = exact;
    tiny.push_back(1e-11);
    const auto ti = match_spectra(tiny, pred, 1e-9);
    CHECK(ti.unmatched_computed.empty());
    REQUIRE(ti.pair_of_computed(static_cast<int>(tiny.size()) - 1) != nullptr);
    CHECK(ti.pair_of_computed(static_cast<int>(tiny.size()) - 1)->predicted == -1);

    // match_leading ignores values below the requested ones but not stray values above.
    std::vector<cplx> lead{1.0, 0.5, 0.5, 0.25, 0.25, cplx{0.01, 0.01}};
    CHECK(match_leading(lead, pred, 5, 1e-9).passed());
    lead.push_back(0.7);
    CHECK_FALSE(match_leading(lead, pred, 5, 1e-9).passed());
}

TEST_CASE("eigenfunctions") {
    const cplx lam{0.4, 0};
    const BlaschkeParam p(lam);
    const auto m = assemble(p, 8);

    const auto one = eigenfunction(m, 1.0);
    CHECK(one.residual < 1e-12);
    for (int k = one.coeffs.lowest; k <= one.coeffs.highest(); ++k) {
        if (k != 0) CHECK(std::abs(one.coeffs.coeffs[k - one.coeffs.lowest]) < 1e-12);
    }

    const auto inv = eigenfunction(m, lam, 0);
    const auto pos = eigenfunction(m, lam, 1);
    CHECK(inv.residual < 1e-10);
    CHECK(pos.residual < 1e-10);
    CHECK(std::abs(std::abs(inv.coeffs.coeffs[-1 - inv.coeffs.lowest]) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(pos.coeffs.coeffs[1 - pos.coeffs.lowest]) - 1.0) < 1e-12);

    // 1/z and z are eigenfunctions for the independent branch sum.
    for (int k = 0; k < 16; ++k) {
        const cplx w = std::polar(1.0, 0.2 + 2.0 * kPi * k / 16.0);
        CHECK(std::abs(branch_sum_oracle(lam, w, [](cplx z) { return 1.0 / z; }) - lam / w) < 1e-12);
        CHECK(std::abs(branch_sum_oracle(lam, w, [](cplx z) { return z; }) - lam * w) < 1e-12);
        CHECK(std::abs(branch_sum_oracle(lam, w, [](cplx) { return cplx{1.0, 0.0}; }) - 1.0) < 1e-12);
    }
    CHECK(branch_sum_residual(p, TrigPolynomial{-1, {1.0}}, lam) < 1e-12);
    CHECK(branch_sum_residual(p, TrigPolynomial{-1, {1.0}}, 0.3) > 0.05);

    CHECK_THROWS_AS((void)eigenfunction(m, 0.33), NoSuchEigenvalueError);

    for (cplx l2 : {cplx{0.4, 0}, cplx{-0.7, 0}, cplx{0.3, 0.4}, std::polar(0.7, -2.0137), cplx{0.8, 0}}) {
        const auto a = assemble(BlaschkeParam(l2), 10);
        for (int n = 0; n <= 4; ++n) {
            const cplx mu = std::pow(l2, n);
            const auto u = eigenfunction(a, mu, 0);
            CHECK(u.residual < 1e-8);
            CHECK(branch_sum_residual(BlaschkeParam(l2), u.coeffs, mu) == doctest::Approx(u.residual));
            if (n > 0) CHECK(eigenfunction(a, std::conj(mu), std::abs(mu.imag()) < 1e-15 ? 1 : 0).residual < 1e-8);
        }
    }
}

TEST_CASE("convergence study") {
    const std::vector<int> orders{4, 8, 12};
    const auto t = convergence_study(BlaschkeParam(cplx{0.5, 0}), orders, 1e-10);
    CHECK(t.passed());
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].diff_from_previous == 0.0);
    CHECK(t.rows[2].eigenvalues.size() == 25);

    const auto z = convergence_study(BlaschkeParam(cplx{0, 0}), orders, 1e-10);
    CHECK(z.passed());
    for (const auto& row : z.rows) CHECK(std::abs(row.eigenvalues[0] - 1.0) < 1e-12);

    const std::vector<int> wide{8, 16};
    CHECK(convergence_study(BlaschkeParam(cplx{0.8, 0}), wide, 1e-8).passed());
}
