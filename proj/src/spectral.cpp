#include "spectre/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "spectre/errors.hpp"
#include "extended_precision.hpp"

namespace spectre {

namespace {

constexpr double kTieTolerance = 1e-12;

bool same_modulus(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::max(a, b)); }

template <typename T, typename Key>
void sort_modulus_then_phase(std::vector<T>& items, Key value_of) {
    std::stable_sort(items.begin(), items.end(),
                     [&](const T& a, const T& b) { return std::abs(value_of(a)) > std::abs(value_of(b)); });
    // equal moduli: phase ascending, applied group-wise so the order stays a strict weak one
    auto first = items.begin();
    while (first != items.end()) {
        auto last = first + 1;
        while (last != items.end() && same_modulus(std::abs(value_of(*first)), std::abs(value_of(*last)))) ++last;
        std::stable_sort(first, last, [&](const T& a, const T& b) { return std::arg(value_of(a)) < std::arg(value_of(b)); });
        first = last;
    }
}

cplx ipow(cplx base, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

SpectrumReport pair_greedy(std::span<const cplx> computed, const SpectrumPrediction& prediction,
                           std::vector<cplx> predicted, double tol, double spurious_floor) {
    if (!(tol > 0.0)) throw DomainError("match_spectra: tol must be > 0");
    SpectrumReport rep;
    rep.computed.assign(computed.begin(), computed.end());
    rep.prediction = prediction;
    rep.predicted_values = std::move(predicted);
    rep.tol = tol;

    std::vector<bool> used(rep.computed.size(), false);
    for (int p = 0; p < static_cast<int>(rep.predicted_values.size()); ++p) {
        const cplx target = rep.predicted_values[p];
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int c = 0; c < static_cast<int>(rep.computed.size()); ++c) {
            if (used[c]) continue;
            const double d = std::abs(rep.computed[c] - target);
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        if (best >= 0 && best_dist < tol) {
            used[best] = true;
            rep.pairing.push_back({best, p, best_dist});
        } else {
            rep.unmatched_predicted.push_back(p);
        }
    }
    for (int c = 0; c < static_cast<int>(rep.computed.size()); ++c) {
        if (used[c]) continue;
        const double m = std::abs(rep.computed[c]);
        if (m < tol) {
            rep.pairing.push_back({c, -1, m});
        } else if (m >= spurious_floor) {
            rep.unmatched_computed.push_back(c);
        }
    }
    for (const auto& pr : rep.pairing) rep.max_pair_error = std::max(rep.max_pair_error, pr.error);
    return rep;
}

}  // namespace

std::string_view to_string(EigenFamily family) {
    switch (family) {
        case EigenFamily::leading: return "leading";
        case EigenFamily::circle: return "circle";
        case EigenFamily::fixed_point: return "fixed_point";
    }
    return "unknown";
}

std::vector<cplx> SpectrumPrediction::expanded() const {
    std::vector<cplx> out;
    for (const auto& e : entries) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.value);
    return out;
}

int SpectrumPrediction::total_multiplicity() const {
    int t = 0;
    for (const auto& e : entries) t += e.multiplicity;
    return t;
}

SpectrumPrediction predicted_spectrum(const BlaschkeParam& param, int n_max) {
    if (n_max < 1) throw DomainError("predicted_spectrum: n_max must be >= 1");
    SpectrumPrediction pred;
    pred.lambda = param.lambda();
    pred.depth = n_max;
    pred.entries.push_back({cplx{1.0, 0.0}, 1, EigenFamily::leading, 0});
    const cplx lam = param.lambda();
    if (lam != cplx{}) {
        for (int n = 1; n <= n_max; ++n) {
            if (param.is_real()) {
                pred.entries.push_back({ipow(lam, n), 2, EigenFamily::circle, n});
            } else {
                pred.entries.push_back({ipow(lam, n), 1, EigenFamily::circle, n});
                pred.entries.push_back({ipow(std::conj(lam), n), 1, EigenFamily::circle, n});
            }
        }
    }
    sort_modulus_then_phase(pred.entries, [](const PredictedEigenvalue& e) { return e.value; });
    return pred;
}

std::vector<cplx> eigenvalues_triangular(const TransferMatrix& matrix) {
    const auto rep = validate_structure(matrix, 1e-10);
    if (!rep.passed()) {
        throw StructureError(std::string("eigenvalues_triangular: structure property (") +
                             StructureReport::labels[rep.first_failure()] + ") violated by " +
                             std::to_string(rep.violation[rep.first_failure()]));
    }
    return matrix.diagonal();
}

std::vector<cplx> eigenvalues_dense(const Eigen::MatrixXcd& matrix) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalues_dense: complex QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<cplx> eigenvalues_dense(const Eigen::MatrixXd& matrix) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalues_dense: real QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<cplx> eigenvalues_dense_extended(const BlaschkeParam& param, int order, const QuadratureSpec& spec) {
    if (order < 1) throw DomainError("eigenvalues_dense_extended: N must be >= 1");
    spec.validate();
    const double tol = 1e5 * static_cast<double>(std::numeric_limits<detail::wide>::epsilon());
    return detail::wide_eigenvalues(detail::wide_fourier_matrix(param, order, tol, spec.max_points));
}

void sort_by_modulus(std::vector<cplx>& values) {
    sort_modulus_then_phase(values, [](cplx v) { return v; });
}

bool SpectrumReport::passed() const {
    if (!(max_pair_error < tol)) return false;
    for (const int p : unmatched_predicted) {
        if (std::abs(predicted_values[p]) >= tol) return false;
    }
    return !computed_must_match || unmatched_computed.empty();
}

const SpectrumPair* SpectrumReport::pair_of_computed(int i) const {
    for (const auto& p : pairing) {
        if (p.computed == i) return &p;
    }
    return nullptr;
}

SpectrumReport match_spectra(std::span<const cplx> computed, const SpectrumPrediction& prediction, double tol) {
    return pair_greedy(computed, prediction, prediction.expanded(), tol, tol);
}

SpectrumReport match_leading(std::span<const cplx> computed, const SpectrumPrediction& prediction, int count,
                             double tol) {
    auto predicted = prediction.expanded();
    if (count < 1 || count > static_cast<int>(predicted.size())) {
        throw DomainError("match_leading: count must be in [1, " + std::to_string(predicted.size()) + "]");
    }
    predicted.resize(static_cast<std::size_t>(count));
    const double floor = std::abs(predicted.back()) + tol;
    auto rep = pair_greedy(computed, prediction, std::move(predicted), tol, floor);
    rep.computed_must_match = true;
    return rep;
}

double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw DomainError("multiset_distance: sizes differ");
    std::vector<cplx> lhs(a.begin(), a.end());
    sort_by_modulus(lhs);
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const cplx x : lhs) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && std::abs(b[j] - x) < best_dist) {
                best_dist = std::abs(b[j] - x);
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

double branch_sum_residual(const BlaschkeParam& param, const TrigPolynomial& u, cplx mu, int samples) {
    const CircleFunction f = [&u](cplx z) { return u(z); };
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double t = 2.0 * kPi * j / samples;
        const cplx w{std::cos(t), std::sin(t)};
        worst = std::max(worst, std::abs(apply_transfer(param, f, w, TransferWeight::arc_length) - mu * u(w)));
    }
    return worst;
}

EigenFunction eigenfunction(const TransferMatrix& matrix, cplx eigenvalue, int copy) {
    const int N = matrix.order();
    std::vector<int> candidates;
    for (int n = -1; n >= -N; --n) {
        if (std::abs(matrix.at(n, n) - eigenvalue) < 1e-8) candidates.push_back(n);
    }
    for (int n = 0; n <= N; ++n) {
        if (std::abs(matrix.at(n, n) - eigenvalue) < 1e-8) candidates.push_back(n);
    }
    if (copy < 0 || copy >= static_cast<int>(candidates.size())) {
        throw NoSuchEigenvalueError("eigenfunction: no diagonal entry within 1e-8 of the requested eigenvalue (copy " +
                                    std::to_string(copy) + ")");
    }
    const auto structure = validate_structure(matrix, 1e-10);
    if (!structure.passed()) throw StructureError("eigenfunction: matrix is not block triangular");

    const int d = candidates[copy];
    const cplx mu = matrix.at(d, d);
    std::vector<cplx> v(matrix.size(), cplx{});
    auto coeff = [&](int n) -> cplx& { return v[n + N]; };
    coeff(d) = 1.0;

    auto solve = [&](int a, cplx rhs) {
        const cplx denom = mu - matrix.at(a, a);
        if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(mu))) {
            if (std::abs(rhs) > 1e-12) throw NoSuchEigenvalueError("eigenfunction: eigenvalue is defective in its block");
            return cplx{};
        }
        return rhs / denom;
    };
    if (d < 0) {
        // lower-triangular block: support on d..-1
        for (int a = d + 1; a <= -1; ++a) {
            cplx rhs{};
            for (int b = d; b < a; ++b) rhs += matrix.at(a, b) * coeff(b);
            coeff(a) = solve(a, rhs);
        }
    } else if (d > 0) {
        // upper-triangular block: support on 1..d
        for (int a = d - 1; a >= 1; --a) {
            cplx rhs{};
            for (int b = a + 1; b <= d; ++b) rhs += matrix.at(a, b) * coeff(b);
            coeff(a) = solve(a, rhs);
        }
    }
    double norm = 0.0;
    for (const cplx c : v) norm += std::norm(c);
    norm = std::sqrt(norm);
    for (cplx& c : v) c /= norm;

    EigenFunction ef;
    ef.coeffs = TrigPolynomial{-N, std::move(v)};
    ef.eigenvalue = mu;
    ef.residual = branch_sum_residual(matrix.param(), ef.coeffs, mu, 256);
    return ef;
}

bool ConvergenceTable::passed() const {
    return std::all_of(rows.begin(), rows.end(), [&](const ConvergenceRow& r) { return r.diff_from_previous <= tol; });
}

ConvergenceTable convergence_study(const BlaschkeParam& param, std::span<const int> orders, double tol,
                                   const QuadratureSpec& spec) {
    if (orders.empty()) throw DomainError("convergence_study: N_list must be nonempty");
    if (!std::is_sorted(orders.begin(), orders.end()) || orders.front() < 1) {
        throw DomainError("convergence_study: N_list must be increasing positive integers");
    }
    const int keep = 2 * orders.front() + 1;
    ConvergenceTable table;
    table.tol = tol;
    for (const int order : orders) {
        const auto start = std::chrono::steady_clock::now();
        auto values = eigenvalues_triangular(assemble(param, order, AssemblyMethod::quadrature, spec));
        sort_by_modulus(values);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        double diff = 0.0;
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back().eigenvalues;
            diff = multiset_distance(std::span(prev).first(keep), std::span(values).first(keep));
        }
        table.rows.push_back({order, std::move(values), diff, secs});
    }
    return table;
}

}  // namespace spectre
