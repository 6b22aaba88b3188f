#include "spectre/fourier_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include <unsupported/Eigen/FFT>

#include "spectre/errors.hpp"

namespace spectre {

namespace {

cplx ipow(cplx base, int exponent) {
    cplx result{1.0, 0.0};
    unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
    while (e != 0) {
        if (e & 1u) result *= base;
        base *= base;
        e >>= 1u;
    }
    return exponent < 0 ? 1.0 / result : result;
}

int next_pow2(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

int wrap(long long k, int m) {
    const long long r = k % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

std::vector<cplx> roots_of_unity(int m) {
    std::vector<cplx> w(m);
    for (int k = 0; k < m; ++k) {
        const double t = 2.0 * kPi * k / m;
        w[k] = {std::cos(t), std::sin(t)};
    }
    return w;
}

// Samples of the row generator e^{-in theta} ((1 - conj(lambda) z) / (lambda - z))^n at z = e^{2 pi i j / m}.
std::vector<cplx> row_generator(const BlaschkeParam& param, int n, const std::vector<cplx>& unit) {
    const int m = static_cast<int>(unit.size());
    const cplx lam = param.lambda();
    const cplx lamc = std::conj(lam);
    std::vector<cplx> g(m);
    for (int j = 0; j < m; ++j) {
        const cplx z = unit[j];
        const cplx base = n >= 0 ? (1.0 - lamc * z) / (lam - z) : (lam - z) / (1.0 - lamc * z);
        g[j] = unit[wrap(-static_cast<long long>(n) * j, m)] * ipow(base, n >= 0 ? n : -n);
    }
    return g;
}

cplx trapezoid_coefficient(const std::vector<cplx>& g, const std::vector<cplx>& unit, int l) {
    const int m = static_cast<int>(unit.size());
    cplx acc{};
    for (int j = 0; j < m; ++j) acc += g[j] * unit[wrap(static_cast<long long>(l) * j, m)];
    return acc / static_cast<double>(m);
}

Eigen::MatrixXcd quadrature_matrix(const BlaschkeParam& param, int order, int m) {
    const auto unit = roots_of_unity(m);
    const int size = 2 * order + 1;
    Eigen::MatrixXcd out(size, size);
    for (int n = -order; n <= order; ++n) {
        const auto g = row_generator(param, n, unit);
        for (int l = -order; l <= order; ++l) out(n + order, l + order) = trapezoid_coefficient(g, unit, l);
    }
    return out;
}

std::vector<cplx> fft_row(const BlaschkeParam& param, int n, int order, int m) {
    const auto g = row_generator(param, n, roots_of_unity(m));
    std::vector<cplx> coeffs;
    Eigen::FFT<double> fft;
    fft.inv(coeffs, g);  // (1/m) sum_j g_j e^{+2 pi i jk/m}
    std::vector<cplx> row(2 * order + 1);
    for (int l = -order; l <= order; ++l) row[l + order] = coeffs[wrap(l, m)];
    return row;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > UINT64_MAX) throw IndexOverflowError("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

void check_closed_form_range(int n, int l) {
    if (std::abs(n) > kClosedFormMaxIndex || std::abs(l) > kClosedFormMaxIndex) {
        throw IndexOverflowError("entry_closed_form: index (" + std::to_string(n) + ", " + std::to_string(l) +
                                 ") beyond the exact-binomial range " + std::to_string(kClosedFormMaxIndex));
    }
}

}  // namespace

cplx TrigPolynomial::operator()(cplx z) const {
    // Horner in z, then shift by z^lowest
    cplx acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc * ipow(z, lowest);
}

cplx apply_transfer(const BlaschkeParam& param, const CircleFunction& f, cplx w, TransferWeight weight) {
    const auto [p1, p2] = preimages(param, w);
    cplx acc{};
    for (const cplx phi : {p1, p2}) {
        const cplx dphi = 1.0 / tau_deriv(param, phi);
        const cplx wt = weight == TransferWeight::complex_derivative ? dphi : w * dphi / phi;
        acc += wt * f(phi);
    }
    return acc;
}

QuadratureSpec QuadratureSpec::from_environment() {
    QuadratureSpec spec;
    if (const char* cap = std::getenv("SPECTRE_QUAD_MAX"); cap != nullptr && *cap != '\0') {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || v < 64 || v > (1L << 26)) {
            throw DomainError(std::string("SPECTRE_QUAD_MAX must be an integer in [64, 2^26], got '") + cap + "'");
        }
        spec.max_points = static_cast<int>(v);
        spec.min_points = std::min(spec.min_points, spec.max_points);
    }
    return spec;
}

void QuadratureSpec::validate() const {
    if (min_points < 64) throw DomainError("QuadratureSpec: min_points must be >= 64");
    if (!(target_tol >= 1e-14)) throw DomainError("QuadratureSpec: target_tol must be >= 1e-14");
    if (max_points < min_points) throw DomainError("QuadratureSpec: max_points must be >= min_points");
}

std::string_view to_string(AssemblyMethod method) {
    switch (method) {
        case AssemblyMethod::quadrature: return "quadrature";
        case AssemblyMethod::fft: return "fft";
        case AssemblyMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

AssemblyMethod assembly_method_from_string(std::string_view name) {
    if (name == "quadrature") return AssemblyMethod::quadrature;
    if (name == "fft") return AssemblyMethod::fft;
    if (name == "closed_form") return AssemblyMethod::closed_form;
    throw DomainError("unknown assembly method '" + std::string(name) + "'");
}

TransferMatrix::TransferMatrix(BlaschkeParam param, int order, AssemblyMethod method, Eigen::MatrixXcd entries)
    : param_(param), order_(order), method_(method), entries_(std::move(entries)) {
    if (order < 1) throw DomainError("TransferMatrix: order must be >= 1");
    if (entries_.rows() != size() || entries_.cols() != size()) {
        throw DomainError("TransferMatrix: entries must be (2N+1) x (2N+1)");
    }
}

cplx TransferMatrix::at(int n, int l) const {
    if (!contains(n) || !contains(l)) throw DomainError("TransferMatrix::at: index outside {-N..N}");
    return entries_(n + order_, l + order_);
}

std::vector<cplx> TransferMatrix::diagonal() const {
    std::vector<cplx> d(size());
    for (int i = 0; i < size(); ++i) d[i] = entries_(i, i);
    return d;
}

TransferMatrix TransferMatrix::with_entry(int n, int l, cplx value) const {
    if (!contains(n) || !contains(l)) throw DomainError("TransferMatrix::with_entry: index outside {-N..N}");
    Eigen::MatrixXcd e = entries_;
    e(n + order_, l + order_) = value;
    return TransferMatrix(param_, order_, method_, std::move(e));
}

cplx entry_quadrature(const BlaschkeParam& param, int n, int l, const QuadratureSpec& spec) {
    spec.validate();
    int m = spec.min_points;
    auto at_points = [&](int points) {
        const auto unit = roots_of_unity(points);
        return trapezoid_coefficient(row_generator(param, n, unit), unit, l);
    };
    cplx prev = at_points(m);
    while (true) {
        if (m > spec.max_points / 2) {
            throw ConvergenceError("entry_quadrature: no convergence to " + std::to_string(spec.target_tol) + " within " +
                                   std::to_string(spec.max_points) + " points");
        }
        m *= 2;
        const cplx cur = at_points(m);
        if (std::abs(cur - prev) < spec.target_tol) return cur;
        prev = cur;
    }
}

std::vector<cplx> row_fft(const BlaschkeParam& param, int n, int order, const QuadratureSpec& spec) {
    spec.validate();
    if (order < 1) throw DomainError("row_fft: order must be >= 1");
    int m = next_pow2(std::max(spec.min_points, 8 * (order + 2)));
    if (m > spec.max_points) throw ConvergenceError("row_fft: initial point count exceeds max_points");
    auto prev = fft_row(param, n, order, m);
    while (true) {
        if (m > spec.max_points / 2) {
            throw ConvergenceError("row_fft: no convergence within " + std::to_string(spec.max_points) + " points");
        }
        m *= 2;
        auto cur = fft_row(param, n, order, m);
        double diff = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
        if (diff < spec.target_tol) return cur;
        prev = std::move(cur);
    }
}

cplx entry_closed_form_raw(const BlaschkeParam& param, int n, int l) {
    if (n <= 0) throw DomainError("entry_closed_form_raw: the printed formula covers n > 0 only");
    check_closed_form_range(n, l);
    if (l < n) return {};
    const cplx lam = param.lambda();
    const double mod2 = param.modulus() * param.modulus();
    const int span = l - n;
    const int top = span <= n ? span : n;
    double sum = 0.0;
    for (int m = 0; m <= top; ++m) {
        const double c = static_cast<double>(binomial(l - m - 1, n - 1)) * static_cast<double>(binomial(n, m));
        sum += c * std::pow(-mod2, top - m);
    }
    if (span <= n) return ipow(-std::conj(lam), 2 * n - l) * sum;
    return ipow(lam, l - 2 * n) * sum;
}

const SignReconciliation& reconcile_closed_form_sign() {
    static const SignReconciliation result = [] {
        const BlaschkeParam probe(cplx{0.3, 0.4});
        SignReconciliation r{false, 0.0, 0.0};
        for (int n = 1; n <= 5; ++n) {
            for (int l = 1; l <= 5; ++l) {
                const cplx q = entry_quadrature(probe, n, l);
                const cplx raw = entry_closed_form_raw(probe, n, l);
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                r.residual_plain = std::max(r.residual_plain, std::abs(raw - q));
                r.residual_alternating = std::max(r.residual_alternating, std::abs(sign * raw - q));
            }
        }
        if (r.residual_alternating < 1e-11) {
            r.alternating = true;
        } else if (!(r.residual_plain < 1e-11)) {
            throw ConvergenceError("closed-form sign probe: neither convention matches quadrature");
        }
        return r;
    }();
    return result;
}

cplx entry_closed_form(const BlaschkeParam& param, int n, int l) {
    check_closed_form_range(n, l);
    if (n == 0) return l == 0 ? cplx{1.0, 0.0} : cplx{};
    if (n < 0) return std::conj(entry_closed_form(param, -n, -l));
    const double sign = (reconcile_closed_form_sign().alternating && n % 2 != 0) ? -1.0 : 1.0;
    return sign * entry_closed_form_raw(param, n, l);
}

TransferMatrix assemble(const BlaschkeParam& param, int order, AssemblyMethod method, const QuadratureSpec& spec) {
    if (order < 1) throw DomainError("assemble: N must be >= 1");
    const int size = 2 * order + 1;
    switch (method) {
        case AssemblyMethod::quadrature: {
            spec.validate();
            int m = next_pow2(std::max(spec.min_points, 8 * (order + 2)));
            if (m > spec.max_points) throw ConvergenceError("assemble: initial point count exceeds max_points");
            Eigen::MatrixXcd prev = quadrature_matrix(param, order, m);
            while (true) {
                if (m > spec.max_points / 2) {
                    throw ConvergenceError("assemble: quadrature did not converge to " + std::to_string(spec.target_tol) +
                                           " within " + std::to_string(spec.max_points) + " points");
                }
                m *= 2;
                Eigen::MatrixXcd cur = quadrature_matrix(param, order, m);
                if ((cur - prev).cwiseAbs().maxCoeff() < spec.target_tol) {
                    return TransferMatrix(param, order, method, std::move(cur));
                }
                prev = std::move(cur);
            }
        }
        case AssemblyMethod::fft: {
            Eigen::MatrixXcd e(size, size);
            for (int n = -order; n <= order; ++n) {
                const auto row = row_fft(param, n, order, spec);
                for (int i = 0; i < size; ++i) e(n + order, i) = row[i];
            }
            return TransferMatrix(param, order, method, std::move(e));
        }
        case AssemblyMethod::closed_form: {
            Eigen::MatrixXcd e(size, size);
            for (int n = -order; n <= order; ++n) {
                for (int l = -order; l <= order; ++l) e(n + order, l + order) = entry_closed_form(param, n, l);
            }
            return TransferMatrix(param, order, method, std::move(e));
        }
    }
    throw DomainError("assemble: unknown method");
}

bool StructureReport::passed() const { return first_failure() < 0; }

int StructureReport::first_failure() const {
    for (int i = 0; i < 5; ++i) {
        if (!(violation[i] <= tol)) return i;
    }
    return -1;
}

StructureReport validate_structure(const TransferMatrix& matrix, double tol) {
    if (!(tol > 0.0)) throw DomainError("validate_structure: tol must be > 0");
    const int N = matrix.order();
    const cplx lam = matrix.param().lambda();
    StructureReport rep;
    rep.tol = tol;
    auto& v = rep.violation;
    v[0] = std::abs(matrix.at(0, 0) - 1.0);
    for (int l = -N; l <= N; ++l) {
        if (l != 0) v[1] = std::max(v[1], std::abs(matrix.at(0, l)));
    }
    for (int n = -N; n <= N; ++n) {
        for (int l = -N; l <= N; ++l) v[2] = std::max(v[2], std::abs(matrix.at(-n, -l) - std::conj(matrix.at(n, l))));
    }
    for (int n = 0; n <= N; ++n) v[3] = std::max(v[3], std::abs(matrix.at(-n, -n) - ipow(lam, n)));
    for (int n = 0; n <= N; ++n) {
        for (int l = -N; l < n; ++l) {
            v[4] = std::max({v[4], std::abs(matrix.at(n, l)), std::abs(matrix.at(-n, -l))});
        }
    }
    return rep;
}

double duality_check(const BlaschkeParam& param, const TrigPolynomial& f, const TrigPolynomial& g,
                     const QuadratureSpec& spec) {
    spec.validate();
    const CircleFunction ff = [&f](cplx z) { return f(z); };
    auto sides = [&](int m) {
        cplx lhs{};
        cplx rhs{};
        for (const cplx z : roots_of_unity(m)) {
            lhs += apply_transfer(param, ff, z, TransferWeight::complex_derivative) * g(z) * z;
            rhs += f(z) * g(tau_eval(param, z)) * z;
        }
        return std::pair{lhs / static_cast<double>(m), rhs / static_cast<double>(m)};
    };
    int m = spec.min_points;
    auto prev = sides(m);
    while (true) {
        if (m > spec.max_points / 2) throw ConvergenceError("duality_check: quadrature did not converge");
        m *= 2;
        const auto cur = sides(m);
        if (std::abs(cur.first - prev.first) < spec.target_tol && std::abs(cur.second - prev.second) < spec.target_tol) {
            return std::abs(cur.first - cur.second);
        }
        prev = cur;
    }
}

}  // namespace spectre
