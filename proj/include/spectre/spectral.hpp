#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "spectre/fourier_transfer.hpp"

namespace spectre {

/// Which closed-form family an exact eigenvalue belongs to.
enum class EigenFamily {
    leading,      ///< the eigenvalue 1
    circle,       ///< lambda^n or conj(lambda)^n
    fixed_point,  ///< T'(x0)^{-n}, interval operator only
};

[[nodiscard]] std::string_view to_string(EigenFamily family);

struct PredictedEigenvalue {
    cplx value;
    int multiplicity;
    EigenFamily family;
    int power;  ///< n in lambda^n, conj(lambda)^n or T'(x0)^{-n}
};

/// Exact spectrum truncated to powers <= depth, with algebraic multiplicities.
/// Entries are ordered by decreasing modulus, then increasing phase. The point 0
/// of the spectrum is implicit.
struct SpectrumPrediction {
    cplx lambda;
    int depth = 0;
    std::vector<PredictedEigenvalue> entries;

    /// One value per unit of multiplicity, in entry order.
    [[nodiscard]] std::vector<cplx> expanded() const;
    [[nodiscard]] int total_multiplicity() const;
};

/// 1 (simple); for real lambda != 0 each lambda^n twice; otherwise lambda^n and
/// conj(lambda)^n once each, 1 <= n <= n_max. lambda = 0 gives {1}.
[[nodiscard]] SpectrumPrediction predicted_spectrum(const BlaschkeParam& param, int n_max);

/// Diagonal of the block-triangular matrix (its exact eigenvalues).
/// Throws StructureError unless validate_structure passes at 1e-10.
[[nodiscard]] std::vector<cplx> eigenvalues_triangular(const TransferMatrix& matrix);

/// All eigenvalues of a general dense matrix (Schur-based, backward stable).
/// Throws ConvergenceError when the QR iteration fails.
[[nodiscard]] std::vector<cplx> eigenvalues_dense(const Eigen::MatrixXcd& matrix);
[[nodiscard]] std::vector<cplx> eigenvalues_dense(const Eigen::MatrixXd& matrix);
[[nodiscard]] inline std::vector<cplx> eigenvalues_dense(const TransferMatrix& matrix) {
    return eigenvalues_dense(matrix.dense());
}

/// Dense eigenvalues of L^(N) with quadrature and QR iteration both in extended precision.
/// In double the rounding residue (~1e-17) left in the vanishing triangle is amplified by
/// the non-normal blocks; at lambda = 0.4, N = 12 the smallest eigenvalues move by 6e-6.
/// spec.max_points caps the point count; assemblies must agree to 1e5 ulp of the wide type.
[[nodiscard]] std::vector<cplx> eigenvalues_dense_extended(const BlaschkeParam& param, int order,
                                                           const QuadratureSpec& spec = {});

/// Sorts by decreasing modulus, ties (to 1e-12 relative) by increasing phase.
void sort_by_modulus(std::vector<cplx>& values);

struct SpectrumPair {
    int computed;   ///< index into SpectrumReport::computed
    int predicted;  ///< index into SpectrumReport::predicted_values, or -1 for the point 0
    double error;
};

struct SpectrumReport {
    std::vector<cplx> computed;
    SpectrumPrediction prediction;
    std::vector<cplx> predicted_values;  ///< prediction expanded by multiplicity
    std::vector<SpectrumPair> pairing;
    double max_pair_error = 0.0;
    std::vector<int> unmatched_computed;
    std::vector<int> unmatched_predicted;
    double tol = 0.0;
    /// Set by match_leading: computed values above the last requested prediction must all pair.
    bool computed_must_match = false;

    /// max_pair_error < tol and every predicted value of modulus >= tol is paired.
    [[nodiscard]] bool passed() const;
    /// Predicted value paired with computed[i], if any (0 for the zero point).
    [[nodiscard]] const SpectrumPair* pair_of_computed(int i) const;
};

/// Greedy pairing: predicted values in decreasing modulus order (phase breaks ties)
/// each take the nearest unused computed value within `tol`. Leftover computed
/// values of modulus < tol pair with the spectral point 0.
[[nodiscard]] SpectrumReport match_spectra(std::span<const cplx> computed, const SpectrumPrediction& prediction,
                                           double tol);

/// Like match_spectra but only the `count` largest predicted values must be found;
/// computed values below them in modulus may stay unmatched.
[[nodiscard]] SpectrumReport match_leading(std::span<const cplx> computed, const SpectrumPrediction& prediction,
                                           int count, double tol);

/// Minimal greedy distance between two multisets of equal size.
[[nodiscard]] double multiset_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Eigenvector of a transfer matrix as a Fourier coefficient vector.
struct EigenFunction {
    TrigPolynomial coeffs;
    cplx eigenvalue;
    /// sup over 256 circle points of |(L u)(w) - eigenvalue u(w)|, L by branch sum (arc-length weight)
    double residual;
};

/// Unit-norm eigenvector for the diagonal entry nearest `eigenvalue` (within 1e-8),
/// obtained by substitution inside its triangular block. `copy` selects among
/// equal diagonal entries: the negative-index block first, then index 0, then the positive
/// block, each in increasing |n|. The first copy in a block always has an eigenvector.
[[nodiscard]] EigenFunction eigenfunction(const TransferMatrix& matrix, cplx eigenvalue, int copy = 0);

/// sup over n equispaced circle points of |(L u)(w) - mu u(w)|.
[[nodiscard]] double branch_sum_residual(const BlaschkeParam& param, const TrigPolynomial& u, cplx mu,
                                         int samples = 256);

struct ConvergenceRow {
    int order;
    std::vector<cplx> eigenvalues;  ///< sorted by modulus
    double diff_from_previous;      ///< over the leading 2 min(N_list) + 1 eigenvalues; 0 for the first row
    double seconds;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double tol = 0.0;
    [[nodiscard]] bool passed() const;
};

[[nodiscard]] ConvergenceTable convergence_study(const BlaschkeParam& param, std::span<const int> orders, double tol,
                                                 const QuadratureSpec& spec = {});

}  // namespace spectre
