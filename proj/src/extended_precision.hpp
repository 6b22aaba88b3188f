#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "spectre/blaschke.hpp"

#if defined(SPECTRE_HAVE_FLOAT128)
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#endif

namespace spectre::detail {

#if defined(SPECTRE_HAVE_FLOAT128)
using wide = boost::multiprecision::float128;
#else
using wide = long double;
#endif

using WideMatrix = Eigen::Matrix<wide, Eigen::Dynamic, Eigen::Dynamic>;
using WideComplex = std::complex<wide>;
using WideComplexMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;

/// Collocation matrix of the interval operator with every step (branch inversion,
/// barycentric weights, accumulation) carried out in `wide`.
WideMatrix wide_collocation(const BlaschkeParam& param, int M);

/// Eigenvalues of a wide matrix, rounded to double.
std::vector<cplx> wide_eigenvalues(const WideMatrix& A);
std::vector<cplx> wide_eigenvalues(const WideComplexMatrix& A);

/// Fourier-basis matrix, indices -order..order, by the periodic trapezoidal rule in `wide`.
/// The point count starts at 256 and doubles until two assemblies agree entrywise to
/// `tol`; ConvergenceError past `max_points`.
WideComplexMatrix wide_fourier_matrix(const BlaschkeParam& param, int order, double tol, int max_points);

}  // namespace spectre::detail
