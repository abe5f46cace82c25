#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>
#include <vector>

namespace stabrad {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerance used by residual checks unless a caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

bool all_finite(const DenseMatrix& m);

/// Throws InputError naming `what` if `m` is empty or has NaN/Inf entries.
void require_finite(const DenseMatrix& m, std::string_view what);

/// Largest singular value (the l2 -> l2 induced norm).
double operator_norm(const DenseMatrix& m);

std::vector<Complex> eigenvalues(const DenseMatrix& m);

struct EigenPair {
    Complex value;
    ComplexVector vector;
};

/// Eigenvalues with unit-norm eigenvectors.
std::vector<EigenPair> eigenpairs(const DenseMatrix& m);

/// max Re(lambda) over the spectrum.
double spectral_abscissa(const DenseMatrix& m);

/// Spectral radius and a nonnegative eigenvector of a nonnegative matrix.
///
/// `vector` is l1-normalized. When the eigenvector for the spectral radius is
/// not unique (reducible input), the sum of the normalized eigenvectors of all
/// distinguished classes is returned, which gives the uniform vector for the
/// identity.
struct PerronData {
    double radius = 0.0;
    RealVector vector;
};

PerronData spectral_radius_nonneg(const RealMatrix& m, double tol = kDefaultTol);

/// Same, for a complex-typed matrix whose entries must be real and nonnegative.
PerronData spectral_radius_nonneg(const DenseMatrix& m, double tol = kDefaultTol);

/// Entrywise square of a nonnegative matrix.
RealMatrix hadamard_square(const RealMatrix& e);
DenseMatrix hadamard_square(const DenseMatrix& e);

}  // namespace stabrad
