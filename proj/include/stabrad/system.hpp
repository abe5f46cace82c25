#pragma once

#include "stabrad/linalg.hpp"

#include <string>

namespace stabrad {

/// One subsystem x' = A x + B u, y = C x. There is no feedthrough term.
class StateSpaceBlock {
public:
    /// Throws InputError on inconsistent shapes or non-finite entries.
    StateSpaceBlock(DenseMatrix a, DenseMatrix b, DenseMatrix c, std::string label = {});

    const DenseMatrix& a() const noexcept { return a_; }
    const DenseMatrix& b() const noexcept { return b_; }
    const DenseMatrix& c() const noexcept { return c_; }
    const std::string& label() const noexcept { return label_; }

    Eigen::Index states() const noexcept { return a_.rows(); }
    Eigen::Index inputs() const noexcept { return b_.cols(); }
    Eigen::Index outputs() const noexcept { return c_.rows(); }

    /// True when every entry of A, B and C has zero imaginary part.
    bool is_real() const noexcept { return real_; }

private:
    DenseMatrix a_;
    DenseMatrix b_;
    DenseMatrix c_;
    std::string label_;
    bool real_ = true;
};

/// C (sI - A)^{-1} B, one LU solve against all columns of B.
///
/// Throws SingularityError if s lies within `tol * max(1, |A|)` of the spectrum of A.
DenseMatrix transfer_eval(const StateSpaceBlock& block, Complex s, double tol = 1e-12);

/// |G(i omega)|, the largest singular value of the frequency response.
double block_gain(const StateSpaceBlock& block, double omega);

struct HinfResult {
    double gamma = 0.0;       ///< attained gain, |G(i omega_peak)|
    double omega_peak = 0.0;
    double upper_bound = 0.0; ///< level at which the Hamiltonian test found no imaginary eigenvalues
    int iterations = 0;
};

/// Peak gain sup |G(i omega)| by Hamiltonian bisection.
///
/// gamma <= |G|_inf <= upper_bound and upper_bound - gamma <= tol * upper_bound.
/// Throws InputError if the block is not exponentially stable.
HinfResult hinf_norm(const StateSpaceBlock& block, double tol = 1e-8);

bool is_exp_stable(const StateSpaceBlock& block);

/// A frequency beyond which |G(i omega)| <= epsilon: |A| + |B||C|/epsilon.
/// Returns |A| when epsilon already dominates the peak gain.
double tail_bound_frequency(const StateSpaceBlock& block, double epsilon);

/// Variant reusing a known upper bound on the peak gain.
double tail_bound_frequency(const StateSpaceBlock& block, double epsilon, double hinf_upper);

}  // namespace stabrad
