#pragma once

#include "stabrad/linalg.hpp"
#include "stabrad/system.hpp"

#include <string>
#include <vector>

namespace stabrad {

/// Nonnegative N x N coupling strengths; e(i, j) scales output j into input i.
class InterconnectionMatrix {
public:
    /// Throws InputError naming the first negative or non-finite entry.
    explicit InterconnectionMatrix(RealMatrix e);

    const RealMatrix& values() const noexcept { return e_; }
    Eigen::Index size() const noexcept { return e_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return e_(i, j); }

private:
    RealMatrix e_;
};

/// The uncoupled diagonal system together with its coupling matrix.
///
/// Held unvalidated so that `validate` can itemize every problem; operations
/// that need a valid system call `require_valid`.
struct CompositeSystem {
    std::vector<StateSpaceBlock> blocks;
    RealMatrix coupling;

    std::size_t size() const noexcept { return blocks.size(); }
    Eigen::Index total_states() const;
    bool is_real() const;
};

struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const noexcept { return issues.empty(); }
    std::string summary() const;
};

ValidationReport validate(const CompositeSystem& sys);

/// Throws InputError carrying the itemized report when `sys` is invalid.
void require_valid(const CompositeSystem& sys);

/// N x N grid of complex blocks; block (i, j) maps output j (p_j) to input i (m_i).
class BlockPerturbation {
public:
    BlockPerturbation(std::size_t n, std::vector<DenseMatrix> blocks);

    /// All-zero perturbation shaped for `sys`.
    static BlockPerturbation zeros(const CompositeSystem& sys);

    std::size_t size() const noexcept { return n_; }
    DenseMatrix& operator()(std::size_t i, std::size_t j) { return blocks_[i * n_ + j]; }
    const DenseMatrix& operator()(std::size_t i, std::size_t j) const { return blocks_[i * n_ + j]; }

    /// Throws InputError if the block shapes do not match `sys`.
    void check_shape(const CompositeSystem& sys) const;

    BlockPerturbation scaled(Complex factor) const;

    friend BlockPerturbation operator+(const BlockPerturbation& lhs, const BlockPerturbation& rhs);

private:
    std::size_t n_;
    std::vector<DenseMatrix> blocks_;
};

/// A + B (Delta o E) C with block-diagonal A, B, C.
DenseMatrix closed_loop_matrix(const CompositeSystem& sys, const BlockPerturbation& delta);

/// Block (i, j) scaled by e(i, j).
BlockPerturbation apply_hadamard(const BlockPerturbation& delta, const InterconnectionMatrix& e);

/// max_i (sum_j |Delta_ij|^2)^{1/2}
double delta_norm_2inf(const BlockPerturbation& delta);

/// Induced norm for the l2-sum output norm and max input norm:
/// max_i |[Delta_i1 ... Delta_iN]|.
double delta_opnorm(const BlockPerturbation& delta);

}  // namespace stabrad
