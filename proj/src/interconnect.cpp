#include "stabrad/interconnect.hpp"

#include "stabrad/errors.hpp"

#include <cmath>
#include <sstream>

namespace stabrad {

InterconnectionMatrix::InterconnectionMatrix(RealMatrix e) : e_(std::move(e)) {
    if (e_.rows() < 1 || e_.rows() != e_.cols()) {
        throw InputError("interconnection matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < e_.rows(); ++i) {
        for (Eigen::Index j = 0; j < e_.cols(); ++j) {
            if (!std::isfinite(e_(i, j)) || e_(i, j) < 0.0) {
                std::ostringstream os;
                os << "E must be nonnegative: E[" << i << "][" << j << "] = " << e_(i, j);
                throw InputError(os.str());
            }
        }
    }
}

Eigen::Index CompositeSystem::total_states() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.states();
    return n;
}

bool CompositeSystem::is_real() const {
    for (const auto& b : blocks) {
        if (!b.is_real()) return false;
    }
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < issues.size(); ++k) {
        if (k) os << "\n";
        os << issues[k];
    }
    return os.str();
}

ValidationReport validate(const CompositeSystem& sys) {
    ValidationReport report;
    const auto n = static_cast<Eigen::Index>(sys.size());
    if (n < 1) {
        report.issues.push_back("N ≥ 1 required");
        return report;
    }
    if (sys.coupling.rows() != n || sys.coupling.cols() != n) {
        std::ostringstream os;
        os << "E must be " << n << "x" << n << ", got " << sys.coupling.rows() << "x"
           << sys.coupling.cols();
        report.issues.push_back(os.str());
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double e = sys.coupling(i, j);
                if (!std::isfinite(e) || e < 0.0) {
                    std::ostringstream os;
                    os << "E must be nonnegative: E[" << i << "][" << j << "] = " << e;
                    report.issues.push_back(os.str());
                }
            }
        }
    }
    for (std::size_t k = 0; k < sys.blocks.size(); ++k) {
        if (!is_exp_stable(sys.blocks[k])) {
            std::ostringstream os;
            os << "block " << k << " not exponentially stable (spectral abscissa "
               << spectral_abscissa(sys.blocks[k].a()) << ")";
            report.issues.push_back(os.str());
        }
    }
    return report;
}

void require_valid(const CompositeSystem& sys) {
    const auto report = validate(sys);
    if (!report.ok()) throw InputError("invalid system:\n" + report.summary());
}

BlockPerturbation::BlockPerturbation(std::size_t n, std::vector<DenseMatrix> blocks)
    : n_(n), blocks_(std::move(blocks)) {
    if (n_ == 0 || blocks_.size() != n_ * n_) {
        throw InputError("BlockPerturbation: expected an N x N grid of blocks with N >= 1");
    }
    for (const auto& b : blocks_) require_finite(b, "BlockPerturbation block");
}

BlockPerturbation BlockPerturbation::zeros(const CompositeSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<DenseMatrix> blocks;
    blocks.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            blocks.push_back(DenseMatrix::Zero(sys.blocks[i].inputs(), sys.blocks[j].outputs()));
        }
    }
    return {n, std::move(blocks)};
}

void BlockPerturbation::check_shape(const CompositeSystem& sys) const {
    if (sys.size() != n_) {
        std::ostringstream os;
        os << "perturbation has " << n_ << " block rows, system has " << sys.size() << " blocks";
        throw InputError(os.str());
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const auto& b = (*this)(i, j);
            if (b.rows() != sys.blocks[i].inputs() || b.cols() != sys.blocks[j].outputs()) {
                std::ostringstream os;
                os << "perturbation block (" << i << "," << j << ") is " << b.rows() << "x"
                   << b.cols() << ", expected " << sys.blocks[i].inputs() << "x"
                   << sys.blocks[j].outputs();
                throw InputError(os.str());
            }
        }
    }
}

BlockPerturbation BlockPerturbation::scaled(Complex factor) const {
    BlockPerturbation out = *this;
    for (auto& b : out.blocks_) b *= factor;
    return out;
}

BlockPerturbation operator+(const BlockPerturbation& lhs, const BlockPerturbation& rhs) {
    if (lhs.n_ != rhs.n_) throw InputError("BlockPerturbation sum: grid size mismatch");
    BlockPerturbation out = lhs;
    for (std::size_t k = 0; k < out.blocks_.size(); ++k) {
        if (out.blocks_[k].rows() != rhs.blocks_[k].rows() ||
            out.blocks_[k].cols() != rhs.blocks_[k].cols()) {
            throw InputError("BlockPerturbation sum: block shape mismatch");
        }
        out.blocks_[k] += rhs.blocks_[k];
    }
    return out;
}

DenseMatrix closed_loop_matrix(const CompositeSystem& sys, const BlockPerturbation& delta) {
    delta.check_shape(sys);
    if (sys.coupling.rows() != static_cast<Eigen::Index>(sys.size()) ||
        sys.coupling.cols() != static_cast<Eigen::Index>(sys.size())) {
        throw InputError("closed_loop_matrix: E does not match the number of blocks");
    }
    const Eigen::Index total = sys.total_states();
    DenseMatrix out = DenseMatrix::Zero(total, total);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto& bi = sys.blocks[i];
        out.block(row, row, bi.states(), bi.states()) = bi.a();
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < sys.size(); ++j) {
            const auto& bj = sys.blocks[j];
            const double e = sys.coupling(i, j);
            if (e != 0.0) {
                out.block(row, col, bi.states(), bj.states()) += e * (bi.b() * delta(i, j) * bj.c());
            }
            col += bj.states();
        }
        row += bi.states();
    }
    return out;
}

BlockPerturbation apply_hadamard(const BlockPerturbation& delta, const InterconnectionMatrix& e) {
    if (static_cast<Eigen::Index>(delta.size()) != e.size()) {
        throw InputError("apply_hadamard: perturbation and E differ in size");
    }
    BlockPerturbation out = delta;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        for (std::size_t j = 0; j < delta.size(); ++j) {
            out(i, j) *= e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

double delta_norm_2inf(const BlockPerturbation& delta) {
    double best = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < delta.size(); ++j) {
            const double nij = operator_norm(delta(i, j));
            row += nij * nij;
        }
        best = std::max(best, std::sqrt(row));
    }
    return best;
}

double delta_opnorm(const BlockPerturbation& delta) {
    double best = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        Eigen::Index cols = 0;
        for (std::size_t j = 0; j < delta.size(); ++j) cols += delta(i, j).cols();
        DenseMatrix row(delta(i, 0).rows(), cols);
        Eigen::Index at = 0;
        for (std::size_t j = 0; j < delta.size(); ++j) {
            row.middleCols(at, delta(i, j).cols()) = delta(i, j);
            at += delta(i, j).cols();
        }
        best = std::max(best, operator_norm(row));
    }
    return best;
}

}  // namespace stabrad
