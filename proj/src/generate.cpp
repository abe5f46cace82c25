#include "stabrad/generate.hpp"

#include "stabrad/errors.hpp"

#include <random>
#include <string>

namespace stabrad {

CouplingPattern parse_coupling_pattern(std::string_view text) {
    if (text == "ring") return CouplingPattern::ring;
    if (text == "line") return CouplingPattern::line;
    if (text == "dense") return CouplingPattern::dense;
    throw InputError("unknown coupling pattern '" + std::string(text) + "' (expected ring, line or dense)");
}

RealMatrix coupling_pattern(CouplingPattern pattern, std::size_t blocks) {
    const auto n = static_cast<Eigen::Index>(blocks);
    RealMatrix e = RealMatrix::Zero(n, n);
    switch (pattern) {
        case CouplingPattern::dense:
            e.setOnes();
            e.diagonal().setZero();
            break;
        case CouplingPattern::ring:
        case CouplingPattern::line:
            for (Eigen::Index i = 0; i + 1 < n; ++i) {
                e(i, i + 1) = 1.0;
                e(i + 1, i) = 1.0;
            }
            if (pattern == CouplingPattern::ring && n > 2) {
                e(0, n - 1) = 1.0;
                e(n - 1, 0) = 1.0;
            }
            break;
    }
    return e;
}

CompositeSystem heat_chain(std::size_t interior_points, std::size_t blocks, CouplingPattern pattern) {
    if (interior_points < 2) throw InputError("heat_chain: need at least 2 interior grid points");
    if (blocks < 2) throw InputError("heat_chain: need at least 2 blocks");
    const auto n = static_cast<Eigen::Index>(interior_points);
    const double h2 = static_cast<double>((interior_points + 1) * (interior_points + 1));

    DenseMatrix a = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = -2.0 * h2;
        if (i > 0) a(i, i - 1) = h2;
        if (i + 1 < n) a(i, i + 1) = h2;
    }
    DenseMatrix b = DenseMatrix::Zero(n, 1);
    b(0, 0) = 1.0;
    DenseMatrix c = DenseMatrix::Zero(1, n);
    c(0, n - 1) = 1.0;

    CompositeSystem sys;
    for (std::size_t k = 0; k < blocks; ++k) sys.blocks.emplace_back(a, b, c, "rod_" + std::to_string(k + 1));
    sys.coupling = coupling_pattern(pattern, blocks);
    return sys;
}

CompositeSystem random_stable(const RandomStableSpec& spec) {
    if (spec.blocks < 1 || spec.states < 1 || spec.inputs < 1 || spec.outputs < 1) {
        throw InputError("random_stable: blocks, states, inputs and outputs must be >= 1");
    }
    if (!(spec.margin > 0.0)) throw InputError("random_stable: margin must be positive");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto gaussian = [&](std::size_t rows, std::size_t cols) {
        DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = normal(rng);
        }
        return m;
    };

    CompositeSystem sys;
    for (std::size_t k = 0; k < spec.blocks; ++k) {
        DenseMatrix a = gaussian(spec.states, spec.states);
        const double shift = spectral_abscissa(a) + spec.margin;
        a.diagonal().array() -= shift;
        DenseMatrix b = gaussian(spec.states, spec.inputs);
        DenseMatrix c = gaussian(spec.outputs, spec.states);
        sys.blocks.emplace_back(std::move(a), std::move(b), std::move(c), "block_" + std::to_string(k + 1));
    }
    const auto n = static_cast<Eigen::Index>(spec.blocks);
    sys.coupling.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) sys.coupling(i, j) = uniform(rng);
    }
    require_valid(sys);
    return sys;
}

}  // namespace stabrad
