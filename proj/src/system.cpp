#include "stabrad/system.hpp"

#include "stabrad/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace stabrad {

namespace {

bool is_real_matrix(const DenseMatrix& m) {
    return (m.imag().array() == 0.0).all();
}

double distance_to_spectrum(const DenseMatrix& a, Complex s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& lambda : eigenvalues(a)) best = std::min(best, std::abs(lambda - s));
    return best;
}

// Hamiltonian of the zero-feedthrough block at level gamma. Its purely imaginary
// eigenvalues i*omega are exactly the frequencies where gamma is a singular value of G(i*omega).
DenseMatrix hamiltonian(const StateSpaceBlock& block, double gamma) {
    const Eigen::Index n = block.states();
    DenseMatrix h(2 * n, 2 * n);
    h.topLeftCorner(n, n) = block.a();
    h.topRightCorner(n, n) = block.b() * block.b().adjoint() / gamma;
    h.bottomLeftCorner(n, n) = -block.c().adjoint() * block.c() / gamma;
    h.bottomRightCorner(n, n) = -block.a().adjoint();
    return h;
}

std::vector<double> imaginary_axis_frequencies(const DenseMatrix& h, double threshold) {
    std::vector<double> freqs;
    for (const auto& lambda : eigenvalues(h)) {
        if (std::abs(lambda.real()) < threshold) freqs.push_back(lambda.imag());
    }
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

}  // namespace

StateSpaceBlock::StateSpaceBlock(DenseMatrix a, DenseMatrix b, DenseMatrix c, std::string label)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), label_(std::move(label)) {
    require_finite(a_, "block A");
    require_finite(b_, "block B");
    require_finite(c_, "block C");
    std::ostringstream os;
    if (a_.rows() != a_.cols()) {
        os << "block A must be square, got " << a_.rows() << "x" << a_.cols();
    } else if (b_.rows() != a_.rows()) {
        os << "block B must have " << a_.rows() << " rows, got " << b_.rows();
    } else if (c_.cols() != a_.rows()) {
        os << "block C must have " << a_.rows() << " columns, got " << c_.cols();
    }
    if (!os.str().empty()) throw InputError(os.str());
    real_ = is_real_matrix(a_) && is_real_matrix(b_) && is_real_matrix(c_);
}

DenseMatrix transfer_eval(const StateSpaceBlock& block, Complex s, double tol) {
    DenseMatrix shifted = -block.a();
    shifted.diagonal().array() += s;
    Eigen::PartialPivLU<DenseMatrix> lu(shifted);
    if (lu.rcond() < 1e-13) {
        const double scale = std::max(1.0, operator_norm(block.a()));
        const double dist = distance_to_spectrum(block.a(), s);
        if (dist <= tol * scale) {
            std::ostringstream os;
            os << "transfer_eval: s = " << s << " is within " << dist << " of the spectrum of A";
            throw SingularityError(os.str(), dist);
        }
    }
    DenseMatrix g = block.c() * lu.solve(block.b());
    if (!all_finite(g)) {
        throw SingularityError("transfer_eval: resolvent overflow", distance_to_spectrum(block.a(), s));
    }
    return g;
}

double block_gain(const StateSpaceBlock& block, double omega) {
    return operator_norm(transfer_eval(block, Complex(0.0, omega)));
}

bool is_exp_stable(const StateSpaceBlock& block) {
    return spectral_abscissa(block.a()) < 0.0;
}

HinfResult hinf_norm(const StateSpaceBlock& block, double tol) {
    if (!(tol > 0.0)) throw InputError("hinf_norm: tol must be positive");
    if (!is_exp_stable(block)) throw InputError("hinf_norm: block is not exponentially stable");

    HinfResult out;
    if (operator_norm(block.b()) == 0.0 || operator_norm(block.c()) == 0.0) return out;

    const auto consider = [&](double omega) {
        const double g = block_gain(block, omega);
        if (g > out.gamma + 8.0 * std::numeric_limits<double>::epsilon() * out.gamma) {
            out.gamma = g;
            out.omega_peak = omega;
        }
    };

    // Initial lower bound from the natural frequencies of A.
    const auto poles = eigenvalues(block.a());
    consider(0.0);
    double wmin = std::numeric_limits<double>::infinity();
    double wmax = 0.0;
    for (const auto& p : poles) {
        consider(p.imag());
        consider(std::abs(p));
        if (!block.is_real()) consider(-std::abs(p));
        wmin = std::min(wmin, std::abs(p));
        wmax = std::max(wmax, std::abs(p));
    }
    if (out.gamma == 0.0) {
        for (int k = 0; k <= 64; ++k) {
            const double w = wmin * 1e-3 * std::pow(1e6 * wmax / wmin, k / 64.0);
            consider(w);
            if (!block.is_real()) consider(-w);
        }
    }
    if (out.gamma == 0.0) return out;

    const double hnorm_base = operator_norm(block.a());
    const auto crossings = [&](double level) {
        const DenseMatrix h = hamiltonian(block, level);
        return imaginary_axis_frequencies(h, 1e-8 * std::max(operator_norm(h), hnorm_base));
    };

    // Level test: returns true if some frequency was found with gain >= level.
    const auto below_norm = [&](double level) {
        const auto freqs = crossings(level);
        if (freqs.empty()) return false;
        for (double w : freqs) consider(w);
        for (std::size_t k = 0; k + 1 < freqs.size(); ++k) consider(0.5 * (freqs[k] + freqs[k + 1]));
        return out.gamma >= level;
    };

    double hi = 2.0 * out.gamma;
    int guard = 0;
    while (below_norm(hi)) {
        hi = 2.0 * std::max(hi, out.gamma);
        if (++guard > 200) throw NumericalError("hinf_norm: could not bracket the peak gain");
    }

    while (hi - out.gamma > tol * hi) {
        if (++out.iterations > 500) throw NumericalError("hinf_norm: bisection did not converge");
        const double mid = std::sqrt(out.gamma * hi);
        if (!below_norm(mid)) hi = mid;
    }
    out.upper_bound = hi;
    if (block.is_real()) out.omega_peak = std::abs(out.omega_peak);
    return out;
}

double tail_bound_frequency(const StateSpaceBlock& block, double epsilon, double hinf_upper) {
    if (!(epsilon > 0.0)) throw InputError("tail_bound_frequency: epsilon must be positive");
    const double norm_a = operator_norm(block.a());
    if (epsilon >= hinf_upper) return norm_a;
    return norm_a + operator_norm(block.b()) * operator_norm(block.c()) / epsilon;
}

double tail_bound_frequency(const StateSpaceBlock& block, double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("tail_bound_frequency: epsilon must be positive");
    return tail_bound_frequency(block, epsilon, hinf_norm(block).upper_bound);
}

}  // namespace stabrad
