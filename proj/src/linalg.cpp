#include "stabrad/linalg.hpp"

#include "stabrad/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <complex>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace stabrad {

namespace {

void require_square(const DenseMatrix& m, std::string_view what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
        throw InputError(os.str());
    }
}

void require_nonneg(const RealMatrix& m, std::string_view what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j)) || m(i, j) < 0.0) {
                std::ostringstream os;
                os << what << ": entry (" << i << "," << j << ") = " << m(i, j)
                   << " is not a finite nonnegative number";
                throw InputError(os.str());
            }
        }
    }
}

RealMatrix real_nonneg_part(const DenseMatrix& m, std::string_view what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j).imag() != 0.0) {
                std::ostringstream os;
                os << what << ": entry (" << i << "," << j << ") has nonzero imaginary part";
                throw InputError(os.str());
            }
        }
    }
    RealMatrix r = m.real();
    require_nonneg(r, what);
    return r;
}

// Perron pair of an irreducible nonnegative matrix of size >= 2.
PerronData irreducible_perron(const RealMatrix& m) {
    Eigen::EigenSolver<RealMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on irreducible class");
    }
    const auto& values = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < values.size(); ++k) {
        if (values(k).real() > values(best).real()) best = k;
    }
    ComplexVector v = solver.eigenvectors().col(best);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    RealVector z = v.real().cwiseMax(0.0);
    z /= z.sum();
    return {values(best).real(), z};
}

// Shifted power iteration on I + M/rho; only used when the class-based
// construction fails its residual check.
RealVector power_fallback(const RealMatrix& m, double radius) {
    const Eigen::Index n = m.rows();
    RealVector z = RealVector::Constant(n, 1.0 / static_cast<double>(n));
    if (radius <= 0.0) return z;
    for (int it = 0; it < 20000; ++it) {
        RealVector next = z + m * z / radius;
        next /= next.sum();
        if ((next - z).lpNorm<1>() < 1e-15) return next;
        z = next;
    }
    return z;
}

double perron_residual(const RealMatrix& m, const PerronData& p) {
    return (m * p.vector - p.radius * p.vector).norm();
}

}  // namespace

bool all_finite(const DenseMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

void require_finite(const DenseMatrix& m, std::string_view what) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw InputError(std::string(what) + ": matrix must have at least one row and column");
    }
    if (!all_finite(m)) {
        throw InputError(std::string(what) + ": non-finite entry");
    }
}

double operator_norm(const DenseMatrix& m) {
    require_finite(m, "operator_norm");
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<DenseMatrix> svd(m);
    return svd.singularValues()(0);
}

std::vector<Complex> eigenvalues(const DenseMatrix& m) {
    require_finite(m, "eigenvalues");
    require_square(m, "eigenvalues");
    if (m.rows() == 1) return {m(0, 0)};
    // LAPACK's blocked QR is several times faster than Eigen's at the sizes sampled by verify.
    DenseMatrix work = m;
    const auto n = static_cast<lapack_int>(m.rows());
    std::vector<Complex> values(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, values.data(), nullptr,
                                          1, nullptr, 1);
    if (info != 0) throw NumericalError("eigensolver did not converge (zgeev info " + std::to_string(info) + ")");
    return values;
}

std::vector<EigenPair> eigenpairs(const DenseMatrix& m) {
    require_finite(m, "eigenpairs");
    require_square(m, "eigenpairs");
    Eigen::ComplexEigenSolver<DenseMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        ComplexVector v = solver.eigenvectors().col(k);
        v.normalize();
        out.push_back({solver.eigenvalues()(k), std::move(v)});
    }
    return out;
}

double spectral_abscissa(const DenseMatrix& m) {
    const auto values = eigenvalues(m);
    double best = values.front().real();
    for (const auto& v : values) best = std::max(best, v.real());
    return best;
}

PerronData spectral_radius_nonneg(const RealMatrix& m, double tol) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw InputError("spectral_radius_nonneg: expected a non-empty square matrix");
    }
    require_nonneg(m, "spectral_radius_nonneg");
    const Eigen::Index n = m.rows();

    // access(i, j): a path of length >= 1 from i to j in the graph i -> j iff m(i, j) > 0,
    // i.e. (M z)_i depends on z_j.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> access = (m.array() > 0.0).matrix();
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!access(i, k)) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (access(k, j)) access(i, j) = true;
            }
        }
    }

    // Communicating classes of the Frobenius normal form.
    std::vector<int> class_of(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<Eigen::Index>> classes;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (class_of[i] >= 0) continue;
        std::vector<Eigen::Index> members{i};
        class_of[i] = static_cast<int>(classes.size());
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (class_of[j] < 0 && access(i, j) && access(j, i)) {
                class_of[j] = class_of[i];
                members.push_back(j);
            }
        }
        classes.push_back(std::move(members));
    }

    std::vector<PerronData> local(classes.size());
    double radius = 0.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& idx = classes[c];
        if (idx.size() == 1) {
            local[c] = {m(idx[0], idx[0]), RealVector::Ones(1)};
        } else {
            RealMatrix sub(idx.size(), idx.size());
            for (std::size_t a = 0; a < idx.size(); ++a) {
                for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = m(idx[a], idx[b]);
            }
            local[c] = irreducible_perron(sub);
        }
        radius = std::max(radius, local[c].radius);
    }

    const auto is_max = [&](std::size_t c) { return local[c].radius >= radius * (1.0 - tol); };
    const auto reaches = [&](std::size_t from, std::size_t to) {
        return access(classes[from].front(), classes[to].front());
    };

    RealVector total = RealVector::Zero(n);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (!is_max(c)) continue;
        bool distinguished = true;
        for (std::size_t d = 0; d < classes.size() && distinguished; ++d) {
            if (d != c && is_max(d) && reaches(d, c)) distinguished = false;
        }
        if (!distinguished) continue;

        // Support: the class itself plus every index with access to it.
        std::vector<Eigen::Index> upstream;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (class_of[i] != static_cast<int>(c) && access(i, classes[c].front())) {
                upstream.push_back(i);
            }
        }
        RealVector z = RealVector::Zero(n);
        const auto& idx = classes[c];
        for (std::size_t a = 0; a < idx.size(); ++a) z(idx[a]) = local[c].vector(a);
        if (!upstream.empty()) {
            const auto u = static_cast<Eigen::Index>(upstream.size());
            RealMatrix lhs(u, u);
            RealVector rhs = RealVector::Zero(u);
            for (Eigen::Index a = 0; a < u; ++a) {
                for (Eigen::Index b = 0; b < u; ++b) {
                    lhs(a, b) = (a == b ? radius : 0.0) - m(upstream[a], upstream[b]);
                }
                for (std::size_t b = 0; b < idx.size(); ++b) {
                    rhs(a) += m(upstream[a], idx[b]) * local[c].vector(b);
                }
            }
            RealVector zu = lhs.partialPivLu().solve(rhs).cwiseMax(0.0);
            for (Eigen::Index a = 0; a < u; ++a) z(upstream[a]) = zu(a);
        }
        total += z / z.sum();
    }

    PerronData out{radius, total / total.sum()};
    const double scale = m.norm();
    if (!(perron_residual(m, out) <= tol * scale)) {
        out.vector = power_fallback(m, radius);
        if (!(perron_residual(m, out) <= tol * scale)) {
            throw NumericalError("spectral_radius_nonneg: Perron residual check failed");
        }
    }
    return out;
}

PerronData spectral_radius_nonneg(const DenseMatrix& m, double tol) {
    require_finite(m, "spectral_radius_nonneg");
    require_square(m, "spectral_radius_nonneg");
    return spectral_radius_nonneg(real_nonneg_part(m, "spectral_radius_nonneg"), tol);
}

RealMatrix hadamard_square(const RealMatrix& e) {
    if (e.size() == 0) throw InputError("hadamard_square: empty matrix");
    require_nonneg(e, "hadamard_square");
    return e.cwiseProduct(e);
}

DenseMatrix hadamard_square(const DenseMatrix& e) {
    require_finite(e, "hadamard_square");
    return hadamard_square(real_nonneg_part(e, "hadamard_square")).cast<Complex>();
}

}  // namespace stabrad
