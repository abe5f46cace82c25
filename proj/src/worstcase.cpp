#include "stabrad/worstcase.hpp"

#include "stabrad/errors.hpp"
#include "stabrad/radius.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stabrad {

namespace {

// Residual scale: the closed loop can nearly vanish (A_cl = 0 for a scalar block),
// so the unperturbed dynamics bound it from below.
double residual_scale(const CompositeSystem& sys, const DenseMatrix& acl) {
    const double open = operator_norm(closed_loop_matrix(sys, BlockPerturbation::zeros(sys)));
    return std::max({operator_norm(acl), open, std::numeric_limits<double>::min()});
}

}  // namespace

PerronAt perron_data_at(const CompositeSystem& sys, double omega0) {
    require_valid(sys);
    const auto sample = mu_objective(sys, omega0);
    if (sample.mu <= 0.0) {
        std::ostringstream os;
        os << "no destabilizing construction exists at omega = " << omega0
           << " (coupled gain matrix has spectral radius 0)";
        throw DegenerateError(os.str());
    }
    RealMatrix m = hadamard_square(sys.coupling);
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const double g = sample.gains[static_cast<std::size_t>(k)];
        m.row(k) *= g * g;
    }
    auto perron = spectral_radius_nonneg(m);
    return {perron.radius, std::move(perron.vector), sample.gains};
}

WorstCaseCertificate certify(const CompositeSystem& sys, const BlockPerturbation& delta, double omega0,
                             const CertifyOptions& opts) {
    const DenseMatrix acl = closed_loop_matrix(sys, delta);
    const Complex target(0.0, omega0);
    const auto pairs = eigenpairs(acl);

    std::size_t nearest = 0;
    double abscissa = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        abscissa = std::max(abscissa, pairs[k].value.real());
        if (std::abs(pairs[k].value - target) < std::abs(pairs[nearest].value - target)) nearest = k;
    }

    const double acl_norm = residual_scale(sys, acl);
    const ComplexVector& v = pairs[nearest].vector;
    const ComplexVector r = acl * v - target * v;

    WorstCaseCertificate cert(delta);
    cert.omega0 = omega0;
    cert.norm_2inf = delta_norm_2inf(delta);
    cert.norm_op = delta_opnorm(delta);
    cert.closed_loop_eig = pairs[nearest].value;
    cert.eig_distance = std::abs(pairs[nearest].value - target);
    cert.eigvec = v;
    cert.eig_residual = r.norm() / (acl_norm * v.norm());
    cert.closed_loop_abscissa = abscissa;
    cert.certified = cert.eig_distance <= opts.eig_tol && cert.eig_residual <= opts.residual_tol;
    return cert;
}

WorstCaseCertificate construct_delta(const CompositeSystem& sys, double omega0, const CertifyOptions& opts) {
    return construct_delta(sys, omega0, perron_data_at(sys, omega0), opts);
}

WorstCaseCertificate construct_delta(const CompositeSystem& sys, double omega0, const PerronAt& perron,
                                     const CertifyOptions& opts) {
    if (!(perron.lambda > 0.0)) throw DegenerateError("construct_delta: Perron root must be positive");
    if (perron.z.size() != static_cast<Eigen::Index>(sys.size())) {
        throw InputError("construct_delta: Perron vector does not match the number of blocks");
    }
    const std::size_t n = sys.size();
    const Complex s(0.0, omega0);

    std::vector<ComplexVector> u(n);
    std::vector<ComplexVector> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& block = sys.blocks[k];
        const double zk = perron.z(static_cast<Eigen::Index>(k));
        if (zk <= 0.0) {
            u[k] = ComplexVector::Zero(block.inputs());
            y[k] = ComplexVector::Zero(block.outputs());
            continue;
        }
        const DenseMatrix g = transfer_eval(block, s);
        Eigen::JacobiSVD<DenseMatrix> svd(g, Eigen::ComputeFullV);
        const double sigma = svd.singularValues()(0);
        if (sigma <= 0.0) {
            throw NumericalError("construct_delta: positive Perron entry on a block with zero gain");
        }
        u[k] = svd.matrixV().col(0) * (std::sqrt(zk) / sigma);
        y[k] = g * u[k];
    }

    BlockPerturbation delta = BlockPerturbation::zeros(sys);
    for (std::size_t k = 0; k < n; ++k) {
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double e = sys.coupling(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            denom += e * e * y[j].squaredNorm();
        }
        if (denom == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l) {
            const double e = sys.coupling(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
            delta(k, l) = u[k] * (e * y[l].adjoint()) / denom;
        }
    }

    auto cert = certify(sys, delta, omega0, opts);
    cert.perron_vector = perron.z;
    cert.inputs = u;
    cert.outputs = y;
    cert.target_radius = 1.0 / std::sqrt(perron.lambda);

    // Predicted eigenvector, stacked blockwise.
    ComplexVector x(sys.total_states());
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& block = sys.blocks[k];
        DenseMatrix shifted = -block.a();
        shifted.diagonal().array() += s;
        x.segment(at, block.states()) = shifted.partialPivLu().solve(block.b() * u[k]);
        at += block.states();
    }
    const DenseMatrix acl = closed_loop_matrix(sys, delta);
    const double acl_norm = residual_scale(sys, acl);
    const double predicted = (acl * x - s * x).norm() / (acl_norm * x.norm());
    cert.predicted_residual = predicted;
    if (predicted <= cert.eig_residual) {
        cert.eigvec = x / x.norm();
        cert.eig_residual = predicted;
    }
    cert.certified = cert.eig_distance <= opts.eig_tol && cert.eig_residual <= opts.residual_tol &&
                     cert.norm_2inf <= *cert.target_radius * (1.0 + 1e-8);
    return cert;
}

double overshoot_abscissa(const CompositeSystem& sys, const BlockPerturbation& delta, double epsilon) {
    return spectral_abscissa(closed_loop_matrix(sys, delta.scaled(1.0 + epsilon)));
}

}  // namespace stabrad
