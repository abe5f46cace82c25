#pragma once

#include "stabrad/interconnect.hpp"

#include <optional>
#include <vector>

namespace stabrad {

/// Perron pair of diag(|G_k(i omega0)|^2) E^{o2} with z l1-normalized.
struct PerronAt {
    double lambda = 0.0;
    RealVector z;
    std::vector<double> gains;
};

/// Throws DegenerateError when lambda == 0.
PerronAt perron_data_at(const CompositeSystem& sys, double omega0);

struct CertifyOptions {
    double eig_tol = 1e-7;       ///< absolute distance of the nearest eigenvalue to i*omega0
    double residual_tol = 1e-9;  ///< relative eigen-residual, scaled by max(|A_cl|, |A|)
};

struct WorstCaseCertificate {
    explicit WorstCaseCertificate(BlockPerturbation d) : delta(std::move(d)) {}

    BlockPerturbation delta;
    double omega0 = 0.0;
    double norm_2inf = 0.0;
    double norm_op = 0.0;
    /// 1/sqrt(lambda) for a constructed perturbation; empty for `certify` on arbitrary input.
    std::optional<double> target_radius;
    Complex closed_loop_eig;
    double eig_distance = 0.0;  ///< |closed_loop_eig - i*omega0|
    /// |(A_cl - i omega0 I) v| / (max(|A_cl|, |A|) |v|) for v = eigvec.
    double eig_residual = 0.0;
    ComplexVector eigvec;
    /// Residual of the analytically predicted eigenvector (construction only).
    std::optional<double> predicted_residual;
    double closed_loop_abscissa = 0.0;
    bool certified = false;

    /// Construction data: Perron vector, inputs u_k and outputs y_k = G_k(i omega0) u_k.
    RealVector perron_vector;
    std::vector<ComplexVector> inputs;
    std::vector<ComplexVector> outputs;
};

/// Rank-one destabilizing perturbation at omega0 and its eigen certificate.
///
/// For every block with z_k != 0, u_k is the top right-singular vector of
/// G_k(i omega0) scaled so |G_k u_k|^2 = z_k, and
/// Delta_kl = u_k e_kl y_l^H / sum_j e_kj^2 |y_j|^2.
/// The eigenvector x_k = (i omega0 - A_k)^{-1} B_k u_k is recorded as `eigvec`.
WorstCaseCertificate construct_delta(const CompositeSystem& sys, double omega0,
                                     const CertifyOptions& opts = {});

/// Same construction from a given Perron pair; z may carry any positive scaling.
WorstCaseCertificate construct_delta(const CompositeSystem& sys, double omega0, const PerronAt& perron,
                                     const CertifyOptions& opts = {});

/// Eigen check of A + B (Delta o E) C at i*omega0. Never throws on a failed check;
/// the outcome is recorded in `certified`.
WorstCaseCertificate certify(const CompositeSystem& sys, const BlockPerturbation& delta, double omega0,
                             const CertifyOptions& opts = {});

/// Spectral abscissa after scaling delta by (1 + epsilon).
double overshoot_abscissa(const CompositeSystem& sys, const BlockPerturbation& delta, double epsilon);

}  // namespace stabrad
