#pragma once

#include "stabrad/interconnect.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace stabrad {

struct SweepOptions {
    std::size_t grid_points = 2048;
    double tail_epsilon = 1e-6;
    double refine_tol = 1e-10;    ///< golden-section bracket width on omega
    double objective_tol = 1e-8;  ///< relative gap allowed between the Theta^2 bounds

    /// Throws InputError unless every field is positive and grid_points >= 16.
    void validate() const;
};

/// One evaluation of the coupled objective at a frequency.
struct MuSample {
    double omega = 0.0;
    double mu = 0.0;
    std::vector<double> gains;
};

/// mu(omega) = rho(diag(|G_k(i omega)|^2) E^{o2}); the gains are |G_k(i omega)|.
MuSample mu_objective(const CompositeSystem& sys, double omega);

struct RadiusReport {
    double theta = 0.0;
    /// nullopt encodes an infinite radius (theta == 0).
    std::optional<double> radius;
    double omega_star = 0.0;
    double mu_star = 0.0;
    double lower_bound_theta2 = 0.0;
    double upper_bound_theta2 = 0.0;
    /// Upper and lower Theta^2 bounds differ by more than objective_tol.
    bool possible_missed_peak = false;
    bool refinement_converged = true;
    std::vector<double> block_hinf;
    std::vector<double> block_hinf_peak;
    double omega_max = 0.0;
    /// Every evaluated frequency, sorted by omega.
    std::vector<MuSample> trace;
    SweepOptions options;

    bool infinite() const noexcept { return !radius.has_value(); }
};

/// Theta = sqrt(sup_omega mu(omega)) by a grid sweep with golden-section refinement,
/// bracketed below by the best sample and above by per-block peak gains.
RadiusReport compute_theta(const CompositeSystem& sys, const SweepOptions& opts = {});

/// r = 1 / Theta with 1/0 = infinity.
RadiusReport stability_radius(const CompositeSystem& sys, const SweepOptions& opts = {});

/// CSV `omega,mu,gain_1,...,gain_N` with 17 significant digits.
void write_trace_csv(std::ostream& os, const RadiusReport& report);

}  // namespace stabrad
