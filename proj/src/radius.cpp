#include "stabrad/radius.hpp"

#include "stabrad/errors.hpp"
#include "stabrad/golden_section.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace stabrad {

namespace {

constexpr std::size_t kMaxRefinedPeaks = 32;

// A refined point replaces the incumbent only if it is larger beyond rounding,
// so flat peaks keep the exact grid or candidate frequency.
bool improves(double candidate, double incumbent) {
    return candidate > incumbent + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(incumbent);
}

RealMatrix coupled_gain_matrix(const RealMatrix& e2, const std::vector<double>& gains) {
    RealMatrix m = e2;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const double g = gains[static_cast<std::size_t>(k)];
        m.row(k) *= g * g;
    }
    return m;
}

std::vector<double> sweep_grid(double omega_lin, double log_lo, double omega_max, std::size_t points) {
    std::vector<double> grid;
    const std::size_t linear = points / 2;
    const std::size_t logarithmic = points - linear;
    for (std::size_t i = 0; i < linear; ++i) {
        grid.push_back(omega_lin * static_cast<double>(i) / static_cast<double>(linear - 1));
    }
    const double ratio = std::log(omega_max / log_lo);
    for (std::size_t i = 0; i < logarithmic; ++i) {
        grid.push_back(log_lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(logarithmic - 1)));
    }
    return grid;
}

}  // namespace

void SweepOptions::validate() const {
    if (grid_points < 16) throw InputError("SweepOptions: grid_points must be >= 16");
    if (!(tail_epsilon > 0.0) || !(refine_tol > 0.0) || !(objective_tol > 0.0)) {
        throw InputError("SweepOptions: tolerances must be positive");
    }
}

MuSample mu_objective(const CompositeSystem& sys, double omega) {
    MuSample out;
    out.omega = omega;
    out.gains.reserve(sys.size());
    for (const auto& block : sys.blocks) out.gains.push_back(block_gain(block, omega));
    const RealMatrix e2 = hadamard_square(sys.coupling);
    out.mu = spectral_radius_nonneg(coupled_gain_matrix(e2, out.gains)).radius;
    return out;
}

RadiusReport compute_theta(const CompositeSystem& sys, const SweepOptions& opts) {
    opts.validate();
    require_valid(sys);

    RadiusReport report;
    report.options = opts;
    const bool real = sys.is_real();
    const RealMatrix e2 = hadamard_square(sys.coupling);

    // Per-block peaks: frequency seeds and the certified upper bound.
    std::vector<double> candidates{0.0};
    std::vector<double> upper_gains;
    double scale = 0.0;
    double pole_lo = std::numeric_limits<double>::infinity();
    double pole_hi = 0.0;
    for (const auto& block : sys.blocks) {
        const auto h = hinf_norm(block, opts.objective_tol / 4.0);
        report.block_hinf.push_back(h.gamma);
        report.block_hinf_peak.push_back(h.omega_peak);
        upper_gains.push_back(h.upper_bound);
        scale = std::max(scale, h.gamma);
        candidates.push_back(h.omega_peak);
        for (const auto& p : eigenvalues(block.a())) {
            candidates.push_back(std::abs(p.imag()));
            pole_lo = std::min(pole_lo, std::abs(p));
            pole_hi = std::max(pole_hi, std::abs(p));
        }
    }

    double omega_max = 0.0;
    double peak_hi = 0.0;
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const auto& block = sys.blocks[k];
        const double w = scale > 0.0
                             ? tail_bound_frequency(block, opts.tail_epsilon * scale, upper_gains[k])
                             : operator_norm(block.a());
        omega_max = std::max(omega_max, w);
        peak_hi = std::max(peak_hi, std::abs(report.block_hinf_peak[k]));
    }
    omega_max = std::max({omega_max, pole_hi, peak_hi, 1e-300});
    report.omega_max = omega_max;

    const double omega_lin = std::min(omega_max, 2.0 * std::max(pole_hi, peak_hi));
    const double log_lo = std::min(std::max(1e-3 * pole_lo, 1e-12 * omega_max), 0.5 * omega_max);
    std::vector<double> grid = sweep_grid(omega_lin > 0.0 ? omega_lin : omega_max, log_lo, omega_max,
                                          opts.grid_points);
    grid.insert(grid.end(), candidates.begin(), candidates.end());
    if (!real) {
        const std::size_t half = grid.size();
        for (std::size_t i = 0; i < half; ++i) grid.push_back(-grid[i]);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<MuSample> evaluated;
    evaluated.reserve(grid.size() + 64 * kMaxRefinedPeaks);
    const auto evaluate = [&](double omega) -> const MuSample& {
        // Conjugate symmetry: real systems are sampled on omega >= 0 only.
        evaluated.push_back(mu_objective(sys, real ? std::abs(omega) : omega));
        return evaluated.back();
    };

    std::vector<double> mu_grid;
    mu_grid.reserve(grid.size());
    for (double w : grid) mu_grid.push_back(evaluate(w).mu);

    MuSample best;
    best.mu = -1.0;
    for (const auto& s : evaluated) {
        if (best.mu < 0.0 || improves(s.mu, best.mu)) best = s;
    }

    // Grid-local maxima, highest first.
    std::vector<std::size_t> peaks;
    const std::size_t count = grid.size();
    for (std::size_t i = 0; i < count; ++i) {
        const bool left_ok = i == 0 || mu_grid[i] >= mu_grid[i - 1];
        const bool right_ok = i + 1 == count || mu_grid[i] >= mu_grid[i + 1];
        if (left_ok && right_ok && mu_grid[i] > 0.0) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t a, std::size_t b) { return mu_grid[a] > mu_grid[b]; });
    if (peaks.size() > kMaxRefinedPeaks) peaks.resize(kMaxRefinedPeaks);

    for (std::size_t i : peaks) {
        double left = i > 0 ? grid[i - 1] : grid[i];
        const double right = i + 1 < count ? grid[i + 1] : grid[i];
        if (i == 0 && real && count > 1) left = -grid[1];
        if (right <= left) continue;
        const auto result = golden_section_maximize(
            [&](double w) { return evaluate(w).mu; }, left, right, opts.refine_tol);
        if (!result.converged) report.refinement_converged = false;
        if (improves(result.value, best.mu)) {
            best = mu_objective(sys, real ? std::abs(result.x) : result.x);
        }
    }

    report.mu_star = std::max(best.mu, 0.0);
    report.omega_star = best.omega;
    report.theta = std::sqrt(report.mu_star);
    if (report.theta > 0.0) report.radius = 1.0 / report.theta;
    report.lower_bound_theta2 = report.mu_star;
    report.upper_bound_theta2 =
        std::max(spectral_radius_nonneg(coupled_gain_matrix(e2, upper_gains)).radius, report.mu_star);
    report.possible_missed_peak = report.upper_bound_theta2 - report.lower_bound_theta2 >
                                  opts.objective_tol * report.upper_bound_theta2;

    std::sort(evaluated.begin(), evaluated.end(),
              [](const MuSample& a, const MuSample& b) { return a.omega < b.omega; });
    evaluated.erase(std::unique(evaluated.begin(), evaluated.end(),
                                [](const MuSample& a, const MuSample& b) { return a.omega == b.omega; }),
                    evaluated.end());
    report.trace = std::move(evaluated);
    return report;
}

RadiusReport stability_radius(const CompositeSystem& sys, const SweepOptions& opts) {
    return compute_theta(sys, opts);
}

void write_trace_csv(std::ostream& os, const RadiusReport& report) {
    const std::size_t n = report.block_hinf.size();
    os << "omega,mu";
    for (std::size_t k = 0; k < n; ++k) os << ",gain_" << (k + 1);
    os << "\n";
    const auto flags = os.flags();
    const auto precision = os.precision();
    os << std::setprecision(17);
    for (const auto& s : report.trace) {
        os << s.omega << "," << s.mu;
        for (double g : s.gains) os << "," << g;
        os << "\n";
    }
    os.flags(flags);
    os.precision(precision);
}

}  // namespace stabrad
