#include "stabrad/verify.hpp"

#include "stabrad/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace stabrad {

namespace {

constexpr int kMaxRedraws = 16;
constexpr double kBisectionRelTol = 1e-12;

bool any_active(const CompositeSystem& sys) {
    return (sys.coupling.array() > 0.0).any();
}

// Smallest t in (0, cap] with abscissa >= 0 along the ray, or nullopt.
std::optional<double> first_crossing(const CompositeSystem& sys, const BlockPerturbation& direction, double cap) {
    const auto unstable = [&](double t) {
        return spectral_abscissa(closed_loop_matrix(sys, direction.scaled(t))) >= 0.0;
    };
    double lo = 0.0;
    double hi = 0.0;
    for (int k = -10;; ++k) {
        const double t = std::min(std::ldexp(1.0, k), cap);
        if (unstable(t)) {
            hi = t;
            break;
        }
        lo = t;
        if (t >= cap) return std::nullopt;
    }
    while (hi - lo > kBisectionRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (unstable(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

std::string_view to_string(NormKind kind) {
    return kind == NormKind::opnorm ? "opnorm" : "norm_2inf";
}

NormKind parse_norm_kind(std::string_view text) {
    if (text == "opnorm" || text == "op") return NormKind::opnorm;
    if (text == "norm_2inf" || text == "2inf") return NormKind::norm_2inf;
    throw InputError("unknown norm kind '" + std::string(text) + "' (expected opnorm or 2inf)");
}

double perturbation_norm(const BlockPerturbation& delta, NormKind kind) {
    return kind == NormKind::opnorm ? delta_opnorm(delta) : delta_norm_2inf(delta);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

BlockPerturbation sample_delta(const CompositeSystem& sys, double target_norm, NormKind kind,
                               std::uint64_t seed) {
    if (!(target_norm > 0.0) || !std::isfinite(target_norm)) {
        throw InputError("sample_delta: target norm must be positive and finite");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool restrict_active = any_active(sys);

    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        BlockPerturbation delta = BlockPerturbation::zeros(sys);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            for (std::size_t j = 0; j < sys.size(); ++j) {
                if (restrict_active &&
                    sys.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0) {
                    continue;
                }
                auto& block = delta(i, j);
                for (Eigen::Index r = 0; r < block.rows(); ++r) {
                    for (Eigen::Index c = 0; c < block.cols(); ++c) {
                        const double re = normal(rng);
                        const double im = normal(rng);
                        block(r, c) = Complex(re, im);
                    }
                }
            }
        }
        const double norm = perturbation_norm(delta, kind);
        if (norm > 0.0) return delta.scaled(target_norm / norm);
    }
    throw NumericalError("sample_delta: repeated all-zero draws");
}

MonteCarloReport sample_stability(const CompositeSystem& sys, double target_norm, std::size_t n,
                                  std::uint64_t seed, NormKind kind, std::span<const BlockPerturbation> forced) {
    if (!(target_norm > 0.0)) throw InputError("sample_stability: target norm must be positive");
    MonteCarloReport report;
    report.samples = n + forced.size();
    report.target_norm = target_norm;
    report.seed = seed;
    report.norm = kind;
    report.forced_directions = forced.size();
    report.worst_abscissa = -std::numeric_limits<double>::infinity();

    const auto check = [&](const BlockPerturbation& delta) {
        const double a = spectral_abscissa(closed_loop_matrix(sys, delta));
        report.worst_abscissa = std::max(report.worst_abscissa, a);
        if (!(a < 0.0)) ++report.violations;
    };
    for (const auto& direction : forced) {
        const double norm = perturbation_norm(direction, kind);
        if (!(norm > 0.0)) throw InputError("sample_stability: forced direction is zero");
        check(direction.scaled(target_norm / norm));
    }
    for (std::size_t i = 0; i < n; ++i) check(sample_delta(sys, target_norm, kind, derive_seed(seed, i)));
    return report;
}

MonteCarloReport monte_carlo_stability(const CompositeSystem& sys, const RadiusReport& report, std::size_t n,
                                       double fraction, std::uint64_t seed, NormKind kind) {
    if (report.infinite()) throw InputError("monte_carlo_stability: radius is infinite");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        std::ostringstream os;
        os << "monte_carlo_stability: fraction must lie in (0, 1), got " << fraction;
        throw InputError(os.str());
    }
    if (n == 0) throw InputError("monte_carlo_stability: sample count must be positive");
    auto out = sample_stability(sys, fraction * *report.radius, n, seed, kind);
    out.fraction_of_radius = fraction;
    return out;
}

BruteForceResult brute_force_radius(const CompositeSystem& sys, NormKind kind, std::size_t budget,
                                    std::uint64_t seed, std::span<const BlockPerturbation> injected, double cap) {
    require_valid(sys);
    if (!(cap > 0.0)) throw InputError("brute_force_radius: cap must be positive");
    BruteForceResult result;
    result.radius = cap;
    result.reached_cap = true;

    std::size_t index = 0;
    const auto probe = [&](const BlockPerturbation& direction) {
        const auto t = first_crossing(sys, direction, cap);
        if (t && (result.reached_cap || *t < result.radius)) {
            result.radius = *t;
            result.reached_cap = false;
            result.best_direction = index;
        }
        ++index;
        ++result.directions;
    };
    for (const auto& d : injected) {
        d.check_shape(sys);
        const double norm = perturbation_norm(d, kind);
        if (!(norm > 0.0)) throw InputError("brute_force_radius: injected direction is zero");
        probe(d.scaled(1.0 / norm));
    }
    for (std::size_t i = 0; i < budget; ++i) probe(sample_delta(sys, 1.0, kind, derive_seed(seed, i)));
    return result;
}

bool scaling_check(const CompositeSystem& sys, double c, const SweepOptions& opts) {
    if (!(c > 0.0)) throw InputError("scaling_check: c must be positive");
    CompositeSystem scaled = sys;
    scaled.coupling *= c;
    const auto base = stability_radius(sys, opts);
    const auto other = stability_radius(scaled, opts);
    if (base.infinite() || other.infinite()) return base.infinite() && other.infinite();
    const double expected = *base.radius / c;
    return std::abs(*other.radius - expected) <= 1e-7 * expected;
}

}  // namespace stabrad
