#pragma once

#include "stabrad/interconnect.hpp"
#include "stabrad/radius.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace stabrad {

enum class NormKind { opnorm, norm_2inf };

std::string_view to_string(NormKind kind);

/// Parses "opnorm"/"op" or "2inf"/"norm_2inf"; throws InputError otherwise.
NormKind parse_norm_kind(std::string_view text);

double perturbation_norm(const BlockPerturbation& delta, NormKind kind);

/// Per-sample seed derived from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Complex Gaussian perturbation rescaled to `target_norm` in the chosen norm.
///
/// Blocks with e_ij = 0 are left at zero since they cannot reach the closed loop
/// (unless every entry of E is zero, in which case all blocks are drawn).
BlockPerturbation sample_delta(const CompositeSystem& sys, double target_norm, NormKind kind,
                               std::uint64_t seed);

struct MonteCarloReport {
    std::size_t samples = 0;
    double fraction_of_radius = 0.0;
    double target_norm = 0.0;
    std::size_t violations = 0;
    double worst_abscissa = 0.0;
    std::uint64_t seed = 0;
    NormKind norm = NormKind::norm_2inf;
    std::size_t forced_directions = 0;
};

/// Checks stability of `n` random perturbations of norm fraction * radius.
/// Requires a finite radius and 0 < fraction < 1.
MonteCarloReport monte_carlo_stability(const CompositeSystem& sys, const RadiusReport& report, std::size_t n,
                                       double fraction, std::uint64_t seed,
                                       NormKind kind = NormKind::norm_2inf);

/// Unguarded sampler: forced directions are rescaled to `target_norm` and checked
/// first, then `n` random draws. Used for deliberate over-radius probes.
MonteCarloReport sample_stability(const CompositeSystem& sys, double target_norm, std::size_t n,
                                  std::uint64_t seed, NormKind kind,
                                  std::span<const BlockPerturbation> forced = {});

struct BruteForceResult {
    double radius = 0.0;       ///< min over directions of the first destabilizing scale
    bool reached_cap = false;  ///< no direction destabilized below the cap
    std::size_t directions = 0;
    std::optional<std::size_t> best_direction;  ///< index into injected-then-random order
};

/// Ray-bisection oracle: for each unit-norm direction, the smallest t with
/// spectral_abscissa(closed_loop(t * direction)) >= 0, capped at `cap`.
/// Injected directions are normalized and tried before the random ones.
BruteForceResult brute_force_radius(const CompositeSystem& sys, NormKind kind, std::size_t budget,
                                    std::uint64_t seed, std::span<const BlockPerturbation> injected = {},
                                    double cap = 1e6);

/// radius(sys with c E) == radius(sys) / c within 1e-7 relative (both infinite counts as equal).
bool scaling_check(const CompositeSystem& sys, double c, const SweepOptions& opts = {});

}  // namespace stabrad
