// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "stabrad/generate.hpp"
#include "stabrad/io.hpp"
#include "stabrad/radius.hpp"
#include "stabrad/system.hpp"
#include "stabrad/verify.hpp"
#include "stabrad/worstcase.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace stabrad;

namespace {

using Clock = std::chrono::steady_clock;

// Brute-force oracle value for heat_chain(n = 10, N = 3, ring), pinned from a
// run with the constructed direction injected.
constexpr double kHeatRingRadius = 941.15912576019764;

// Random-direction rays may never destabilize below this scale.
constexpr double kBruteForceCap = 1e6;

struct Named {
    std::string name;
    CompositeSystem sys;
};

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [" << what << "]";
        }
    }
};

double rel(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

CompositeSystem load_fixture(const char* name) {
    return parse_system_file(std::filesystem::path(STABRAD_FIXTURE_DIR) / name).system;
}

std::vector<Named> random_suite() {
    std::vector<Named> out;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> blocks(1, 4);
    std::uniform_int_distribution<int> states(1, 6);
    std::uniform_int_distribution<int> ports(1, 2);
    for (int k = 0; k < 20; ++k) {
        RandomStableSpec spec;
        spec.blocks = static_cast<std::size_t>(blocks(rng));
        spec.states = static_cast<std::size_t>(states(rng));
        spec.inputs = static_cast<std::size_t>(ports(rng));
        spec.outputs = static_cast<std::size_t>(ports(rng));
        spec.margin = 0.2 + 0.1 * (k % 5);
        spec.seed = 1000 + static_cast<std::uint64_t>(k);
        out.push_back({"random_stable#" + std::to_string(k), random_stable(spec)});
    }
    return out;
}

// Every system with a finite radius that criteria 4 to 6 run on.
std::vector<Named> finite_suite() {
    std::vector<Named> out{{"single_block", load_fixture("single_block.json")},
                           {"two_block", load_fixture("two_block.json")},
                           {"heat_chain_ring", load_fixture("heat_chain_ring.json")},
                           {"heat_chain_line", load_fixture("heat_chain_line.json")}};
    for (auto& r : random_suite()) out.push_back(std::move(r));
    return out;
}

bool criterion_1() {
    Check c;
    const auto sys = load_fixture("single_block.json");
    const auto r = stability_radius(sys);
    c.expect(r.radius && std::abs(*r.radius - 1.0) <= 1e-7, "r = 1");
    const auto cert = construct_delta(sys, r.omega_star);
    c.expect(std::abs(cert.delta(0, 0)(0, 0) - Complex(1.0, 0.0)) <= 1e-7, "Delta = 1");
    c.expect(std::abs(cert.closed_loop_eig) <= 1e-7, "eigenvalue 0");
    c.expect(cert.eig_residual < 1e-10, "residual < 1e-10");
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_2() {
    Check c;
    const auto sys = load_fixture("two_block.json");
    const auto r = stability_radius(sys);
    c.expect(std::abs(r.theta - std::sqrt(0.5)) <= 1e-7, "Theta");
    c.expect(r.radius && std::abs(*r.radius - std::sqrt(2.0)) <= 1e-6, "r");
    c.expect(std::abs(r.omega_star) <= 1e-6, "omega*");
    const auto cert = construct_delta(sys, r.omega_star);
    c.expect(std::abs(cert.norm_2inf - std::sqrt(2.0)) <= 1e-6, "norm");
    auto e = eigenvalues(closed_loop_matrix(sys, cert.delta));
    std::sort(e.begin(), e.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    c.expect(e.size() == 2 && std::abs(e[0] - Complex(-3.0, 0.0)) <= 1e-8 && std::abs(e[1]) <= 1e-8,
             "A_cl eigenvalues {0, -3}");
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_3() {
    const auto r = stability_radius(load_fixture("acyclic.json"));
    return r.infinite() && r.theta == 0.0;
}

bool criterion_4(const std::vector<Named>& suite) {
    Check c;
    for (const auto& [name, sys] : suite) {
        const auto r = stability_radius(sys);
        if (!r.radius) {
            c.expect(false, name + ": infinite radius");
            continue;
        }
        const auto mc = monte_carlo_stability(sys, r, 10000, 0.99, 7, NormKind::norm_2inf);
        c.expect(mc.violations == 0, name + ": " + std::to_string(mc.violations) + " violations");
    }
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_5(const std::vector<Named>& suite) {
    Check c;
    for (const auto& [name, sys] : suite) {
        const auto r = stability_radius(sys);
        const auto cert = construct_delta(sys, r.omega_star);
        c.expect(rel(cert.norm_2inf, 1.0 / r.theta) <= 1e-5, name + ": norm vs 1/Theta");
        c.expect(cert.eig_distance <= 1e-7, name + ": eigenvalue distance");
        c.expect(overshoot_abscissa(sys, cert.delta, 1e-3) >= -1e-6, name + ": overshoot abscissa");
    }
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_6(const std::vector<Named>& suite) {
    Check c;
    std::uint64_t seed = 600;
    for (const auto& [name, sys] : suite) {
        const auto r = stability_radius(sys);
        const double inv = 1.0 / r.theta;
        const auto cert = construct_delta(sys, r.omega_star);
        const std::vector<BlockPerturbation> injected{cert.delta};
        const auto with = brute_force_radius(sys, NormKind::norm_2inf, 0, seed, injected, kBruteForceCap);
        c.expect(!with.reached_cap && rel(with.radius, inv) <= 1e-5, name + ": injected oracle");
        const auto random = brute_force_radius(sys, NormKind::norm_2inf, 512, seed++, {}, kBruteForceCap);
        c.expect(random.radius >= inv * (1.0 - 1e-9), name + ": random directions undercut 1/Theta");
    }
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_7(const std::vector<Named>& suite) {
    Check c;
    for (const auto& [name, sys] : suite) {
        const auto base = stability_radius(sys);
        for (double k : {0.5, 2.0, 10.0}) {
            auto scaled = sys;
            scaled.coupling *= k;
            const auto r = stability_radius(scaled);
            c.expect(r.radius && rel(*r.radius, *base.radius / k) <= 1e-7, name + ": homogeneity");
        }
    }
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    std::uniform_int_distribution<int> blocks(1, 4);
    std::uniform_int_distribution<int> states(1, 6);
    for (int pair = 0; pair < 50; ++pair) {
        RandomStableSpec spec;
        spec.blocks = static_cast<std::size_t>(blocks(rng));
        spec.states = static_cast<std::size_t>(states(rng));
        spec.seed = 5000 + static_cast<std::uint64_t>(pair);
        const auto sys = random_stable(spec);
        auto bigger = sys;
        for (Eigen::Index i = 0; i < bigger.coupling.rows(); ++i) {
            for (Eigen::Index j = 0; j < bigger.coupling.cols(); ++j) bigger.coupling(i, j) += bump(rng);
        }
        const auto a = stability_radius(sys);
        const auto b = stability_radius(bigger);
        const bool ok = !a.radius || (b.radius && *b.radius <= *a.radius * (1.0 + 1e-9));
        c.expect(ok, "monotonicity pair " + std::to_string(pair));
    }
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_8() {
    Check c;
    for (int k = 0; k < 20; ++k) {
        RandomStableSpec spec;
        spec.blocks = 1;
        spec.states = static_cast<std::size_t>(1 + k % 6);
        spec.inputs = k < 10 ? 1 : static_cast<std::size_t>(1 + k % 3);
        spec.outputs = k < 10 ? 1 : static_cast<std::size_t>(1 + (k + 1) % 3);
        spec.margin = 0.1 + 0.05 * k;
        spec.seed = 8000 + static_cast<std::uint64_t>(k);
        auto sys = random_stable(spec);
        sys.coupling = RealMatrix::Ones(1, 1);
        const auto r = stability_radius(sys);
        const double gamma = hinf_norm(sys.blocks[0]).gamma;
        c.expect(r.radius && rel(1.0 / *r.radius, gamma) <= 1e-7, "block " + std::to_string(k));
    }
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

bool criterion_9() {
    Check c;
    const auto sys = load_fixture("heat_chain_ring.json");
    const auto r = stability_radius(sys);
    c.expect(r.radius && *r.radius > 0.0 && std::isfinite(*r.radius), "finite positive radius");
    if (!r.radius) return false;
    const auto cert = construct_delta(sys, r.omega_star);
    const std::vector<BlockPerturbation> injected{cert.delta};
    const auto oracle = brute_force_radius(sys, NormKind::norm_2inf, 64, 900, injected, kBruteForceCap);
    std::printf("  heat_chain_ring: radius = %.17g, oracle = %.17g, pinned = %.17g\n", *r.radius, oracle.radius,
                kHeatRingRadius);
    c.expect(rel(*r.radius, oracle.radius) <= 1e-4, "radius vs oracle");
    c.expect(rel(*r.radius, kHeatRingRadius) <= 1e-4, "radius vs pinned constant");
    if (!c.ok) std::cout << "  detail:" << c.detail.str() << "\n";
    return c.ok;
}

}  // namespace

int main() {
    const auto suite = finite_suite();
    struct Criterion {
        int id;
        const char* title;
        double limit_s;  // 0 means no runtime bound
        std::function<bool()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "single-block fixture", 1.0, criterion_1},
        {2, "two-block fixture", 1.0, criterion_2},
        {3, "acyclic coupling gives infinite radius", 0.0, criterion_3},
        {4, "Monte Carlo lower bound at 0.99 r", 60.0, [&] { return criterion_4(suite); }},
        {5, "worst-case tightness", 0.0, [&] { return criterion_5(suite); }},
        {6, "brute-force oracle equivalence", 0.0, [&] { return criterion_6(suite); }},
        {7, "homogeneity and monotonicity", 0.0, [&] { return criterion_7(suite); }},
        {8, "single block equals H-infinity norm", 0.0, criterion_8},
        {9, "heat-chain ring regression", 0.0, criterion_9},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        bool ok = false;
        std::string error;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        const bool in_time = c.limit_s == 0.0 || seconds < c.limit_s;
        const bool pass = ok && in_time;
        if (!pass) ++failures;
        std::printf("%s criterion %d: %s (%.3f s%s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, seconds,
                    in_time ? "" : ", over time limit", error.empty() ? "" : ": ", error.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
