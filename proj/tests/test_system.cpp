#include "stabrad/errors.hpp"
#include "stabrad/golden_section.hpp"
#include "stabrad/system.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace stabrad;
using namespace stabrad::testing;
using Catch::Approx;

namespace {

// Independent peak-gain oracle: log/linear frequency scan plus local golden refinement.
double scanned_peak(const StateSpaceBlock& block) {
    double best_w = 0.0;
    double best = block_gain(block, 0.0);
    const double top = 10.0 * (1.0 + operator_norm(block.a()));
    for (int k = 0; k <= 4000; ++k) {
        for (double w : {top * k / 4000.0, 1e-4 * std::pow(1e4 * top / 1e-4, k / 4000.0)}) {
            for (double s : {w, block.is_real() ? w : -w}) {
                const double g = block_gain(block, s);
                if (g > best) {
                    best = g;
                    best_w = s;
                }
            }
        }
    }
    const double h = 1e-2 * (1.0 + std::abs(best_w));
    const auto r = golden_section_maximize([&](double w) { return block_gain(block, w); }, best_w - h,
                                           best_w + h, 1e-13);
    return std::max(best, r.value);
}

}  // namespace

TEST_CASE("StateSpaceBlock validates shapes", "[system]") {
    CHECK_THROWS_AS(StateSpaceBlock(DenseMatrix::Zero(2, 3), DenseMatrix::Zero(2, 1), DenseMatrix::Zero(1, 2)),
                    InputError);
    CHECK_THROWS_AS(StateSpaceBlock(DenseMatrix::Zero(2, 2), DenseMatrix::Zero(3, 1), DenseMatrix::Zero(1, 2)),
                    InputError);
    CHECK_THROWS_AS(StateSpaceBlock(DenseMatrix::Zero(2, 2), DenseMatrix::Zero(2, 1), DenseMatrix::Zero(1, 3)),
                    InputError);
    const StateSpaceBlock ok(DenseMatrix::Zero(2, 2), DenseMatrix::Zero(2, 3), DenseMatrix::Zero(4, 2));
    CHECK(ok.states() == 2);
    CHECK(ok.inputs() == 3);
    CHECK(ok.outputs() == 4);
}

TEST_CASE("transfer_eval examples", "[system]") {
    const auto block = first_order(1.0);
    // 1 / (s + 1)
    CHECK(std::abs(transfer_eval(block, 0.0)(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    const Complex at_i = transfer_eval(block, Complex(0.0, 1.0))(0, 0);
    CHECK(std::abs(at_i - 1.0 / Complex(1.0, 1.0)) < 1e-15);
    CHECK(std::abs(at_i) == Approx(0.70710678).epsilon(1e-8));

    const StateSpaceBlock no_input(scalar(-1.0), scalar(0.0), scalar(1.0));
    CHECK(transfer_eval(no_input, Complex(0.3, 2.0)).norm() == 0.0);
}

TEST_CASE("transfer_eval reports the distance to the spectrum", "[system]") {
    const auto block = first_order(1.0);
    try {
        transfer_eval(block, Complex(-1.0, 0.0));
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.distance() <= 1e-12);
    }
}

TEST_CASE("block_gain examples", "[system]") {
    const auto block = first_order(1.0);
    CHECK(block_gain(block, 0.0) == Approx(1.0).epsilon(1e-15));
    CHECK(block_gain(block, 1.0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    // asymptotically 1/omega
    CHECK(block_gain(block, 1e3) == Approx(1e-3).epsilon(0.01));
}

TEST_CASE("block_gain is conjugate symmetric for real blocks", "[system][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> freq(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto block = random_block(rng, 1 + trial % 5, 1 + trial % 3, 1 + trial % 2);
        for (int k = 0; k < 10; ++k) {
            const double w = freq(rng);
            CHECK(std::abs(block_gain(block, w) - block_gain(block, -w)) <= 1e-12 * (1.0 + block_gain(block, w)));
        }
    }
}

TEST_CASE("hinf_norm examples", "[system][hinf]") {
    // |G(i w)|^2 = 1 / (1 + w^2)
    auto h = hinf_norm(first_order(1.0));
    CHECK(h.gamma == Approx(1.0).epsilon(1e-8));
    CHECK(h.omega_peak == Approx(0.0).margin(1e-8));

    h = hinf_norm(first_order(2.0));
    CHECK(h.gamma == Approx(0.5).epsilon(1e-8));
    CHECK(h.omega_peak == Approx(0.0).margin(1e-8));

    const StateSpaceBlock silent(scalar(-1.0), scalar(1.0), scalar(0.0));
    CHECK(hinf_norm(silent).gamma == 0.0);

    CHECK_THROWS_AS(hinf_norm(StateSpaceBlock(scalar(0.5), scalar(1.0), scalar(1.0))), InputError);
}

TEST_CASE("hinf_norm finds a resonant peak", "[system][hinf]") {
    // Lightly damped oscillator: poles -0.05 +- 0.9987i, resonance near omega = 1.
    DenseMatrix a(2, 2);
    a << 0.0, 1.0, -1.0, -0.1;
    DenseMatrix b(2, 1);
    b << 0.0, 1.0;
    DenseMatrix c(1, 2);
    c << 1.0, 0.0;
    const StateSpaceBlock osc(a, b, c);
    const auto h = hinf_norm(osc);
    const double oracle = scanned_peak(osc);
    CHECK(h.gamma == Approx(oracle).epsilon(1e-8));
    CHECK(h.upper_bound >= oracle * (1.0 - 1e-12));
    CHECK(block_gain(osc, h.omega_peak) == Approx(h.gamma).epsilon(1e-12));
    CHECK(std::abs(h.omega_peak) == Approx(std::sqrt(1.0 - 0.5 * 0.01)).epsilon(1e-4));
}

TEST_CASE("hinf_norm dominates sampled gains and matches a scan oracle", "[system][hinf][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> freq(-30.0, 30.0);
    for (int trial = 0; trial < 12; ++trial) {
        const bool complex = trial % 4 == 3;
        const auto block = random_block(rng, 1 + trial % 6, 1 + trial % 3, 1 + (trial / 2) % 3, 0.2, complex);
        const auto h = hinf_norm(block);
        for (int k = 0; k < 100; ++k) CHECK(h.gamma >= block_gain(block, freq(rng)) - 1e-8 * h.gamma);
        CHECK(h.gamma == Approx(scanned_peak(block)).epsilon(1e-7));
        CHECK(h.upper_bound - h.gamma <= 1e-8 * h.upper_bound);
    }
}

TEST_CASE("is_exp_stable examples", "[system]") {
    CHECK(is_exp_stable(first_order(1.0)));
    CHECK_FALSE(is_exp_stable(StateSpaceBlock(scalar(0.0), scalar(1.0), scalar(1.0))));
    DenseMatrix a(2, 2);
    a << 0.0, 1.0, -1.0, -0.1;
    CHECK(is_exp_stable(StateSpaceBlock(a, DenseMatrix::Ones(2, 1), DenseMatrix::Ones(1, 2))));
}

TEST_CASE("tail_bound_frequency examples", "[system]") {
    CHECK(tail_bound_frequency(first_order(1.0), 0.01) == Approx(101.0).epsilon(1e-12));
    const StateSpaceBlock silent(scalar(-3.0), scalar(1.0), scalar(0.0));
    CHECK(tail_bound_frequency(silent, 1e-6) == Approx(3.0));
    CHECK(tail_bound_frequency(first_order(1.0), 2.0) == Approx(1.0));
    CHECK_THROWS_AS(tail_bound_frequency(first_order(1.0), 0.0), InputError);
}

TEST_CASE("transfer function satisfies the resolvent identity", "[system][property]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> part(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto block = random_block(rng, 1 + trial % 6, 1 + trial % 2, 1 + trial % 3);
        const Complex alpha(std::abs(part(rng)), part(rng));
        const Complex beta(std::abs(part(rng)), part(rng));
        const Eigen::Index n = block.states();
        const DenseMatrix ra = (alpha * DenseMatrix::Identity(n, n) - block.a()).inverse();
        const DenseMatrix rb = (beta * DenseMatrix::Identity(n, n) - block.a()).inverse();
        const DenseMatrix lhs = transfer_eval(block, alpha) - transfer_eval(block, beta);
        const DenseMatrix rhs = (beta - alpha) * block.c() * ra * rb * block.b();
        CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
    }
}

TEST_CASE("block gain obeys the strict-properness bound", "[system][property]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto block = random_block(rng, 2 + trial % 4, 2, 1);
        const double na = operator_norm(block.a());
        const double bc = operator_norm(block.b()) * operator_norm(block.c());
        double previous = std::numeric_limits<double>::infinity();
        for (double w = 2.0 * na + 1e-9; w < 1e5 * na; w *= 1.7) {
            const double g = block_gain(block, w);
            const double bound = bc / (w - na);
            CHECK(g <= bound * (1.0 + 1e-12));
            CHECK(bound < previous);
            previous = bound;
        }
    }
}
