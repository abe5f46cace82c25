#include "stabrad/cli.hpp"

#include "stabrad/errors.hpp"
#include "stabrad/generate.hpp"
#include "stabrad/io.hpp"
#include "stabrad/radius.hpp"
#include "stabrad/verify.hpp"
#include "stabrad/worstcase.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>

namespace stabrad {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct CommonFlags {
    std::string system;
    std::string out;
    std::optional<std::size_t> grid;
    std::optional<double> tol;
};

struct LoadedSystem {
    SystemFile file;
    std::string sha256;
};

LoadedSystem load(const CommonFlags& flags) {
    const std::string text = read_text_file(flags.system);
    LoadedSystem loaded{parse_system_json(text, flags.system), sha256_hex(text)};
    const auto report = validate(loaded.file.system);
    if (!report.ok()) throw InputError(flags.system + ": invalid system:\n" + report.summary());
    if (flags.grid) loaded.file.options.grid_points = *flags.grid;
    if (flags.tol) loaded.file.options.objective_tol = *flags.tol;
    loaded.file.options.validate();
    return loaded;
}

json result_header(const std::string& command, const CommonFlags& flags, const LoadedSystem& loaded) {
    return {{"tool", "stabrad"},
            {"version", std::string(kToolVersion)},
            {"command", command},
            {"input", {{"path", flags.system}, {"sha256", loaded.sha256}}},
            {"options", to_json(loaded.file.options)}};
}

void emit(const json& result, const CommonFlags& flags) {
    if (!flags.out.empty()) write_text_file(flags.out, result.dump(2) + "\n");
}

std::string format_radius(const RadiusReport& report) {
    if (report.infinite()) return "inf";
    std::ostringstream os;
    os << std::setprecision(12) << *report.radius;
    return os.str();
}

void print_radius(std::ostream& out, std::ostream& err, const RadiusReport& report) {
    out << std::setprecision(12);
    out << "theta = " << report.theta << "\n";
    out << "radius = " << format_radius(report) << "\n";
    out << "omega_star = " << report.omega_star << "\n";
    if (report.possible_missed_peak) {
        err << "warning: possible missed peak (Theta^2 bracket [" << report.lower_bound_theta2 << ", "
            << report.upper_bound_theta2 << "])\n";
    }
}

void print_matrix(std::ostream& out, const DenseMatrix& m) {
    out << "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << (r ? ", [" : "[");
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            const Complex z = m(r, c);
            if (z.imag() == 0.0) {
                out << z.real();
            } else {
                out << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            }
        }
        out << "]";
    }
    out << "]";
}

int cmd_radius(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const auto loaded = load(flags);
    const auto report = stability_radius(loaded.file.system, loaded.file.options);
    json result = result_header("radius", flags, loaded);
    result["radius"] = to_json(report);
    result["timings_ms"] = {{"total", elapsed_ms(start)}};
    emit(result, flags);
    print_radius(out, err, report);
    return report.refinement_converged ? 0 : static_cast<int>(ExitCode::nonconvergence);
}

int cmd_worstcase(const CommonFlags& flags, std::optional<double> overshoot, std::ostream& out,
                  std::ostream& err) {
    const auto start = Clock::now();
    const auto loaded = load(flags);
    const auto report = stability_radius(loaded.file.system, loaded.file.options);
    const double sweep_ms = elapsed_ms(start);
    if (report.infinite()) {
        err << "radius is infinite: no destabilizing perturbation exists for this interconnection\n";
        return static_cast<int>(ExitCode::input);
    }
    const auto cert = construct_delta(loaded.file.system, report.omega_star);
    json result = result_header("worstcase", flags, loaded);
    result["radius"] = to_json(report);
    result["worstcase"] = to_json(cert);
    std::optional<double> overshoot_abs;
    if (overshoot) {
        overshoot_abs = overshoot_abscissa(loaded.file.system, cert.delta, *overshoot);
        result["worstcase"]["overshoot"] = {{"epsilon", *overshoot}, {"abscissa", *overshoot_abs}};
    }
    result["timings_ms"] = {{"sweep", sweep_ms}, {"total", elapsed_ms(start)}};
    emit(result, flags);

    print_radius(out, err, report);
    out << "norm_2inf = " << cert.norm_2inf << "\n";
    out << "eig_distance = " << cert.eig_distance << "\n";
    out << "eig_residual = " << cert.eig_residual << "\n";
    out << "certified = " << (cert.certified ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < cert.delta.size(); ++i) {
        for (std::size_t j = 0; j < cert.delta.size(); ++j) {
            out << "delta[" << (i + 1) << "][" << (j + 1) << "] = ";
            print_matrix(out, cert.delta(i, j));
            out << "\n";
        }
    }
    if (overshoot_abs) out << "overshoot_abscissa = " << *overshoot_abs << "\n";
    if (!cert.certified) {
        err << "certification failed: eigenvalue distance " << cert.eig_distance << ", residual "
            << cert.eig_residual << "\n";
        return static_cast<int>(ExitCode::nonconvergence);
    }
    return 0;
}

struct VerifyFlags {
    std::size_t samples = 10000;
    double fraction = 0.99;
    std::uint64_t seed = 0;
    std::string norm = "2inf";
    bool worst_direction = false;
};

int cmd_verify(const CommonFlags& flags, const VerifyFlags& vf, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    if (vf.samples == 0) throw InputError("--samples must be positive");
    if (!(vf.fraction > 0.0)) throw InputError("--fraction must be positive");
    const NormKind kind = parse_norm_kind(vf.norm);
    const auto loaded = load(flags);
    const auto& sys = loaded.file.system;
    const auto report = stability_radius(sys, loaded.file.options);
    if (report.infinite()) {
        err << "radius is infinite: nothing to verify against\n";
        return static_cast<int>(ExitCode::input);
    }

    MonteCarloReport mc;
    if (vf.worst_direction) {
        const auto cert = construct_delta(sys, report.omega_star);
        const std::vector<BlockPerturbation> forced{cert.delta};
        mc = sample_stability(sys, vf.fraction * *report.radius, vf.samples, vf.seed, kind, forced);
        mc.fraction_of_radius = vf.fraction;
    } else {
        mc = monte_carlo_stability(sys, report, vf.samples, vf.fraction, vf.seed, kind);
    }

    json result = result_header("verify", flags, loaded);
    result["radius"] = to_json(report);
    result["monte_carlo"] = to_json(mc);
    result["timings_ms"] = {{"total", elapsed_ms(start)}};
    emit(result, flags);

    print_radius(out, err, report);
    out << "samples = " << mc.samples << "\n";
    out << "violations = " << mc.violations << "\n";
    out << "worst_abscissa = " << mc.worst_abscissa << "\n";
    return mc.violations == 0 ? 0 : static_cast<int>(ExitCode::violation);
}

int cmd_sweep(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    const auto loaded = load(flags);
    const auto report = compute_theta(loaded.file.system, loaded.file.options);
    if (flags.out.empty()) {
        write_trace_csv(out, report);
    } else {
        std::ostringstream csv;
        write_trace_csv(csv, report);
        write_text_file(flags.out, csv.str());
        print_radius(out, err, report);
    }
    return 0;
}

struct GenerateFlags {
    std::string kind;
    std::size_t interior = 10;
    std::size_t blocks = 3;
    std::string pattern = "ring";
    std::size_t states = 3;
    std::size_t inputs = 1;
    std::size_t outputs = 1;
    double margin = 0.5;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_generate(const GenerateFlags& gf, std::ostream& out) {
    SystemFile file;
    if (gf.kind == "heat_chain") {
        file.system = heat_chain(gf.interior, gf.blocks, parse_coupling_pattern(gf.pattern));
    } else if (gf.kind == "random_stable") {
        file.system = random_stable({gf.blocks, gf.states, gf.inputs, gf.outputs, gf.margin, gf.seed});
    } else {
        throw InputError("unknown generator '" + gf.kind + "' (expected heat_chain or random_stable)");
    }
    require_valid(file.system);
    const std::string text = system_to_json(file).dump(2) + "\n";
    if (gf.out.empty()) {
        out << text;
    } else {
        write_text_file(gf.out, text);
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability radius of interconnected LTI systems", "stabrad"};
    app.require_subcommand(1);

    CommonFlags common;
    const auto add_common = [&](CLI::App* sub, bool grid) {
        sub->add_option("system", common.system, "System file (JSON)")->required();
        sub->add_option("--out", common.out, "Result file");
        if (grid) {
            sub->add_option("--grid", common.grid, "Frequency grid points");
            sub->add_option("--tol", common.tol, "Relative tolerance on Theta^2");
        }
    };

    auto* radius = app.add_subcommand("radius", "Compute Theta and the stability radius");
    add_common(radius, true);

    std::optional<double> overshoot;
    auto* worstcase = app.add_subcommand("worstcase", "Construct the destabilizing perturbation at the peak");
    add_common(worstcase, true);
    worstcase->add_option("--overshoot", overshoot, "Also report the abscissa after scaling by 1 + eps");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Monte Carlo stability check below the radius");
    add_common(verify, true);
    verify->add_option("--samples", vf.samples, "Number of random perturbations");
    verify->add_option("--fraction", vf.fraction, "Perturbation norm as a fraction of the radius");
    verify->add_option("--seed", vf.seed, "Random seed");
    verify->add_option("--norm", vf.norm, "Perturbation norm: 2inf or opnorm");
    verify->add_flag("--worst-direction", vf.worst_direction, "Also test the constructed worst-case direction");

    auto* sweep = app.add_subcommand("sweep", "Write the frequency trace of mu as CSV");
    add_common(sweep, true);

    GenerateFlags gf;
    auto* generate = app.add_subcommand("generate", "Write an example system file");
    generate->add_option("kind", gf.kind, "heat_chain or random_stable")->required();
    generate->add_option("--n", gf.interior, "heat_chain: interior grid points");
    generate->add_option("--blocks", gf.blocks, "Number of subsystems");
    generate->add_option("--pattern", gf.pattern, "heat_chain coupling: ring, line or dense");
    generate->add_option("--states", gf.states, "random_stable: states per block");
    generate->add_option("--inputs", gf.inputs, "random_stable: inputs per block");
    generate->add_option("--outputs", gf.outputs, "random_stable: outputs per block");
    generate->add_option("--margin", gf.margin, "random_stable: stability margin");
    generate->add_option("--seed", gf.seed, "Random seed");
    generate->add_option("--out", gf.out, "Output system file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::input);
    }

    try {
        if (*radius) return cmd_radius(common, out, err);
        if (*worstcase) return cmd_worstcase(common, overshoot, out, err);
        if (*verify) return cmd_verify(common, vf, out, err);
        if (*sweep) return cmd_sweep(common, out, err);
        if (*generate) return cmd_generate(gf, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::nonconvergence);
    }
    return static_cast<int>(ExitCode::input);
}

}  // namespace stabrad
