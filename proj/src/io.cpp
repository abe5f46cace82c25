#include "stabrad/io.hpp"

#include "stabrad/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace stabrad {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
    throw InputError(path + ": " + message);
}

Complex parse_scalar(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    schema_error(path, "expected a number or an [re, im] pair");
}

DenseMatrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    DenseMatrix m;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.empty()) schema_error(row_path, "expected a non-empty row array");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            schema_error(row_path, "has " + std::to_string(row.size()) + " entries, expected " +
                                       std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const std::string entry_path = row_path + "[" + std::to_string(c) + "]";
            const Complex z = parse_scalar(row[static_cast<std::size_t>(c)], entry_path);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) schema_error(entry_path, "non-finite value");
            m(r, c) = z;
        }
    }
    return m;
}

json scalar_to_json(Complex z, bool force_pair) {
    if (!force_pair && z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

json matrix_json(const DenseMatrix& m, bool force_pair) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), force_pair));
        rows.push_back(std::move(row));
    }
    return rows;
}

json complex_vector_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(scalar_to_json(v(k), true));
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

SystemFile parse_system_json(std::string_view text, std::string_view source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token.
        const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << source << ":" << line << ":" << column << ": JSON syntax error: " << e.what();
        throw InputError(os.str());
    }
    if (!root.is_object()) schema_error(std::string(source), "top level must be an object");

    SystemFile file;
    if (root.contains("version")) {
        if (!root["version"].is_string()) schema_error("version", "expected a string");
        file.version = root["version"].get<std::string>();
    }
    if (!root.contains("blocks") || !root["blocks"].is_array()) schema_error("blocks", "expected an array");
    const auto& blocks = root["blocks"];
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const std::string path = "blocks[" + std::to_string(k) + "]";
        const auto& b = blocks[k];
        if (!b.is_object()) schema_error(path, "expected an object");
        for (const char* key : {"A", "B", "C"}) {
            if (!b.contains(key)) schema_error(path, std::string("missing field ") + key);
        }
        std::string label = "block_" + std::to_string(k + 1);
        if (b.contains("label")) {
            if (!b["label"].is_string()) schema_error(path + ".label", "expected a string");
            label = b["label"].get<std::string>();
        }
        try {
            file.system.blocks.emplace_back(parse_matrix(b["A"], path + ".A"), parse_matrix(b["B"], path + ".B"),
                                            parse_matrix(b["C"], path + ".C"), std::move(label));
        } catch (const InputError& e) {
            const std::string what = e.what();
            if (what.rfind(path, 0) == 0) throw;
            schema_error(path, what);
        }
    }

    if (!root.contains("E")) schema_error("E", "missing interconnection matrix");
    const DenseMatrix e = parse_matrix(root["E"], "E");
    if (!(e.imag().array() == 0.0).all()) schema_error("E", "entries must be real");
    file.system.coupling = e.real();

    if (root.contains("options")) {
        const auto& o = root["options"];
        if (!o.is_object()) schema_error("options", "expected an object");
        const auto number = [&](const char* key, double& target) {
            if (!o.contains(key)) return;
            if (!o[key].is_number()) schema_error(std::string("options.") + key, "expected a number");
            target = o[key].get<double>();
        };
        if (o.contains("grid_points")) {
            if (!o["grid_points"].is_number_unsigned()) {
                schema_error("options.grid_points", "expected a positive integer");
            }
            file.options.grid_points = o["grid_points"].get<std::size_t>();
        }
        number("tail_epsilon", file.options.tail_epsilon);
        number("refine_tol", file.options.refine_tol);
        number("objective_tol", file.options.objective_tol);
        try {
            file.options.validate();
        } catch (const InputError& err) {
            schema_error("options", err.what());
        }
    }
    return file;
}

SystemFile parse_system_file(const std::filesystem::path& path) {
    auto file = parse_system_json(read_text_file(path), path.string());
    const auto report = validate(file.system);
    if (!report.ok()) throw InputError(path.string() + ": invalid system:\n" + report.summary());
    return file;
}

nlohmann::json system_to_json(const SystemFile& file) {
    json blocks = json::array();
    for (const auto& b : file.system.blocks) {
        blocks.push_back({{"label", b.label()},
                          {"A", matrix_json(b.a(), false)},
                          {"B", matrix_json(b.b(), false)},
                          {"C", matrix_json(b.c(), false)}});
    }
    json e = json::array();
    for (Eigen::Index i = 0; i < file.system.coupling.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < file.system.coupling.cols(); ++j) row.push_back(file.system.coupling(i, j));
        e.push_back(std::move(row));
    }
    return {{"version", file.version}, {"blocks", blocks}, {"E", e}, {"options", to_json(file.options)}};
}

void write_system_file(const std::filesystem::path& path, const SystemFile& file) {
    write_text_file(path, system_to_json(file).dump(2) + "\n");
}

nlohmann::json matrix_to_json(const DenseMatrix& m) {
    return matrix_json(m, true);
}

nlohmann::json to_json(const SweepOptions& opts) {
    return {{"grid_points", opts.grid_points},
            {"tail_epsilon", opts.tail_epsilon},
            {"refine_tol", opts.refine_tol},
            {"objective_tol", opts.objective_tol}};
}

nlohmann::json to_json(const RadiusReport& report) {
    json out = {{"theta", report.theta},
                {"radius", report.radius ? json(*report.radius) : json(nullptr)},
                {"radius_infinite", report.infinite()},
                {"omega_star", report.omega_star},
                {"mu_star", report.mu_star},
                {"lower_bound_theta2", report.lower_bound_theta2},
                {"upper_bound_theta2", report.upper_bound_theta2},
                {"possible_missed_peak", report.possible_missed_peak},
                {"refinement_converged", report.refinement_converged},
                {"block_hinf", report.block_hinf},
                {"block_hinf_peak", report.block_hinf_peak},
                {"omega_max", report.omega_max},
                {"trace_points", report.trace.size()},
                {"options", to_json(report.options)}};
    return out;
}

nlohmann::json to_json(const WorstCaseCertificate& cert) {
    json delta = json::array();
    for (std::size_t i = 0; i < cert.delta.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < cert.delta.size(); ++j) row.push_back(matrix_to_json(cert.delta(i, j)));
        delta.push_back(std::move(row));
    }
    return {{"omega0", cert.omega0},
            {"delta", delta},
            {"norm_2inf", cert.norm_2inf},
            {"norm_op", cert.norm_op},
            {"target_radius", cert.target_radius ? json(*cert.target_radius) : json(nullptr)},
            {"closed_loop_eig", scalar_to_json(cert.closed_loop_eig, true)},
            {"eig_distance", cert.eig_distance},
            {"eig_residual", cert.eig_residual},
            {"predicted_residual", cert.predicted_residual ? json(*cert.predicted_residual) : json(nullptr)},
            {"closed_loop_abscissa", cert.closed_loop_abscissa},
            {"eigvec", complex_vector_json(cert.eigvec)},
            {"certified", cert.certified}};
}

nlohmann::json to_json(const MonteCarloReport& report) {
    return {{"samples", report.samples},
            {"fraction_of_radius", report.fraction_of_radius},
            {"target_norm", report.target_norm},
            {"violations", report.violations},
            {"worst_abscissa", report.worst_abscissa},
            {"seed", report.seed},
            {"norm", std::string(to_string(report.norm))},
            {"forced_directions", report.forced_directions}};
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("sha256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int k = 0; k < length; ++k) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
    }
    return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw InputError(path.string() + ": write failed");
}

}  // namespace stabrad
