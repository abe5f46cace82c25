#pragma once

#include "stabrad/interconnect.hpp"
#include "stabrad/radius.hpp"
#include "stabrad/verify.hpp"
#include "stabrad/worstcase.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace stabrad {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kSystemFileVersion = "1";

/// Parsed system file. Validation is left to the caller except in `parse_system_file`.
struct SystemFile {
    std::string version{kSystemFileVersion};
    CompositeSystem system;
    SweepOptions options;
};

/// Parses JSON text. Syntax errors carry `source:line:column`; schema errors carry
/// the field path (e.g. `blocks[1].A[0][2]`). Both throw InputError.
SystemFile parse_system_json(std::string_view text, std::string_view source = "<input>");

/// Reads, parses and validates; validation failures throw InputError with the itemized report.
SystemFile parse_system_file(const std::filesystem::path& path);

/// Numbers are written as plain reals when the imaginary part is zero, otherwise as [re, im].
nlohmann::json system_to_json(const SystemFile& file);
void write_system_file(const std::filesystem::path& path, const SystemFile& file);

nlohmann::json matrix_to_json(const DenseMatrix& m);
nlohmann::json to_json(const SweepOptions& opts);
nlohmann::json to_json(const RadiusReport& report);
nlohmann::json to_json(const WorstCaseCertificate& cert);
nlohmann::json to_json(const MonteCarloReport& report);

std::string sha256_hex(std::string_view bytes);

std::string read_text_file(const std::filesystem::path& path);

/// Writes `text`; throws InputError when the path cannot be opened.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace stabrad
