#pragma once

#include <stdexcept>
#include <string>

namespace stabrad {

/// Process exit codes shared by the library errors and the CLI.
enum class ExitCode : int {
    success = 0,
    input = 2,
    violation = 3,
    nonconvergence = 4,
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, ExitCode code = ExitCode::input)
        : std::runtime_error(what), code_(code) {}

    ExitCode exit_code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Malformed or out-of-contract input (shapes, signs, non-finite values).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what, ExitCode::input) {}
};

/// Evaluation point lies on (or numerically at) the spectrum of A.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double distance)
        : Error(what, ExitCode::input), distance_(distance) {}

    /// Distance from the evaluation point to the nearest eigenvalue.
    double distance() const noexcept { return distance_; }

private:
    double distance_;
};

/// No destabilizing construction exists (the coupled gain matrix has spectral radius 0).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(what, ExitCode::input) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what, ExitCode::nonconvergence) {}
};

}  // namespace stabrad
