#pragma once

#include <stdexcept>
#include <string>

namespace fgt {

// Base class for all library errors. CLI maps subtypes to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter/domain violations (CLI exit code 2).
struct InvalidParams : Error {
    explicit InvalidParams(const std::string& msg) : Error(msg) {}
};
struct NotPrimePower : InvalidParams {
    explicit NotPrimePower(const std::string& msg) : InvalidParams(msg) {}
};
struct InvalidTheta : InvalidParams {
    explicit InvalidTheta(const std::string& msg) : InvalidParams(msg) {}
};
struct EmptyInput : InvalidParams {
    explicit EmptyInput(const std::string& msg) : InvalidParams(msg) {}
};
struct DuplicatePoints : InvalidParams {
    explicit DuplicatePoints(const std::string& msg) : InvalidParams(msg) {}
};
struct MissingProfile : InvalidParams {
    explicit MissingProfile(const std::string& msg) : InvalidParams(msg) {}
};
struct Unsupported : InvalidParams {
    explicit Unsupported(const std::string& msg) : InvalidParams(msg) {}
};

// Instance too big for the requested mode (CLI exit code 3).
struct TooLarge : Error {
    explicit TooLarge(const std::string& msg) : Error(msg) {}
};
struct BudgetExceeded : TooLarge {
    explicit BudgetExceeded(const std::string& msg) : TooLarge(msg) {}
};

// Arithmetic faults (CLI exit code 4).
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

}  // namespace fgt
