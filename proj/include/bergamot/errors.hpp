#pragma once

#include <stdexcept>
#include <string>

namespace bergamot {

// Error taxonomy. Everything derives from Error so callers can catch the
// whole family or a specific failure kind.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

struct InvalidProfileError : Error {
    explicit InvalidProfileError(const std::string& msg) : Error(msg) {}
};

struct NotDoublingError : Error {
    explicit NotDoublingError(const std::string& msg) : Error(msg) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

struct NotInConeError : Error {
    explicit NotInConeError(const std::string& msg) : Error(msg) {}
};

struct PathError : Error {
    explicit PathError(const std::string& msg) : Error(msg) {}
};

struct SamplingError : Error {
    explicit SamplingError(const std::string& msg) : Error(msg) {}
};

struct DegenerateDictionaryError : Error {
    explicit DegenerateDictionaryError(const std::string& msg) : Error(msg) {}
};

struct UnsupportedDomainError : Error {
    explicit UnsupportedDomainError(const std::string& msg) : Error(msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace bergamot
