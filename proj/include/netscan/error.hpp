#pragma once

#include <stdexcept>
#include <string>

namespace netscan {

// Base for every error the library raises. `kind()` is a short, stable
// token the CLI prints so failures are machine-parsable.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed input file. Carries the location of the offending cell.
class SchemaError : public Error {
public:
    SchemaError(const std::string& file, std::size_t line, std::size_t column,
                const std::string& message)
        : Error("schema", file + ":" + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + message),
          file_(file), line_(line), column_(column) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid-input", what) {}
};

class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error("contract", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class CalibrationError : public Error {
public:
    explicit CalibrationError(const std::string& what) : Error("calibration", what) {}
};

class PathCapExceeded : public Error {
public:
    PathCapExceeded(std::size_t count, std::size_t cap)
        : Error("path-cap", "path enumeration produced more than " + std::to_string(cap) +
                                " paths (reached " + std::to_string(count) + ")"),
          count_(count), cap_(cap) {}

    std::size_t count() const noexcept { return count_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t count_;
    std::size_t cap_;
};

class IllConditioned : public Error {
public:
    explicit IllConditioned(const std::string& what) : Error("ill-conditioned", what) {}
};

class BenchmarkError : public Error {
public:
    explicit BenchmarkError(const std::string& what) : Error("benchmark", what) {}
};

}  // namespace netscan
