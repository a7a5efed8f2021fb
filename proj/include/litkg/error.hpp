#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace litkg {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidEvidenceError : public Error {
public:
    using Error::Error;
};

class MissingNodeError : public Error {
public:
    explicit MissingNodeError(std::string node_id)
        : Error("unknown node: " + node_id), node_id_(std::move(node_id)) {}

    const std::string& node_id() const noexcept { return node_id_; }

private:
    std::string node_id_;
};

class InvalidEdgeError : public Error {
public:
    using Error::Error;
};

/// Malformed input. Line and offset are 1-based; zero means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t offset = 0)
        : Error(format(what, line, offset)), line_(line), offset_(offset) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t offset) {
        if (line == 0) return what;
        std::string s = what + " (line " + std::to_string(line);
        if (offset != 0) s += ", offset " + std::to_string(offset);
        return s + ")";
    }

    std::size_t line_;
    std::size_t offset_;
};

/// Well-formed input whose content breaks a schema rule.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<std::string> offenders)
        : Error(format(what, offenders)), offenders_(std::move(offenders)) {}

    const std::vector<std::string>& offenders() const noexcept { return offenders_; }

private:
    static std::string format(const std::string& what, const std::vector<std::string>& offenders) {
        std::string s = what;
        for (std::size_t i = 0; i < offenders.size() && i < 10; ++i) {
            s += (i == 0 ? ": " : ", ") + offenders[i];
        }
        if (offenders.size() > 10) s += ", ... (" + std::to_string(offenders.size()) + " total)";
        return s;
    }

    std::vector<std::string> offenders_;
};

class InvalidQueryError : public Error {
public:
    using Error::Error;
};

/// Failure talking to a remote service.
class IngestError : public Error {
public:
    IngestError(const std::string& what, bool retryable, int attempts)
        : Error(what + " (after " + std::to_string(attempts) + " attempt(s))"),
          retryable_(retryable),
          attempts_(attempts) {}

    bool retryable() const noexcept { return retryable_; }
    int attempts() const noexcept { return attempts_; }

private:
    bool retryable_;
    int attempts_;
};

class EmptyResultError : public Error {
public:
    using Error::Error;
};

class CategoryError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : Error(what + " (residual " + std::to_string(residual) + " after " +
                std::to_string(iterations) + " iterations)"),
          residual_(residual),
          iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace litkg
