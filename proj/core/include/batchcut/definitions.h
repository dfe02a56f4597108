/*******************************************************************************
 * @file:   definitions.h
 * @brief:  Common index types and the exception hierarchy used by batchcut.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace batchcut {

using SampleID      = std::uint32_t;
using DescriptionID = std::uint32_t;
using BatchID       = std::uint32_t;
using EdgeWeight    = std::int64_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition (bad k, size mismatch, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed input file. `line` is 1-based, 0 if not line-specific.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          _line(line) {}

    [[nodiscard]] std::size_t line() const { return _line; }

private:
    std::size_t _line;
};

// Iterative eigensolver hit its iteration cap above tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what),
          _residual(residual) {}

    [[nodiscard]] double achieved_residual() const { return _residual; }

private:
    double _residual;
};

// Brute-force enumeration refused because the instance is too large.
class InstanceTooLarge : public Error {
public:
    using Error::Error;
};

// Pearson correlation on a series without variance or with too few points.
class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

} // namespace batchcut
