// errors.hpp
// Exception taxonomy shared by the whole library. The CLI maps these onto
// its exit codes (input -> 2, applicability -> 3, numeric -> 4).

#pragma once

#include <stdexcept>
#include <string>

namespace mcb {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched matrix/tensor shapes, bad party indices, invalid partitions.
class shape_error : public error {
public:
    explicit shape_error(const std::string& msg) : error(msg) {}
};

// Scalar argument outside its admissible range, invalid weights or options.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Evaluator not applicable to the given state (wrong party count,
// theorem restriction on N).
class applicability_error : public error {
public:
    explicit applicability_error(const std::string& msg) : error(msg) {}
};

// Numerical failure: non-Hermitian input, PSD violation, eigensolver
// breakdown, inconsistent radicands.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

// Malformed state file. `where` carries position info (JSON path or byte).
class parse_error : public error {
public:
    parse_error(const std::string& msg, const std::string& where)
        : error(where.empty() ? msg : msg + " (at " + where + ")"), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace mcb
