#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kaczmarz {

/// Dense real vector. Entries are 64-bit floats; construction paths that
/// accept external data (files, user input) reject NaN/Inf.
using Vector = std::vector<double>;

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ZeroRowError : public std::invalid_argument {
public:
    ZeroRowError(std::size_t row, const std::string& what)
        : std::invalid_argument(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Matrix Market (or sidecar vector) parse failure; carries the 1-based
/// line number of the offending input line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InconsistentSystemError : public std::runtime_error {
public:
    InconsistentSystemError(double residual_norm, const std::string& what)
        : std::runtime_error(what), residual_norm_(residual_norm) {}
    double residual_norm() const noexcept { return residual_norm_; }

private:
    double residual_norm_;
};

namespace vec {

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeError("dist_sq: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline void ensure_finite(std::span<const double> a, const char* what) {
    for (double v : a)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace vec
}  // namespace kaczmarz
