#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavecert {

using Point = std::vector<double>;

std::string format_point(const Point& p);

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset into the input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// log/sqrt of a non-positive value, division by zero, non-finite result or
/// an unbound constant. Carries the evaluation point once it is known.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what);
    DomainError(const std::string& what, Point where);

    const std::string& reason() const noexcept { return reason_; }
    const Point& where() const noexcept { return where_; }
    DomainError at(const Point& p) const { return DomainError(reason_, p); }

private:
    std::string reason_;
    Point where_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace wavecert
