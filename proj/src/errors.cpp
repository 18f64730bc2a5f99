#include "wavecert/errors.hpp"

#include <cstdio>

namespace wavecert {

std::string format_point(const Point& p)
{
    std::string out = "(";
    char buf[32];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", p[i]);
        if (i)
            out += ", ";
        out += buf;
    }
    return out + ")";
}

ParseError::ParseError(const std::string& what, std::size_t offset)
    : Error(what + " at byte " + std::to_string(offset)), offset_(offset)
{
}

DomainError::DomainError(const std::string& what) : Error(what), reason_(what) {}

DomainError::DomainError(const std::string& what, Point where)
    : Error(what + " at " + format_point(where)), reason_(what), where_(std::move(where))
{
}

} // namespace wavecert
