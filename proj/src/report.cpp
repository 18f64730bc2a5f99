#include "wavecert/report.hpp"

#include <cmath>
#include <cstdio>

namespace wavecert {

namespace {

void write(const ReportTree& t, std::string& out, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (t.type()) {
    case ReportTree::value_t::object: {
        if (t.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += inner + ReportTree(it.key()).dump() + ": ";
            write(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case ReportTree::value_t::array: {
        if (t.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& v : t)
            scalars = scalars && !v.is_structured();
        if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i)
                    out += ", ";
                write(t[i], out, indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i)
                out += ",\n";
            out += inner;
            write(t[i], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case ReportTree::value_t::number_float: {
        double v = t.get<double>();
        if (std::isnan(v)) {
            out += "\"nan\"";
        } else if (std::isinf(v)) {
            out += v > 0 ? "\"inf\"" : "\"-inf\"";
        } else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
        }
        return;
    }
    default:
        out += t.dump();
        return;
    }
}

} // namespace

std::string write_report(const ReportTree& tree)
{
    std::string out;
    write(tree, out, 0);
    out += "\n";
    return out;
}

ReportTree without_durations(const ReportTree& tree)
{
    if (tree.is_object()) {
        ReportTree out = ReportTree::object();
        for (auto it = tree.begin(); it != tree.end(); ++it)
            if (it.key() != "duration_s")
                out[it.key()] = without_durations(it.value());
        return out;
    }
    if (tree.is_array()) {
        ReportTree out = ReportTree::array();
        for (const auto& v : tree)
            out.push_back(without_durations(v));
        return out;
    }
    return tree;
}

} // namespace wavecert
