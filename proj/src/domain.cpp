#include "wavecert/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wavecert {

Region::Region(std::vector<Interval> box, std::vector<Expression> constraints, double margin, ConstantTable consts)
    : box_(std::move(box)), constraints_(std::move(constraints)), margin_(margin), consts_(std::move(consts))
{
    if (box_.empty())
        throw Error("region needs at least one axis");
    for (std::size_t k = 0; k < box_.size(); ++k) {
        if (!(box_[k].lo < box_[k].hi))
            throw Error("empty bounding box on axis " + std::to_string(k + 1));
    }
    if (margin_ < 0.0)
        throw Error("region margin must be nonnegative");
    for (const auto& g : constraints_) {
        if (g.dim() != dim())
            throw Error("constraint dimension does not match region dimension");
    }
}

Region Region::from_strings(std::vector<Interval> box, const std::vector<std::string>& constraints, double margin,
                            ConstantTable consts)
{
    int dim = static_cast<int>(box.size());
    std::vector<Expression> parsed;
    parsed.reserve(constraints.size());
    for (const auto& text : constraints)
        parsed.push_back(Expression::parse(text, dim));
    return Region(std::move(box), std::move(parsed), margin, std::move(consts));
}

Region Region::ball(const Point& center, double radius)
{
    int dim = static_cast<int>(center.size());
    std::vector<Interval> box;
    Expression g = Expression::number(-radius * radius, dim);
    for (int k = 0; k < dim; ++k) {
        box.push_back({center[k] - radius, center[k] + radius});
        g = g + pow(Expression::variable(k, dim) - Expression::number(center[k], dim), 2);
    }
    return Region(std::move(box), {g});
}

bool Region::contains(const Point& p) const
{
    if (p.size() != box_.size())
        throw Error("point dimension does not match region");
    for (std::size_t k = 0; k < box_.size(); ++k) {
        if (p[k] < box_[k].lo || p[k] > box_[k].hi)
            return false;
    }
    double bound = margin_ > 0.0 ? -margin_ : 0.0;
    for (const auto& g : constraints_) {
        double v;
        try {
            v = g.evaluate(p, consts_);
        } catch (const DomainError& e) {
            throw e.at(p);
        }
        if (v > bound)
            return false;
    }
    return true;
}

double Region::constraint_value(const Point& p) const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& g : constraints_)
        worst = std::max(worst, g.evaluate(p, consts_));
    if (constraints_.empty()) {
        for (std::size_t k = 0; k < box_.size(); ++k)
            worst = std::max({worst, box_[k].lo - p[k], p[k] - box_[k].hi});
    }
    return worst;
}

Region Region::reflected(const std::vector<bool>& flip) const
{
    std::vector<Interval> box = box_;
    for (std::size_t k = 0; k < box.size() && k < flip.size(); ++k) {
        if (flip[k])
            box[k] = {-box_[k].hi, -box_[k].lo};
    }
    std::vector<Expression> constraints;
    for (const auto& g : constraints_)
        constraints.push_back(g.reflect(flip));
    return Region(std::move(box), std::move(constraints), margin_, consts_);
}

double grid_coordinate(const Interval& axis, int k, int n)
{
    double mid = 0.5 * axis.lo + 0.5 * axis.hi;
    double half = 0.5 * axis.hi - 0.5 * axis.lo;
    double t = static_cast<double>(2 * k - (n - 1)) / static_cast<double>(n - 1);
    if (k == 0)
        return axis.lo;
    if (k == n - 1)
        return axis.hi;
    return mid + half * t;
}

SampleGrid sample(const Region& r, int resolution)
{
    if (resolution < 2)
        throw Error("grid resolution must be at least 2");
    const int dim = r.dim();
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        for (int i = 0; i < resolution; ++i)
            axes[k].push_back(grid_coordinate(r.box()[k], i, resolution));
    }

    SampleGrid grid;
    grid.resolution = resolution;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    Point p(static_cast<std::size_t>(dim));
    for (;;) {
        for (int k = 0; k < dim; ++k)
            p[k] = axes[k][idx[k]];
        if (r.contains(p))
            grid.points.push_back(p);
        int k = dim - 1;
        while (k >= 0 && ++idx[k] == resolution)
            idx[k--] = 0;
        if (k < 0)
            break;
    }
    if (grid.points.empty())
        throw Error("region too thin for resolution " + std::to_string(resolution));
    return grid;
}

} // namespace wavecert
