#pragma once

// Bounded domains and the deterministic sample grids on which every
// "uniformly over the closed domain" claim is checked.

#include "wavecert/expr.hpp"

#include <utility>
#include <vector>

namespace wavecert {

struct Interval {
    double lo;
    double hi;
};

/// Axis-aligned bounding box intersected with {x : g(x) <= 0} for every
/// constraint g. A positive margin shrinks the set to {g(x) <= -margin}.
class Region {
public:
    Region(std::vector<Interval> box, std::vector<Expression> constraints = {}, double margin = 0.0,
           ConstantTable consts = {});

    /// Parses constraint strings in dimension box.size().
    static Region from_strings(std::vector<Interval> box, const std::vector<std::string>& constraints,
                               double margin = 0.0, ConstantTable consts = {});

    /// Disk (or ball) of the given radius with a bounding box that hugs it.
    static Region ball(const Point& center, double radius);

    int dim() const noexcept { return static_cast<int>(box_.size()); }
    const std::vector<Interval>& box() const noexcept { return box_; }
    const std::vector<Expression>& constraints() const noexcept { return constraints_; }
    double margin() const noexcept { return margin_; }
    const ConstantTable& constants() const noexcept { return consts_; }

    bool contains(const Point& p) const;

    /// Largest constraint value at p (<= 0 inside). Box-only regions return
    /// minus the distance to the nearest box face.
    double constraint_value(const Point& p) const;

    /// Point reflection of the region through x_k -> -x_k for flagged axes.
    Region reflected(const std::vector<bool>& flip) const;

private:
    std::vector<Interval> box_;
    std::vector<Expression> constraints_;
    double margin_;
    ConstantTable consts_;
};

struct SampleGrid {
    int resolution = 0;
    std::vector<Point> points;
};

/// Tensor grid of the bounding box (resolution points per axis), filtered by
/// Region::contains, ordered lexicographically with x1 slowest.
/// Coordinates are computed as mid + half*t with t symmetric about zero so
/// a reflected box yields exactly the reflected points.
/// Throws Error when resolution < 2 or no tensor point lies in the region.
SampleGrid sample(const Region& r, int resolution);

/// Tensor coordinate k of n along one axis.
double grid_coordinate(const Interval& axis, int k, int n);

} // namespace wavecert
