#include "wavecert/rays.hpp"

#include "wavecert/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wavecert {

double hamiltonian(const CoefficientField& f, const Point& x, const Point& xi)
{
    FieldValues v = f.evaluate(x);
    double h = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        for (std::size_t j = 0; j < xi.size(); ++j)
            h += v.a(i, j) * xi[i] * xi[j];
    return 0.5 * h;
}

Point normalize_covector(const CoefficientField& f, const Point& x, Point xi)
{
    double h = hamiltonian(f, x, xi);
    if (!(h > 0.0))
        throw Error("covector has non-positive Hamiltonian");
    double s = 1.0 / std::sqrt(2.0 * h);
    for (double& v : xi)
        v *= s;
    return xi;
}

namespace {

struct Derivative {
    Point dx;
    Point dxi;
};

Derivative flow(const CoefficientField& f, const Point& x, const Point& xi)
{
    const std::size_t n = x.size();
    FieldValues v = f.evaluate(x);
    Derivative d{Point(n, 0.0), Point(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d.dx[i] += v.a(i, j) * xi[j];
    for (std::size_t k = 0; k < n; ++k) {
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                q += v.da[k](i, j) * xi[i] * xi[j];
        d.dxi[k] = -0.5 * q;
    }
    return d;
}

RayState rk4(const CoefficientField& f, const RayState& s, double h)
{
    const std::size_t n = s.x.size();
    auto shifted = [&](const Point& base, const Point& dir, double c) {
        Point out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = base[i] + c * dir[i];
        return out;
    };
    Derivative k1 = flow(f, s.x, s.xi);
    Derivative k2 = flow(f, shifted(s.x, k1.dx, 0.5 * h), shifted(s.xi, k1.dxi, 0.5 * h));
    Derivative k3 = flow(f, shifted(s.x, k2.dx, 0.5 * h), shifted(s.xi, k2.dxi, 0.5 * h));
    Derivative k4 = flow(f, shifted(s.x, k3.dx, h), shifted(s.xi, k3.dxi, h));
    RayState out{Point(n), Point(n), s.t + h};
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = s.x[i] + h / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
        out.xi[i] = s.xi[i] + h / 6.0 * (k1.dxi[i] + 2.0 * k2.dxi[i] + 2.0 * k3.dxi[i] + k4.dxi[i]);
    }
    return out;
}

double margin(const Region& r, const Point& x) { return std::max(0.0, -r.constraint_value(x)); }

RayOutcome integrate(const CoefficientField& f, const Region& r, const RayState& start, double horizon, double h,
                     const TraceOptions& opts)
{
    RayOutcome out;
    out.step_used = h;
    const double h0 = hamiltonian(f, start.x, start.xi);
    auto drift = [&](const RayState& s) { return std::abs(hamiltonian(f, s.x, s.xi) - h0) / h0; };

    RayState s = start;
    out.min_boundary_distance = margin(r, s.x);
    if (opts.keep_path)
        out.path.push_back(s.x);

    while (s.t < horizon) {
        double dt = std::min(h, horizon - s.t);
        RayState next = rk4(f, s, dt);
        if (!r.contains(next.x)) {
            double lo = 0.0;
            double hi = dt;
            while (hi - lo > opts.time_tol) {
                double mid = 0.5 * (lo + hi);
                if (r.contains(rk4(f, s, mid).x))
                    lo = mid;
                else
                    hi = mid;
            }
            RayState inside = lo > 0.0 ? rk4(f, s, lo) : s;
            out.max_drift = std::max(out.max_drift, drift(inside));
            out.escaped = true;
            out.escape_time = s.t + 0.5 * (lo + hi);
            out.min_boundary_distance = 0.0;
            out.end = inside;
            if (opts.keep_path)
                out.path.push_back(inside.x);
            return out;
        }
        s = next;
        if (horizon - s.t < 1e-12 * std::max(1.0, horizon))
            s.t = horizon;
        out.max_drift = std::max(out.max_drift, drift(s));
        out.min_boundary_distance = std::min(out.min_boundary_distance, margin(r, s.x));
        if (opts.keep_path)
            out.path.push_back(s.x);
    }
    out.escape_time = horizon;
    out.end = s;
    return out;
}

} // namespace

RayOutcome trace(const CoefficientField& f, const Region& r, const RayState& start, double horizon, double step,
                 const TraceOptions& opts)
{
    if (!(step > 0.0))
        throw Error("ray step must be positive");
    if (!(horizon > 0.0))
        throw Error("ray horizon must be positive");
    if (!r.contains(start.x))
        throw Error("ray start " + format_point(start.x) + " lies outside the region");
    RayState s0{start.x, normalize_covector(f, start.x, start.xi), 0.0};

    double h = step;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, h *= 0.5) {
        RayOutcome out = integrate(f, r, s0, horizon, h, opts);
        if (out.max_drift <= opts.drift_tol) {
            out.halvings = halving;
            return out;
        }
    }
    throw StepCollapse("step collapse: Hamiltonian drift above " + std::to_string(opts.drift_tol) + " after " +
                       std::to_string(opts.max_halvings) + " halvings from " + format_point(start.x));
}

std::vector<Point> fan_directions(int dim, int count)
{
    std::vector<Point> dirs;
    if (count <= 0)
        return dirs;
    if (dim == 1) {
        for (int k = 0; k < count; ++k)
            dirs.push_back({k % 2 == 0 ? 1.0 : -1.0});
    } else if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            double th = 2.0 * std::numbers::pi * k / count;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else if (dim == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / count;
            double rho = std::sqrt(1.0 - z * z);
            dirs.push_back({rho * std::cos(golden * k), rho * std::sin(golden * k), z});
        }
    } else {
        throw Error("ray fans are available in dimensions 1 to 3");
    }
    return dirs;
}

std::vector<RayOutcome> fan(const CoefficientField& f, const Region& r, const Point& center, int count,
                            double horizon, double step, const TraceOptions& opts)
{
    std::vector<Point> dirs = fan_directions(f.dim(), count);
    std::vector<RayOutcome> out(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t k) { out[k] = trace(f, r, RayState{center, dirs[k], 0.0}, horizon, step, opts); });
    return out;
}

} // namespace wavecert
