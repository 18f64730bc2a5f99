#pragma once

// Bicharacteristics of the principal symbol H(x, xi) = 1/2 sum a^{ij} xi_i xi_j:
//   dx/dt = A(x) xi,   dxi_k/dt = -1/2 xi^T A_{x_k}(x) xi.
// Rays stop at the first boundary contact; there are no reflections.

#include "wavecert/coeff.hpp"

#include <optional>
#include <vector>

namespace wavecert {

struct RayState {
    Point x;
    Point xi;
    double t = 0.0;
};

double hamiltonian(const CoefficientField& f, const Point& x, const Point& xi);

/// Rescales xi so that H(x, xi) = 1/2.
Point normalize_covector(const CoefficientField& f, const Point& x, Point xi);

struct RayOutcome {
    bool escaped = false;
    double escape_time = 0.0; // time of first boundary contact; horizon when trapped
    /// Smallest constraint margin -g(x) seen along the path (0 once the ray
    /// reaches the boundary).
    double min_boundary_distance = 0.0;
    double max_drift = 0.0;   // max_t |H(t) - H(0)| / H(0)
    double step_used = 0.0;
    int halvings = 0;
    RayState end;             // last state inside the region
    std::vector<Point> path;  // filled when requested
};

struct TraceOptions {
    double drift_tol = 1e-6;
    int max_halvings = 8;
    double time_tol = 1e-9;
    bool keep_path = false;
};

class StepCollapse : public Error {
public:
    using Error::Error;
};

/// Classical RK4 with fixed step. A trajectory whose relative Hamiltonian
/// drift exceeds drift_tol is retried with half the step, up to
/// max_halvings times, then StepCollapse is thrown.
RayOutcome trace(const CoefficientField& f, const Region& r, const RayState& start, double horizon, double step,
                 const TraceOptions& opts = {});

/// `count` rays from `center` with directions evenly spread on the unit
/// circle (2D), a Fibonacci sphere (3D) or +-1 (1D), each H-normalized.
std::vector<RayOutcome> fan(const CoefficientField& f, const Region& r, const Point& center, int count,
                            double horizon, double step, const TraceOptions& opts = {});

std::vector<Point> fan_directions(int dim, int count);

} // namespace wavecert
