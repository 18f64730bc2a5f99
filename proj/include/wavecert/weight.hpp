#pragma once

// Constructive exponential weights for diagonal coefficient matrices.
//
// If for some axis j every off-axis partial a^i_{x_j} (i != j) keeps one
// strict sign over the domain, the weight
//
//   negative sign:  d = exp(lambda (c + x_j)) + sum_{i != j} exp(lambda x_i)
//   positive sign:  d = exp(-lambda (x_j - c)) + sum_{i != j} exp(-lambda x_i)
//
// satisfies the multiplier condition for all sufficiently large lambda.
// After dividing row j of B by d_{x_j x_j} and the other rows by +-d_{x_j},
// B tends to a matrix whose only nonzeros are the diagonal and column j.

#include "wavecert/condition.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wavecert {

enum class SignCase {
    negative, // a^i_{x_j} < 0 for all i != j
    positive, // a^i_{x_j} > 0 for all i != j
};
const char* to_string(SignCase s);

struct AdmissibleIndex {
    int j; // 0-based axis
    SignCase sign_case;
    double sign_margin; // distance of the extremum from 0; +inf when n == 1
};

/// Admissible (j, sign) pairs ordered by j, negative before positive.
/// a^j_{x_j} is never tested.
std::vector<AdmissibleIndex> detect_index(const CoefficientField& f, const SampleGrid& g);

struct PartialRange {
    int i; // coefficient index (0-based)
    int k; // derivative axis (0-based)
    SignRange range;
};
/// Grid ranges of every off-diagonal partial a^i_{x_k}, i != k.
std::vector<PartialRange> partial_sign_table(const CoefficientField& f, const SampleGrid& g);

/// Smallest grid-feasible shift:
///   negative: c = 1 + max sum_{i!=j} |x_i| - min x_j
///   positive: c = 1 + max sum_{i!=j} |x_i| + max x_j
double compute_c(const SampleGrid& g, int j, SignCase s);

WeightFunction construct_d(int j, SignCase s, double c, double lambda, int dim);

/// Largest exponent argument of any term of the weight over the grid.
double max_exponent(const SampleGrid& g, int j, SignCase s, double c, double lambda);

struct WeightCertificate {
    int j;
    SignCase sign_case;
    double c;
    double lambda;
    WeightFunction weight;
    ConditionReport report;
    double sign_margin;
    int doubling_steps;
    int bisection_steps;
};

struct SearchOptions {
    double lambda_max = 1048576.0; // 2^20
    double target_margin = 0.0;    // accept when mu0 > 0 and mu0 >= target_margin * alpha_min
    int bisection_rounds = 10;
    double overflow_limit = 1e300; // largest admissible exp() term
};

class ConstructionError : public Error {
public:
    enum class Kind { no_admissible_index, lambda_max_exceeded, overflow, not_diagonal };

    ConstructionError(Kind kind, const std::string& what, std::optional<ConditionReport> best = std::nullopt,
                      double best_lambda = 0.0);

    Kind kind() const noexcept { return kind_; }
    const std::optional<ConditionReport>& best_report() const noexcept { return best_; }
    double best_lambda() const noexcept { return best_lambda_; }

private:
    Kind kind_;
    std::optional<ConditionReport> best_;
    double best_lambda_;
};

/// Doubling over lambda = 1, 2, 4, ... up to lambda_max, then bisection
/// between the last failing and first passing lambda. Throws
/// ConstructionError (lambda_max_exceeded or overflow) carrying the best
/// failing report.
WeightCertificate find_lambda(const CoefficientField& f, const SampleGrid& g, int j, SignCase s, double c,
                              const SearchOptions& opts = {});

/// B with row j divided by d_{x_j x_j}(p) and every other row divided by
/// d_{x_j}(p) (negative case) or -d_{x_j}(p) (positive case).
Matrix scaled_B(const CoefficientField& f, const WeightFunction& w, int j, SignCase s, const Point& p);

/// Pointwise lambda -> infinity limit of scaled_B.
Matrix limit_matrix(const CoefficientField& f, int j, SignCase s, const Point& p);

/// sup over grid of max_ij |scaled_B - limit_matrix| for the weight at lambda.
double limit_distance(const CoefficientField& f, const SampleGrid& g, int j, SignCase s, double c, double lambda);

struct DecayRatios {
    double grad_over_hess_jj;   // max_i |d_{x_i} / d_{x_j x_j}|
    double grad_over_grad_j;    // max_{i!=j} |d_{x_i} / d_{x_j}|
    double hess_ii_over_grad_j; // max_{i!=j} |d_{x_i x_i} / d_{x_j}|
};
DecayRatios decay_ratios(const SampleGrid& g, int j, SignCase s, double c, double lambda);

} // namespace wavecert
