#pragma once

// Multiplier condition for a given weight d:
//   B = ( sum_{i',j'} a^{ij'} a^{i'j} d_{x_i' x_j'}
//         + 1/2 (a^{ij'} a^{i'j}_{x_j'} + a^{jj'} a^{i'i}_{x_j'} - a^{ij}_{x_j'} a^{i'j'}) d_{x_i'} )_{ij}
// must be uniformly positive definite, measured against A through the pencil
// (2B, A), and |grad d| must stay away from zero.

#include "wavecert/coeff.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavecert {

class WeightFunction {
public:
    explicit WeightFunction(Expression d);

    int dim() const noexcept { return d_.dim(); }
    const Expression& expression() const noexcept { return d_; }
    const Expression& gradient(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    const Expression& hessian(int i, int j) const;

    struct Values {
        double value;
        std::vector<double> grad;
        Matrix hess;
    };
    Values evaluate(const Point& p, const ConstantTable& consts = {}) const;

private:
    Expression d_;
    std::vector<Expression> grad_;
    std::vector<Expression> hess_; // upper triangle, row-major
};

/// B by the general double sum (any symmetric A). The result is symmetrized;
/// `raw_asymmetry`, when given, receives max |B_ij - B_ji| before that step.
Matrix assemble_B_general(const FieldValues& a, const WeightFunction::Values& w, double* raw_asymmetry = nullptr);

/// B for diagonal A, row by row:
///   b_ij = 1/2 (a^i a^j_{x_i} d_{x_j} + a^j a^i_{x_j} d_{x_i}) + a^i a^j d_{x_i x_j}
///          + delta_ij (-1/2 sum_k a^k a^i_{x_k} d_{x_k}).
/// The a^i a^j d_{x_i x_j} term reduces to the diagonal (a^i)^2 d_{x_i x_i}
/// for separable weights.
Matrix assemble_B_diag(const FieldValues& a, const WeightFunction::Values& w);

/// Unsymmetrized quadratic-form matrix of the pointwise inequality,
///   M_ij = sum_{i',j'} 2 a^{ij'} (a^{i'j} d_{x_i'})_{x_j'} - a^{ij}_{x_j'} a^{i'j'} d_{x_i'},
/// with the product rule expanded. (M + M^T)/2 == 2B.
Matrix assemble_con1_form(const FieldValues& a, const WeightFunction::Values& w);

Matrix assemble_B_general(const CoefficientField& f, const WeightFunction& w, const Point& p);
Matrix assemble_B_diag(const CoefficientField& f, const WeightFunction& w, const Point& p);
Matrix assemble_con1_form(const CoefficientField& f, const WeightFunction& w, const Point& p);

enum class Verdict { certified, failed_con1, failed_con2, failed_A };
const char* to_string(Verdict v);

struct PointRecord {
    Point x;
    double lambda_min_pencil; // smallest eigenvalue of (2B, A)
    double lambda_min_B;
    double grad_norm;
    std::vector<double> minors; // leading principal minors of B
};

struct ConditionReport {
    double mu0 = 0.0;           // min over grid of the (2B, A) pencil eigenvalue
    double lambda_min_B = 0.0;  // min over grid of the smallest eigenvalue of B
    double min_grad_norm = 0.0;
    double alpha_min = 0.0;
    Verdict verdict = Verdict::failed_A;
    Point worst_point_con1;
    Point worst_point_con2;
    Point worst_point_A;
    int grid_resolution = 0;
    std::size_t point_count = 0;
    /// Points where "all leading minors > 0" disagrees with lambda_min_B > 0.
    int sylvester_disagreements = 0;
    std::vector<PointRecord> per_point; // filled when requested
};

struct CheckOptions {
    bool keep_per_point = false;
};

/// Certifies A first (failed_A short-circuits), then sweeps the grid.
/// Ties in every min are resolved by grid order.
ConditionReport check_condition(const CoefficientField& f, const WeightFunction& w, const SampleGrid& g,
                                const CheckOptions& opts = {});
ConditionReport check_condition(const CoefficientField& f, const WeightFunction& w, const Region& r,
                                int resolution, const CheckOptions& opts = {});

/// CSV with columns x1..xn, lambda_min_2B_vs_A, lambda_min_B, grad_norm, m1..mn.
std::string per_point_csv(const ConditionReport& r, int dim);

} // namespace wavecert
