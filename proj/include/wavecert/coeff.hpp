#pragma once

// The symmetric coefficient matrix A = (a^{ij}) and its first partials.

#include "wavecert/domain.hpp"
#include "wavecert/expr.hpp"
#include "wavecert/linalg.hpp"

#include <string>
#include <vector>

namespace wavecert {

/// A(x) and dA/dx_k evaluated at one point.
struct FieldValues {
    Matrix a;
    std::vector<Matrix> da; // da[k](i, j) = a^{ij}_{x_k}
};

class CoefficientField {
public:
    /// Diagonal fields take n entries (a^1..a^n). Full fields take the upper
    /// triangle row by row: a^{11}, a^{12}, ..., a^{1n}, a^{22}, ... so
    /// n(n+1)/2 entries.
    static CoefficientField build(std::vector<Expression> entries, bool diagonal, ConstantTable consts = {});
    static CoefficientField build(const std::vector<std::string>& entries, int dim, bool diagonal,
                                  ConstantTable consts = {});

    int dim() const noexcept { return dim_; }
    bool diagonal() const noexcept { return diagonal_; }
    const ConstantTable& constants() const noexcept { return consts_; }
    const std::vector<Expression>& stored_entries() const noexcept { return entries_; }

    /// a^{ij}; the zero expression off the diagonal of a diagonal field.
    const Expression& entry(int i, int j) const;
    /// a^{ij}_{x_k}
    const Expression& partial(int i, int j, int k) const;

    FieldValues evaluate(const Point& p) const;

    CoefficientField reflected(const std::vector<bool>& flip) const;

private:
    int dim_ = 0;
    bool diagonal_ = false;
    std::vector<Expression> entries_;
    std::vector<std::vector<Expression>> partials_; // [slot][k]
    ConstantTable consts_;
    Expression zero_;

    int slot(int i, int j) const; // -1 for structural zeros
};

struct PositivityReport {
    double alpha_min;
    Point worst_point;
    /// Number of grid points where Cholesky and the eigenvalue sign disagree.
    int cholesky_disagreements = 0;
};

/// Minimum over the grid of the smallest eigenvalue of A(x). Ties go to the
/// first point in grid order. alpha_min <= 0 rejects the field.
PositivityReport certify_positivity(const CoefficientField& f, const SampleGrid& g);

struct SignRange {
    double min;
    double max;
    Point argmin;
    Point argmax;
    bool uniformly_positive() const { return min > 0.0; }
    bool uniformly_negative() const { return max < 0.0; }
};

/// Grid range of a^{ii}_{x_k} for a diagonal field (0-based i, k).
SignRange partial_sign(const CoefficientField& f, int i, int k, const SampleGrid& g);

} // namespace wavecert
