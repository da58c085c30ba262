#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qkahler/common.hpp"

namespace qk {

/// Element of the truncated carrier space.
struct StateVector {
    std::vector<cplx> amp;

    StateVector() = default;
    explicit StateVector(int dim) : amp(static_cast<std::size_t>(dim), cplx(0.0)) {}

    int dim() const { return static_cast<int>(amp.size()); }
    cplx& operator[](int i) { return amp[static_cast<std::size_t>(i)]; }
    const cplx& operator[](int i) const { return amp[static_cast<std::size_t>(i)]; }

    static StateVector basis_vector(int dim, int i);

    double norm() const;
};

cplx inner(const StateVector& v, const StateVector& w);  // conjugate-linear in v

/// Sparse complex matrix in row-sorted coordinate form; exact zeros are
/// dropped on consolidation. Immutable once consumers start reading.
class SparseOperator {
public:
    struct Entry {
        int row, col;
        cplx value;
    };

    SparseOperator() = default;
    explicit SparseOperator(int dim) : dim_(dim) {}

    static SparseOperator identity(int dim);

    int dim() const { return dim_; }

    void add(int row, int col, cplx value);

    const std::vector<Entry>& entries() const;
    std::size_t nnz() const { return entries().size(); }
    cplx coeff(int row, int col) const;
    double max_abs() const;

    StateVector apply(const StateVector& x) const;
    void apply(const cplx* x, cplx* y) const;
    /// y = A^dagger x
    void apply_adjoint(const cplx* x, cplx* y) const;

    SparseOperator adjoint() const;
    SparseOperator operator*(const SparseOperator& rhs) const;
    SparseOperator operator+(const SparseOperator& rhs) const;
    SparseOperator operator-(const SparseOperator& rhs) const;
    SparseOperator scaled(cplx factor) const;

    /// Submatrix on the given ordinals (ascending), remapped to 0..keep-1.
    SparseOperator compressed(const std::vector<int>& keep) const;

    Eigen::MatrixXcd dense() const;
    static SparseOperator from_dense(const Eigen::MatrixXcd& m, double drop_below = 0.0);

private:
    void consolidate() const;
    int dim_ = 0;
    mutable std::vector<Entry> entries_;
    mutable std::vector<std::size_t> row_ptr_;
    mutable bool dirty_ = false;
};

/// Largest singular value via power iteration on A^dagger A (all-ones start,
/// Rayleigh quotients compared at doubling checkpoints). Throws
/// ConvergenceError with the last estimate when the budget runs out.
double operator_norm(const SparseOperator& a, double tol = 1e-9);

/// G[i][j] = <v_i | v_j>, conjugate-linear in the first slot.
Eigen::MatrixXcd gram_matrix(const std::vector<StateVector>& vs);

} // namespace qk
