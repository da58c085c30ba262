#pragma once

#include <vector>

#include "qkahler/generators.hpp"

namespace qk {

/// Weighted radial nodes approximating the identity-resolution measure of a
/// rotation-invariant single-mode family. With uniform angular averaging the
/// quadrature sum is diagonal, d_n(r) = |K_n(r)|^2 / <K(r)|K(r)>, and the
/// weights solve sum_i w_i d_n(r_i) = 1 for n = 0..D-1.
struct QuadratureRule {
    FamilySpec spec;
    TruncationScheme trunc;
    std::vector<double> radii;
    std::vector<double> weights;
    double residual = 0.0;            // sup-norm moment defect = identity residual
    bool negative_weight_flag = false;

    std::vector<PhasePoint> nodes() const;
};

/// Solves the truncated moment problem on Chebyshev radial nodes.
/// Nonnegative weights are preferred (Lawson-Hanson active set); when they
/// cannot reach 1e-6 the signed least-squares solution is used and
/// negative_weight_flag is set. Residual above 1e-3 is an error.
QuadratureRule moment_match_measure(const FamilySpec& spec, const TruncationScheme& trunc,
                                    int radial_count);

/// || sum_i w_i (1/M) sum_theta P(r_i e^{i theta}) - I ||. Equally spaced
/// angles integrate the phases exactly for M >= 2D+1, which makes the
/// averaged sum diagonal.
double identity_residual(const QuadratureRule& rule, int angular_count);

/// sum_i w_i x angular average of conj(<K|v>) <K|w> / <K|K>; reproduces
/// <v|w> within rule.residual * ||v|| * ||w||.
cplx scalar_product_quadrature(const StateVector& v, const StateVector& w,
                               const QuadratureRule& rule, int angular_count);

/// |operator_norm(a_i) - sup_grid |<a_i>|| per coordinate generator. The rule
/// certifies that the family admits an (approximate) identity resolution;
/// Theorem-4-style equality emerges only as the grid reaches the boundary and
/// the truncation grows.
std::vector<double> isometry_gap(const GeneratorSet& gen, const QuadratureRule& rule,
                                 const std::vector<PhasePoint>& grid,
                                 double norm_tol = 1e-9);

/// Nonnegative least squares min ||A x - b||, x >= 0 (Lawson-Hanson).
std::vector<double> nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                         int max_iter = 0);

} // namespace qk
