#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qkahler/family.hpp"

namespace qk {

/// Kahler data pulled back from the reproducing kernel at one point, in the
/// canonical gauge: potential Phi = log <K|K>, connection components
/// theta_mu = d_mu Phi, metric g[mu][nu] = d_{zbar_mu} d_{z_nu} Phi.
struct KahlerSample {
    PhasePoint point;
    double potential = 0.0;
    std::vector<cplx> theta;
    Eigen::MatrixXcd metric;     // analytic route: from differentiated coherent vectors
    Eigen::MatrixXcd metric_fd;  // central differences of the potential
    double route_diff = 0.0;     // max elementwise |metric - metric_fd|
    double min_eig = 0.0;        // of the analytic metric
};

double kahler_potential(const FamilySpec& spec, const TruncationScheme& trunc,
                        const PhasePoint& p);

/// Both routes are computed and must agree: the analytic metric
/// (<dK|dK><K|K> - <dK|K><K|dK>) / <K|K>^2 from coefficient-wise derivatives
/// of the truncated series, and second-order central differences of the
/// potential over the 2N real coordinates with step h.
KahlerSample curvature_metric(const FamilySpec& spec, const TruncationScheme& trunc,
                              const PhasePoint& p, double h = 1e-4);

struct PositivityReport {
    double min_eig = 0.0;        // min over samples of min eigenvalue of g
    bool psd = false;            // min_eig >= -tol
    bool nondegenerate = false;  // min_eig >= +margin
    int samples = 0;
};

PositivityReport positivity_certificate(const std::vector<KahlerSample>& samples,
                                        double tol = 1e-8, double margin = 1e-12);

} // namespace qk
