#include "qkahler/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "qkahler/parallel.hpp"

namespace qk {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool single_mode(const FamilySpec& spec) {
    return spec.kind == FamilyKind::Toeplitz || spec.kind == FamilyKind::RDeformed ||
           (spec.kind == FamilyKind::QHW && spec.modes == 1);
}

PhasePoint radial_point(const FamilySpec& spec, double r) {
    switch (spec.kind) {
        case FamilyKind::Toeplitz: return PhasePoint::disc(r);
        case FamilyKind::RDeformed: return PhasePoint::rdisc(r);
        case FamilyKind::QHW: return PhasePoint::polydisc({cplx(r)});
        default: throw Error("quadrature supports single-mode families only");
    }
}

PhasePoint angular_point(const FamilySpec& spec, double r, double theta) {
    cplx z = std::polar(r, theta);
    switch (spec.kind) {
        case FamilyKind::Toeplitz: return PhasePoint::disc(z);
        case FamilyKind::RDeformed: return PhasePoint::rdisc(z);
        case FamilyKind::QHW: return PhasePoint::polydisc({z});
        default: throw Error("quadrature supports single-mode families only");
    }
}

/// column d(r) of the angular-averaged projector, d_n(r) = |K_n|^2 / <K|K>
std::vector<double> averaged_projector_diagonal(const FamilySpec& spec,
                                                const TruncationScheme& trunc, double r) {
    StateVector k = coherent_vector(spec, trunc, radial_point(spec, r));
    std::vector<double> d(static_cast<std::size_t>(trunc.dim()));
    double n2 = 0.0;
    for (int n = 0; n < trunc.dim(); ++n) {
        d[static_cast<std::size_t>(n)] = std::norm(k[n]);
        n2 += d[static_cast<std::size_t>(n)];
    }
    for (double& v : d) v /= n2;
    return d;
}

} // namespace

std::vector<double> nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter) {
    // Lawson-Hanson active set
    const int n = static_cast<int>(a.cols());
    if (max_iter <= 0) max_iter = 3 * n;
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = a.transpose() * (b - a * x);
    const double wtol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
        if (idx.empty()) {
            z = Eigen::VectorXd::Zero(n);
            return;
        }
        Eigen::MatrixXd ap(a.rows(), static_cast<int>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) ap.col(static_cast<int>(c)) = a.col(idx[c]);
        Eigen::VectorXd zs = ap.colPivHouseholderQr().solve(b);
        z = Eigen::VectorXd::Zero(n);
        for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zs(static_cast<int>(c));
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        w = a.transpose() * (b - a * x);
        int best = -1;
        double bw = wtol;
        for (int i = 0; i < n; ++i)
            if (!passive[static_cast<std::size_t>(i)] && w(i) > bw) {
                bw = w(i);
                best = i;
            }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        Eigen::VectorXd z;
        solve_passive(z);
        while (true) {
            double alpha = 1.0;
            bool clip = false;
            for (int i = 0; i < n; ++i)
                if (passive[static_cast<std::size_t>(i)] && z(i) <= 0.0) {
                    double step = x(i) / (x(i) - z(i));
                    if (step < alpha) alpha = step;
                    clip = true;
                }
            if (!clip) {
                x = z;
                break;
            }
            x += alpha * (z - x);
            for (int i = 0; i < n; ++i)
                if (passive[static_cast<std::size_t>(i)] && x(i) <= 1e-14) {
                    passive[static_cast<std::size_t>(i)] = false;
                    x(i) = 0.0;
                }
            solve_passive(z);
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
    return out;
}

QuadratureRule moment_match_measure(const FamilySpec& spec, const TruncationScheme& trunc,
                                    int radial_count) {
    validate(spec, trunc);
    if (!single_mode(spec))
        throw Error("moment_match_measure: rotation-invariant single-mode families only");
    const int d = trunc.dim();
    if (radial_count < d) throw Error("moment_match_measure: radial_count must be >= D");

    QuadratureRule rule;
    rule.spec = spec;
    rule.trunc = trunc;

    const double r_eff = spec.domain_radius() * (1.0 - 1e-6);
    for (int k = 0; k < radial_count; ++k) {
        double x = std::cos((2.0 * k + 1.0) * kPi / (2.0 * radial_count));
        rule.radii.push_back(r_eff * 0.5 * (x + 1.0));
    }
    std::sort(rule.radii.begin(), rule.radii.end());

    Eigen::MatrixXd m(d, radial_count);
    parallel_for(radial_count, [&](std::ptrdiff_t i) {
        std::vector<double> col =
            averaged_projector_diagonal(spec, trunc, rule.radii[static_cast<std::size_t>(i)]);
        for (int n = 0; n < d; ++n) m(n, static_cast<int>(i)) = col[static_cast<std::size_t>(n)];
    });
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(d);

    std::vector<double> wpos = nnls(m, ones);
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(wpos.data(), radial_count);
    double res_pos = (m * wv - ones).cwiseAbs().maxCoeff();
    if (res_pos <= 1e-6) {
        rule.weights = wpos;
        rule.residual = res_pos;
        rule.negative_weight_flag = false;
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
        Eigen::VectorXd ws = cod.solve(ones);
        rule.weights.assign(ws.data(), ws.data() + radial_count);
        rule.residual = (m * ws - ones).cwiseAbs().maxCoeff();
        rule.negative_weight_flag = true;
    }
    if (rule.residual > 1e-3)
        throw ConvergenceError("moment_match_measure: residual above 1e-3, family/truncation "
                               "not resolvable at this size",
                               rule.residual, rule.residual);
    return rule;
}

std::vector<PhasePoint> QuadratureRule::nodes() const {
    std::vector<PhasePoint> out;
    for (double r : radii) out.push_back(radial_point(spec, r));
    return out;
}

double identity_residual(const QuadratureRule& rule, int angular_count) {
    const int d = rule.trunc.dim();
    if (angular_count < 2 * d + 1)
        throw Error("identity_residual: angular_count must be >= 2D+1");
    // With M >= 2D+1 equally spaced angles the phase averages (1/M) sum_j
    // e^{i(n-m)theta_j} vanish except n = m, so the assembled matrix is the
    // diagonal of averaged projector columns.
    std::vector<double> diag(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < rule.radii.size(); ++i) {
        std::vector<double> col =
            averaged_projector_diagonal(rule.spec, rule.trunc, rule.radii[i]);
        for (int n = 0; n < d; ++n) diag[static_cast<std::size_t>(n)] += rule.weights[i] * col[static_cast<std::size_t>(n)];
    }
    double worst = 0.0;
    for (int n = 0; n < d; ++n) worst = std::max(worst, std::abs(diag[static_cast<std::size_t>(n)] - 1.0));
    return worst;
}

cplx scalar_product_quadrature(const StateVector& v, const StateVector& w,
                               const QuadratureRule& rule, int angular_count) {
    if (v.dim() != rule.trunc.dim() || w.dim() != rule.trunc.dim())
        throw DimensionError("scalar_product_quadrature: dimension mismatch");
    if (angular_count < 1) throw Error("scalar_product_quadrature: angular_count >= 1");
    std::vector<cplx> partial(rule.radii.size(), cplx(0.0));
    parallel_for(static_cast<std::ptrdiff_t>(rule.radii.size()), [&](std::ptrdiff_t i) {
        cplx acc = 0.0;
        for (int j = 0; j < angular_count; ++j) {
            double theta = 2.0 * kPi * j / angular_count;
            StateVector k = coherent_vector(
                rule.spec, rule.trunc,
                angular_point(rule.spec, rule.radii[static_cast<std::size_t>(i)], theta));
            double n2 = 0.0;
            for (const cplx& a : k.amp) n2 += std::norm(a);
            acc += std::conj(inner(k, v)) * inner(k, w) / n2;
        }
        partial[static_cast<std::size_t>(i)] =
            rule.weights[static_cast<std::size_t>(i)] * acc / static_cast<double>(angular_count);
    });
    cplx total = 0.0;
    for (const cplx& p : partial) total += p;  // fixed order
    return total;
}

std::vector<double> isometry_gap(const GeneratorSet& gen, const QuadratureRule& rule,
                                 const std::vector<PhasePoint>& grid, double norm_tol) {
    if (grid.empty()) throw Error("isometry_gap: empty grid");
    if (!(rule.residual <= 1e-4))
        throw Error("isometry_gap: rule residual above 1e-4");
    std::vector<double> gaps;
    for (int i = 0; i < gen.generators(); ++i) {
        NormSymbolSup ns = norm_vs_symbol_sup(gen, i, grid, norm_tol);
        gaps.push_back(std::abs(ns.opnorm - ns.symbol_sup));
    }
    return gaps;
}

} // namespace qk
