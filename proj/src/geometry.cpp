#include "qkahler/geometry.hpp"

#include <cmath>

#include "qkahler/parallel.hpp"

namespace qk {

double kahler_potential(const FamilySpec& spec, const TruncationScheme& trunc,
                        const PhasePoint& p) {
    StateVector k = coherent_vector(spec, trunc, p);
    double n2 = 0.0;
    for (const cplx& a : k.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw DomainError("kahler_potential: degenerate kernel");
    return std::log(n2);
}

KahlerSample curvature_metric(const FamilySpec& spec, const TruncationScheme& trunc,
                              const PhasePoint& p, double h) {
    if (!(h > 0.0)) throw Error("curvature_metric: step must be positive");
    if (domain_margin(spec, p) <= 2.0 * h)
        throw DomainError("curvature_metric: step too large for the domain margin");
    const int n = trunc.modes();

    KahlerSample s;
    s.point = p;

    StateVector k = coherent_vector(spec, trunc, p);
    double n2 = 0.0;
    for (const cplx& a : k.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw DomainError("curvature_metric: degenerate kernel");
    s.potential = std::log(n2);

    std::vector<StateVector> dk;
    dk.reserve(static_cast<std::size_t>(n));
    for (int mu = 0; mu < n; ++mu)
        dk.push_back(coherent_vector_derivative(spec, trunc, p, mu));

    s.theta.resize(static_cast<std::size_t>(n));
    for (int mu = 0; mu < n; ++mu) s.theta[static_cast<std::size_t>(mu)] = inner(k, dk[static_cast<std::size_t>(mu)]) / n2;

    s.metric = Eigen::MatrixXcd(n, n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
            cplx g = (inner(dk[static_cast<std::size_t>(mu)], dk[static_cast<std::size_t>(nu)]) * n2 -
                      inner(dk[static_cast<std::size_t>(mu)], k) * inner(k, dk[static_cast<std::size_t>(nu)])) /
                     (n2 * n2);
            s.metric(mu, nu) = g;
        }

    // finite-difference cross-check on the potential over the 2n real coords
    auto pot_at = [&](const std::vector<cplx>& z) {
        PhasePoint q = p;
        q.z = z;
        StateVector kv = coherent_vector(spec, trunc, q);
        double m2 = 0.0;
        for (const cplx& a : kv.amp) m2 += std::norm(a);
        return std::log(m2);
    };
    auto shift = [&](int coord, double delta) {
        // coord 2*mu selects x_mu, 2*mu+1 selects y_mu
        std::vector<cplx> z = p.z;
        int mu = coord / 2;
        z[static_cast<std::size_t>(mu)] += coord % 2 == 0 ? cplx(delta, 0.0) : cplx(0.0, delta);
        return z;
    };
    auto second = [&](int u, int v) {
        if (u == v) {
            return (pot_at(shift(u, h)) - 2.0 * s.potential + pot_at(shift(u, -h))) / (h * h);
        }
        auto shift2 = [&](double du, double dv) {
            std::vector<cplx> z = p.z;
            int mu = u / 2, nu = v / 2;
            z[static_cast<std::size_t>(mu)] += u % 2 == 0 ? cplx(du, 0.0) : cplx(0.0, du);
            z[static_cast<std::size_t>(nu)] += v % 2 == 0 ? cplx(dv, 0.0) : cplx(0.0, dv);
            PhasePoint q = p;
            q.z = z;
            StateVector kv = coherent_vector(spec, trunc, q);
            double m2 = 0.0;
            for (const cplx& a : kv.amp) m2 += std::norm(a);
            return std::log(m2);
        };
        return (shift2(h, h) - shift2(h, -h) - shift2(-h, h) + shift2(-h, -h)) / (4.0 * h * h);
    };

    s.metric_fd = Eigen::MatrixXcd(n, n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
            double pxx = second(2 * mu, 2 * nu);
            double pyy = second(2 * mu + 1, 2 * nu + 1);
            double pyx = second(2 * mu + 1, 2 * nu);
            double pxy = second(2 * mu, 2 * nu + 1);
            // d_{zbar_mu} d_{z_nu} = 1/4 [(d_x + i d_y)_mu (d_x - i d_y)_nu]
            s.metric_fd(mu, nu) = 0.25 * cplx(pxx + pyy, pyx - pxy);
        }

    s.route_diff = (s.metric - s.metric_fd).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (s.metric + s.metric.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    s.min_eig = es.eigenvalues().minCoeff();
    return s;
}

PositivityReport positivity_certificate(const std::vector<KahlerSample>& samples, double tol,
                                        double margin) {
    if (samples.empty()) throw Error("positivity_certificate: no samples");
    PositivityReport r;
    r.samples = static_cast<int>(samples.size());
    r.min_eig = samples.front().min_eig;
    for (const KahlerSample& s : samples) r.min_eig = std::min(r.min_eig, s.min_eig);
    r.psd = r.min_eig >= -tol;
    r.nondegenerate = r.min_eig >= margin;
    return r;
}

} // namespace qk
