#include "qkahler/generators.hpp"

#include <cmath>

#include "qkahler/parallel.hpp"

namespace qk {

namespace {

SparseOperator weighted_shift_down(const TruncationScheme& trunc, const std::vector<double>& w) {
    // a|n> = sqrt(w_{n-1}) |n-1>, a|0> = 0
    SparseOperator a(trunc.dim());
    for (int n = 1; n <= trunc.n_max(); ++n)
        a.add(n - 1, n, std::sqrt(w[static_cast<std::size_t>(n) - 1]));
    return a;
}

void build_minkowski(GeneratorSet& g) {
    const int lambda = g.spec.lambda;
    const TruncationScheme& t = g.trunc;
    for (const char* lab : {"a11", "a12", "a21", "a22"}) g.labels.push_back(lab);
    for (int i = 0; i < 4; ++i) g.anns.emplace_back(t.dim());

    for (int col = 0; col < t.dim(); ++col) {
        const auto ix = std::get<MinkIndex>(t.index_at(col));
        const int tj = ix.tj, m = ix.m, tj1 = ix.tj1, tj2 = ix.tj2;
        const double jp1 = 0.5 * (tj + tj1), jm1 = 0.5 * (tj - tj1);
        const double jp2 = 0.5 * (tj + tj2), jm2 = 0.5 * (tj - tj2);
        const double up_den = (tj + 1.0) * (tj + 2.0) * (m + lambda - 2.0);
        const double dn_den = tj > 0 ? (m + tj + lambda - 1.0) * tj * (tj + 1.0) : 1.0;
        auto put = [&](int op, int dtj, int dm, int dtj1, int dtj2, double c2, double sign) {
            if (c2 <= 0.0) return;
            MinkIndex target{tj + dtj, m + dm, tj1 + dtj1, tj2 + dtj2};
            int row = t.ordinal(target);
            if (row < 0) return;  // out-of-range targets dropped
            g.anns[static_cast<std::size_t>(op)].add(row, col, sign * std::sqrt(c2));
        };
        // raising branch (j+1/2, m-1) then lowering branch (j-1/2, m); the
        // raising terms of a12 and a21 carry a minus sign
        put(0, +1, -1, -1, -1, (jm1 + 1) * (jm2 + 1) * m / up_den, +1.0);
        put(0, -1, 0, -1, -1, tj > 0 ? jp1 * jp2 * (m + tj + 1) / dn_den : 0.0, +1.0);
        put(1, +1, -1, -1, +1, (jm1 + 1) * (jp2 + 1) * m / up_den, -1.0);
        put(1, -1, 0, -1, +1, tj > 0 ? jp1 * jm2 * (m + tj + 1) / dn_den : 0.0, +1.0);
        put(2, +1, -1, +1, -1, (jp1 + 1) * (jm2 + 1) * m / up_den, -1.0);
        put(2, -1, 0, +1, -1, tj > 0 ? jm1 * jp2 * (m + tj + 1) / dn_den : 0.0, +1.0);
        put(3, +1, -1, +1, +1, (jp1 + 1) * (jp2 + 1) * m / up_den, +1.0);
        put(3, -1, 0, +1, +1, tj > 0 ? jm1 * jm2 * (m + tj + 1) / dn_den : 0.0, +1.0);
    }
}

} // namespace

GeneratorSet build_generators(const FamilySpec& spec, const TruncationScheme& trunc) {
    validate(spec, trunc);
    GeneratorSet g{spec, trunc, {}, {}, {}, SparseOperator(trunc.dim()), false};
    switch (spec.kind) {
        case FamilyKind::Toeplitz: {
            g.anns.push_back(weighted_shift_down(
                trunc, std::vector<double>(static_cast<std::size_t>(trunc.n_max()), 1.0)));
            g.labels.push_back("a");
            break;
        }
        case FamilyKind::RDeformed: {
            std::vector<double> w(static_cast<std::size_t>(trunc.n_max()));
            double x = 1.0;
            for (int n = 1; n <= trunc.n_max(); ++n) {
                x *= spec.q;
                w[static_cast<std::size_t>(n) - 1] = spec.R(x);
            }
            g.anns.push_back(weighted_shift_down(trunc, w));
            g.labels.push_back("a");
            double qq = 1.0;
            for (int n = 0; n <= trunc.n_max(); ++n) {
                g.q_op.add(n, n, qq);
                qq *= spec.q;
            }
            g.has_q = true;
            break;
        }
        case FamilyKind::QHW: {
            for (int i = 0; i < spec.modes; ++i) {
                SparseOperator a(trunc.dim());
                for (int col = 0; col < trunc.dim(); ++col) {
                    auto ix = std::get<MultiIndex>(trunc.index_at(col));
                    int ki = ix.k[static_cast<std::size_t>(i)];
                    if (ki == 0) continue;
                    ix.k[static_cast<std::size_t>(i)] = ki - 1;
                    a.add(trunc.ordinal(ix), col, std::sqrt(q_integer(spec.q, ki)));
                }
                g.anns.push_back(std::move(a));
                g.labels.push_back("a" + std::to_string(i + 1));
            }
            break;
        }
        case FamilyKind::Minkowski:
            build_minkowski(g);
            break;
    }
    for (const SparseOperator& a : g.anns) g.creations.push_back(a.adjoint());
    return g;
}

std::vector<cplx> coordinates(const PhasePoint& p) { return p.z; }

std::vector<double> eigen_residual(const GeneratorSet& gen, const PhasePoint& p) {
    require_in_domain(gen.spec, p);
    StateVector k = coherent_vector(gen.spec, gen.trunc, p);
    double kn = k.norm();
    std::vector<cplx> z = coordinates(p);
    std::vector<double> out(static_cast<std::size_t>(gen.generators()), 0.0);
    parallel_for(gen.generators(), [&](std::ptrdiff_t i) {
        StateVector r = gen.anns[static_cast<std::size_t>(i)].apply(k);
        for (int n = 0; n < k.dim(); ++n) r[n] -= z[static_cast<std::size_t>(i)] * k[n];
        out[static_cast<std::size_t>(i)] = r.norm() / kn;
    });
    return out;
}

cplx covariant_symbol(const SparseOperator& x, const FamilySpec& spec,
                      const TruncationScheme& trunc, const PhasePoint& p) {
    StateVector k = coherent_vector(spec, trunc, p);
    if (x.dim() != k.dim()) throw DimensionError("covariant_symbol: dimension mismatch");
    double n2 = 0.0;
    for (const cplx& a : k.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw DomainError("covariant_symbol: degenerate self-kernel");
    return inner(k, x.apply(k)) / n2;
}

namespace {

double safe_norm(const SparseOperator& a, double tol) {
    if (a.nnz() == 0) return 0.0;
    return operator_norm(a, tol);
}

} // namespace

std::map<std::string, RelationResidual> relation_residuals(const GeneratorSet& gen,
                                                           double norm_tol) {
    std::map<std::string, RelationResidual> out;
    const int d = gen.dim();
    auto record = [&](const std::string& name, const SparseOperator& resid, int depth) {
        RelationResidual r;
        r.full = safe_norm(resid, norm_tol);
        r.interior = safe_norm(resid.compressed(gen.trunc.interior(depth)), norm_tol);
        out[name] = r;
    };
    switch (gen.spec.kind) {
        case FamilyKind::Toeplitz: {
            const SparseOperator& a = gen.anns[0];
            const SparseOperator& ad = gen.creations[0];
            record("aa*-I", a * ad - SparseOperator::identity(d), 1);
            SparseOperator proj0(d);
            proj0.add(0, 0, 1.0);
            record("a*a-(I-P0)", ad * a - (SparseOperator::identity(d) - proj0), 1);
            break;
        }
        case FamilyKind::RDeformed: {
            const SparseOperator& a = gen.anns[0];
            const SparseOperator& ad = gen.creations[0];
            const SparseOperator& qop = gen.q_op;
            const double q = gen.spec.q;
            SparseOperator r_of_q(d), r_of_qq(d);
            double x = 1.0;
            for (int n = 0; n <= gen.trunc.n_max(); ++n) {
                r_of_q.add(n, n, gen.spec.R(x));
                r_of_qq.add(n, n, gen.spec.R(q * x));
                x *= q;
            }
            record("a*a-R(Q)", ad * a - r_of_q, 1);
            record("aa*-R(qQ)", a * ad - r_of_qq, 1);
            record("aQ-qQa", a * qop - (qop * a).scaled(q), 1);
            record("Qa*-qa*Q", qop * ad - (ad * qop).scaled(q), 1);
            break;
        }
        case FamilyKind::QHW: {
            const double q = gen.spec.q;
            const int n = gen.generators();
            for (int i = 0; i < n; ++i) {
                SparseOperator resid = gen.anns[static_cast<std::size_t>(i)] * gen.creations[static_cast<std::size_t>(i)] -
                                       (gen.creations[static_cast<std::size_t>(i)] * gen.anns[static_cast<std::size_t>(i)]).scaled(q) -
                                       SparseOperator::identity(d);
                record("a" + std::to_string(i + 1) + "a*" + std::to_string(i + 1) +
                           "-qa*" + std::to_string(i + 1) + "a" + std::to_string(i + 1) + "-I",
                       resid, 1);
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i < j) {
                        record("[a" + std::to_string(i + 1) + ",a" + std::to_string(j + 1) + "]",
                               gen.anns[static_cast<std::size_t>(i)] * gen.anns[static_cast<std::size_t>(j)] -
                                   gen.anns[static_cast<std::size_t>(j)] * gen.anns[static_cast<std::size_t>(i)],
                               2);
                        record("[a*" + std::to_string(i + 1) + ",a*" + std::to_string(j + 1) + "]",
                               gen.creations[static_cast<std::size_t>(i)] * gen.creations[static_cast<std::size_t>(j)] -
                                   gen.creations[static_cast<std::size_t>(j)] * gen.creations[static_cast<std::size_t>(i)],
                               2);
                    }
                    if (i != j)
                        record("[a" + std::to_string(i + 1) + ",a*" + std::to_string(j + 1) + "]",
                               gen.anns[static_cast<std::size_t>(i)] * gen.creations[static_cast<std::size_t>(j)] -
                                   gen.creations[static_cast<std::size_t>(j)] * gen.anns[static_cast<std::size_t>(i)],
                               2);
                }
            break;
        }
        case FamilyKind::Minkowski: {
            // commutativity of the polarization
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    record("[" + gen.labels[static_cast<std::size_t>(i)] + "," +
                               gen.labels[static_cast<std::size_t>(j)] + "]",
                           gen.anns[static_cast<std::size_t>(i)] * gen.anns[static_cast<std::size_t>(j)] -
                               gen.anns[static_cast<std::size_t>(j)] * gen.anns[static_cast<std::size_t>(i)],
                           2);
            break;
        }
    }
    return out;
}

NormSymbolSup norm_vs_symbol_sup(const GeneratorSet& gen, int i,
                                 const std::vector<PhasePoint>& grid, double norm_tol) {
    if (grid.empty()) throw Error("norm_vs_symbol_sup: empty grid");
    NormSymbolSup r;
    r.opnorm = safe_norm(gen.anns[static_cast<std::size_t>(i)], norm_tol);
    std::vector<double> vals(grid.size(), 0.0);
    parallel_for(static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t k) {
        vals[static_cast<std::size_t>(k)] = std::abs(covariant_symbol(
            gen.anns[static_cast<std::size_t>(i)], gen.spec, gen.trunc, grid[static_cast<std::size_t>(k)]));
    });
    for (double v : vals) r.symbol_sup = std::max(r.symbol_sup, v);
    return r;
}

PhasePoint reconstruct_point(const StateVector& v, const GeneratorSet& gen) {
    double n2 = 0.0;
    for (const cplx& a : v.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw Error("reconstruct_point: zero vector");
    std::vector<cplx> z;
    for (const SparseOperator& a : gen.anns) z.push_back(inner(v, a.apply(v)) / n2);
    PhasePoint p;
    p.kind = gen.spec.kind;
    p.z = z;
    try {
        require_in_domain(gen.spec, p);
    } catch (const DomainError&) {
        throw ReconstructError("reconstructed point outside the classical domain (state not coherent)", z);
    }
    return p;
}

} // namespace qk
