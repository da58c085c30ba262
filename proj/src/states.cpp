#include "qkahler/states.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qkahler/parallel.hpp"

namespace qk {

CoherentState::CoherentState(const GeneratorSet& gen, const PhasePoint& p)
    : gen_(&gen), point_(p) {
    require_in_domain(gen.spec, p);
    k_ = coherent_vector(gen.spec, gen.trunc, p);
    double n = k_.norm();
    if (!(n > 0.0)) throw DomainError("coherent state with vanishing self-kernel");
    for (cplx& a : k_.amp) a /= n;
}

cplx CoherentState::eval(const SparseOperator& x) const {
    if (x.dim() != k_.dim()) throw DimensionError("state_eval: dimension mismatch");
    return inner(k_, x.apply(k_));
}

cplx CoherentState::eval(const AlgExpr& x) const {
    cplx acc = 0.0;
    for (const ExprTerm& t : x.terms) {
        StateVector v = k_;
        for (std::size_t i = t.word.size(); i-- > 0;) {
            const Token& tok = t.word[i];
            switch (tok.kind) {
                case Token::Kind::Ann:
                    v = gen_->anns.at(static_cast<std::size_t>(tok.index - 1)).apply(v);
                    break;
                case Token::Kind::Cre:
                    v = gen_->creations.at(static_cast<std::size_t>(tok.index - 1)).apply(v);
                    break;
                case Token::Kind::Q:
                    if (!gen_->has_q) throw Error("family exposes no Q operator");
                    v = gen_->q_op.apply(v);
                    break;
            }
        }
        acc += t.coeff * inner(k_, v);
    }
    return acc;
}

double coherence_residual(const CoherentState& omega, const std::vector<AlgExpr>& xs,
                          const std::vector<AlgExpr>& annihilation_words) {
    if (xs.empty() || annihilation_words.empty())
        throw Error("coherence_residual: empty input sets");
    double worst = 0.0;
    for (const AlgExpr& x : xs) {
        cplx wx = omega.eval(x);
        for (const AlgExpr& a : annihilation_words) {
            cplx wa = omega.eval(a);
            cplx wxa = omega.eval(x * a);
            worst = std::max(worst, std::abs(wxa - wx * wa));
        }
    }
    return worst;
}

namespace {

AlgExpr random_ann_polynomial(CounterRng& rng, int modes, int max_terms, int max_len) {
    AlgExpr e;
    int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t) {
        ExprTerm term;
        term.coeff = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len) + 1));
        for (int i = 0; i < len; ++i)
            term.word.push_back(
                Token{Token::Kind::Ann, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(modes)))});
        e.terms.push_back(std::move(term));
    }
    return e.simplified();
}

AlgExpr adjoint_expr(const AlgExpr& e) {
    AlgExpr out;
    for (const ExprTerm& t : e.terms) {
        ExprTerm a;
        a.coeff = std::conj(t.coeff);
        for (std::size_t i = t.word.size(); i-- > 0;) {
            Token tok = t.word[i];
            if (tok.kind == Token::Kind::Ann) tok.kind = Token::Kind::Cre;
            else if (tok.kind == Token::Kind::Cre) tok.kind = Token::Kind::Ann;
            a.word.push_back(tok);
        }
        out.terms.push_back(std::move(a));
    }
    return out;
}

} // namespace

Theorem10Report theorem10_check(const CoherentState& omega, int trials, std::uint64_t seed) {
    if (trials < 1) throw Error("theorem10_check needs trials >= 1");
    const GeneratorSet& gen = omega.generators();
    const int modes = gen.generators();
    Theorem10Report rep;
    rep.trials = trials;

    // Draw order per trial: shape selector, then the a-polynomials, then the
    // b-polynomials (stream = seed, one CounterRng for the whole run).
    CounterRng rng(seed, /*stream=*/10);
    for (int t = 0; t < trials; ++t) {
        int shape = static_cast<int>(rng.below(10));
        int j = 1 + static_cast<int>(rng.below(2));
        std::vector<AlgExpr> as, bs;
        for (int i = 0; i < j; ++i) as.push_back(random_ann_polynomial(rng, modes, 2, 3));
        if (shape < 3) {
            // premise holds by construction: b-set = a-set plus one extra
            bs = as;
            bs.push_back(random_ann_polynomial(rng, modes, 2, 3));
        } else if (shape < 5) {
            // premise holds by scaling
            double c = 1.0 + rng.uniform(0.0, 2.0);
            for (const AlgExpr& a : as) bs.push_back(a.scaled(c));
        } else {
            int scount = 1 + static_cast<int>(rng.below(2));
            for (int i = 0; i < scount; ++i) bs.push_back(random_ann_polynomial(rng, modes, 2, 3));
        }

        const int d = gen.dim();
        SparseOperator lhs(d), rhs(d);
        for (const AlgExpr& a : as) {
            SparseOperator m = evaluate_matrix(a, gen);
            lhs = lhs + m.adjoint() * m;
        }
        for (const AlgExpr& b : bs) {
            SparseOperator m = evaluate_matrix(b, gen);
            rhs = rhs + m.adjoint() * m;
        }
        Eigen::MatrixXcd diff = rhs.dense() - lhs.dense();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (diff + diff.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        double scale = std::max(1.0, diff.cwiseAbs().maxCoeff());
        if (es.eigenvalues().minCoeff() < -1e-10 * scale) continue;  // premise does not hold

        ++rep.premise_hits;
        double mu_a = 0.0, mu_b = 0.0;
        for (const AlgExpr& a : as) mu_a += std::norm(omega.eval(a));
        for (const AlgExpr& b : bs) mu_b += std::norm(omega.eval(b));
        rep.worst_excess = std::max(rep.worst_excess, mu_a - mu_b);
        if (mu_a > mu_b + 1e-9) ++rep.violations;
    }
    return rep;
}

AlgExpr creation_word_expr(const CreationWord& w) {
    AlgExpr e;
    ExprTerm t;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (int r = 0; r < w[i]; ++r) t.word.push_back(Token{Token::Kind::Cre, static_cast<int>(i) + 1});
    e.terms.push_back(std::move(t));
    return e;
}

GnsModel build_hardy_gns(const CoherentState& omega, const std::vector<CreationWord>& words,
                         double rank_tol) {
    if (words.empty()) throw Error("build_hardy_gns: need at least one word");
    const GeneratorSet& gen = omega.generators();
    const int m = static_cast<int>(words.size());

    GnsModel model;
    model.point = omega.point();
    model.words = words;
    model.rank_tol = rank_tol;

    // G_ij = omega(b_i^* b_j)
    model.gram = Eigen::MatrixXcd(m, m);
    std::vector<AlgExpr> word_exprs;
    for (const CreationWord& w : words) word_exprs.push_back(creation_word_expr(w));
    for (int i = 0; i < m; ++i) {
        AlgExpr bi_star = adjoint_expr(word_exprs[static_cast<std::size_t>(i)]);
        for (int j = 0; j < m; ++j)
            model.gram(i, j) = omega.eval(bi_star * word_exprs[static_cast<std::size_t>(j)]);
    }

    Eigen::MatrixXcd herm = 0.5 * (model.gram + model.gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    double top = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-8 * std::max(top, 1.0))
        throw Error("build_hardy_gns: Gram matrix is not positive semidefinite");

    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
        if (es.eigenvalues()(i) > rank_tol * std::max(top, 0.0)) keep.push_back(i);
    model.rank = static_cast<int>(keep.size());
    model.quotient_basis = Eigen::MatrixXcd(m, model.rank);
    for (int c = 0; c < model.rank; ++c)
        model.quotient_basis.col(c) =
            es.eigenvectors().col(keep[static_cast<std::size_t>(c)]) /
            std::sqrt(es.eigenvalues()(keep[static_cast<std::size_t>(c)]));

    // gamma(A)[b_i] = [A b_i]: M_ki = omega(b_k^* A b_i), projected to the span
    for (int gidx = 0; gidx < gen.generators(); ++gidx) {
        AlgExpr a_cre;
        a_cre.terms.push_back({cplx(1.0), {Token{Token::Kind::Cre, gidx + 1}}});
        Eigen::MatrixXcd action(m, m);
        for (int k = 0; k < m; ++k) {
            AlgExpr bk_star = adjoint_expr(word_exprs[static_cast<std::size_t>(k)]);
            for (int i = 0; i < m; ++i)
                action(k, i) = omega.eval(bk_star * (a_cre * word_exprs[static_cast<std::size_t>(i)]));
        }
        model.gamma.push_back(model.quotient_basis.adjoint() * action * model.quotient_basis);
    }
    return model;
}

double gns_equivalence_check(const GnsModel& model, const GeneratorSet& gen) {
    // ambient route: v_i = b_i K(p) / ||K(p)||
    CoherentState omega(gen, model.point);
    const int m = static_cast<int>(model.words.size());
    std::vector<StateVector> vs;
    for (const CreationWord& w : model.words) {
        StateVector v = omega.vector();
        for (std::size_t i = 0; i < w.size(); ++i)
            for (int r = 0; r < w[i]; ++r)
                v = gen.creations.at(i).apply(v);
        vs.push_back(std::move(v));
    }
    Eigen::MatrixXcd ambient_gram = gram_matrix(vs);
    double worst = (ambient_gram - model.gram).cwiseAbs().maxCoeff();

    for (int gidx = 0; gidx < gen.generators(); ++gidx) {
        Eigen::MatrixXcd action(m, m);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                action(k, i) = inner(vs[static_cast<std::size_t>(k)],
                                     gen.creations[static_cast<std::size_t>(gidx)].apply(
                                         vs[static_cast<std::size_t>(i)]));
        Eigen::MatrixXcd compressed =
            model.quotient_basis.adjoint() * action * model.quotient_basis;
        worst = std::max(worst,
                         (compressed - model.gamma[static_cast<std::size_t>(gidx)]).cwiseAbs().maxCoeff());
    }
    return worst;
}

int commutant_dimension(const GeneratorSet& gen, double tol) {
    const int d = gen.dim();
    if (d > 64) throw Error("commutant_dimension: dense solve limited to D <= 64");
    const int dd = d * d;

    // H = sum_g L_g^dag L_g where L_g vec(X) = vec(Xg - gX), vec column-major.
    // Null space of H = joint commutant; tol * max thresholds the squared
    // singular values of the stacked commutator map.
    SparseOperator h(dd);
    std::vector<const SparseOperator*> gens;
    for (const SparseOperator& a : gen.anns) gens.push_back(&a);
    for (const SparseOperator& a : gen.creations) gens.push_back(&a);
    for (const SparseOperator* g : gens) {
        SparseOperator lg(dd);
        for (const SparseOperator::Entry& e : g->entries()) {
            // (Xg)_{ij} picks X_{i,e.row} with weight g_{e.row,e.col} at j=e.col
            for (int i = 0; i < d; ++i) lg.add(i + e.col * d, i + e.row * d, e.value);
            // (gX)_{ij} picks X_{e.col,j} with weight g_{e.row,e.col} at i=e.row
            for (int j = 0; j < d; ++j) lg.add(e.row + j * d, e.col + j * d, -e.value);
        }
        h = h + lg.adjoint() * lg;
    }
    if (h.nnz() == 0) return dd;  // only scalars among the generators

    double eigmax = operator_norm(h, 1e-6);
    if (eigmax == 0.0) return dd;
    const double tau = tol * eigmax;
    const double sigma = std::max(tau, 1e-3 * eigmax);

    Eigen::SparseMatrix<cplx> hs(dd, dd);
    {
        std::vector<Eigen::Triplet<cplx>> trips;
        trips.reserve(h.nnz() + static_cast<std::size_t>(dd));
        for (const SparseOperator::Entry& e : h.entries()) trips.emplace_back(e.row, e.col, e.value);
        for (int i = 0; i < dd; ++i) trips.emplace_back(i, i, cplx(sigma));
        hs.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<cplx>> solver(hs);
    if (solver.info() != Eigen::Success)
        throw Error("commutant_dimension: factorization failed");

    auto apply_h = [&](const Eigen::MatrixXcd& x) {
        Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(dd, x.cols());
        for (const SparseOperator::Entry& e : h.entries())
            y.row(e.row) += e.value * x.row(e.col);
        return y;
    };

    int block = std::min(8, dd);
    for (;;) {
        CounterRng rng(0x51DE5EEDull, 3);
        Eigen::MatrixXcd x(dd, block);
        for (int c = 0; c < block; ++c)
            for (int r = 0; r < dd; ++r)
                x(r, c) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        for (int it = 0; it < 40; ++it) {
            x = solver.solve(x);
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
            x = qr.householderQ() * Eigen::MatrixXcd::Identity(dd, block);
        }
        Eigen::MatrixXcd t = x.adjoint() * apply_h(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (t + t.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        int count = 0;
        for (int i = 0; i < block; ++i)
            if (es.eigenvalues()(i) < tau) ++count;
        if (count < block || block == dd) return count;
        block = std::min(2 * block, dd);  // every probe direction was null; widen
    }
}

} // namespace qk
