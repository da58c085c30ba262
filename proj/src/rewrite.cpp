#include "qkahler/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

namespace qk {

RelationSet RelationSet::qhw(double q, int modes) {
    RelationSet r;
    r.kind = Kind::QHW;
    r.q = q;
    r.modes = modes;
    return r;
}

RelationSet RelationSet::rdef(double q, Polynomial R) {
    RelationSet r;
    r.kind = Kind::RDef;
    r.q = q;
    r.modes = 1;
    r.R = std::move(R);
    return r;
}

RelationSet RelationSet::for_family(const FamilySpec& spec) {
    switch (spec.kind) {
        case FamilyKind::QHW: return qhw(spec.q, spec.modes);
        case FamilyKind::RDeformed: return rdef(spec.q, spec.R);
        default: throw Error("no rewrite relations for this family");
    }
}

namespace {

// A pair (word[i], word[i+1]) is reducible when it violates the normal order
// A..A Q..Q a..a with same-type runs sorted by generator index.
bool reducible_at(const std::vector<Token>& w, std::size_t i) {
    const Token &x = w[i], &y = w[i + 1];
    using K = Token::Kind;
    if (x.kind == K::Ann && y.kind != K::Ann) return true;             // a before A or Q
    if (x.kind == K::Q && y.kind == K::Cre) return true;               // Q before A
    if (x.kind == y.kind && x.kind != K::Q && x.index > y.index) return true;
    return false;
}

struct WorkItem {
    cplx coeff;
    std::vector<Token> word;
};

} // namespace

NormalForm normal_order(const AlgExpr& e, const RelationSet& rel, RewriteStrategy strategy,
                        RewriteStats* stats) {
    if (rel.kind == RelationSet::Kind::RDef && (rel.modes != 1 || e.max_index() > 1))
        throw Error("RDef rewriting is single-mode");
    if (rel.kind == RelationSet::Kind::QHW && e.uses_q())
        throw Error("Q token is only meaningful under RDef relations");
    if (e.max_index() > rel.modes) throw Error("generator index exceeds the mode count");

    const int modes = rel.modes;
    NormalForm nf;
    nf.modes = modes;

    std::deque<WorkItem> work;
    for (const ExprTerm& t : e.terms) work.push_back({t.coeff, t.word});
    RewriteStats local;

    while (!work.empty()) {
        WorkItem item = std::move(work.front());
        work.pop_front();
        const std::vector<Token>& w = item.word;

        std::size_t at = w.size();
        if (!w.empty()) {
            if (strategy == RewriteStrategy::Leftmost) {
                for (std::size_t i = 0; i + 1 < w.size(); ++i)
                    if (reducible_at(w, i)) {
                        at = i;
                        break;
                    }
            } else {
                for (std::size_t i = w.size() - 1; i-- > 0;)
                    if (reducible_at(w, i)) {
                        at = i;
                        break;
                    }
            }
        }

        if (at == w.size()) {  // already normally ordered
            NormalKey key;
            key.kdeg.assign(static_cast<std::size_t>(modes), 0);
            key.ldeg.assign(static_cast<std::size_t>(modes), 0);
            for (const Token& t : w) {
                if (t.kind == Token::Kind::Cre) ++key.kdeg[static_cast<std::size_t>(t.index - 1)];
                else if (t.kind == Token::Kind::Ann) ++key.ldeg[static_cast<std::size_t>(t.index - 1)];
                else ++key.p;
            }
            nf.coef[key] += item.coeff;
            continue;
        }

        ++local.steps;
        const Token x = w[at], y = w[at + 1];
        auto emit = [&](cplx factor, const std::vector<Token>& replacement) {
            WorkItem next;
            next.coeff = item.coeff * factor;
            next.word.reserve(w.size() + replacement.size());
            next.word.insert(next.word.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(at));
            next.word.insert(next.word.end(), replacement.begin(), replacement.end());
            next.word.insert(next.word.end(), w.begin() + static_cast<std::ptrdiff_t>(at) + 2, w.end());
            ++local.terms_created;
            work.push_back(std::move(next));
        };

        using K = Token::Kind;
        if (x.kind == K::Ann && y.kind == K::Cre) {
            if (rel.kind == RelationSet::Kind::QHW) {
                if (x.index == y.index) {
                    emit(rel.q, {y, x});  // a A -> q A a + I
                    emit(1.0, {});
                } else {
                    emit(1.0, {y, x});    // different modes commute
                }
            } else {
                // a A -> R(qQ) = sum_d r_d q^d Q^d
                double qd = 1.0;
                for (std::size_t d = 0; d < rel.R.coef.size(); ++d) {
                    if (rel.R.coef[d] != 0.0)
                        emit(rel.R.coef[d] * qd,
                             std::vector<Token>(d, Token{K::Q, 1}));
                    qd *= rel.q;
                }
            }
        } else if (x.kind == K::Ann && y.kind == K::Q) {
            emit(rel.q, {y, x});  // a Q -> q Q a
        } else if (x.kind == K::Q && y.kind == K::Cre) {
            emit(rel.q, {y, x});  // Q A -> q A Q
        } else {
            emit(1.0, {y, x});    // same-type index sort
        }
    }

    for (auto it = nf.coef.begin(); it != nf.coef.end();)
        it = it->second == cplx(0.0) ? nf.coef.erase(it) : std::next(it);
    if (stats) *stats = local;
    return nf;
}

AlgExpr NormalForm::to_expr() const {
    AlgExpr e;
    for (const auto& [key, c] : coef) {
        ExprTerm t;
        t.coeff = c;
        for (int i = 0; i < modes; ++i)
            for (int r = 0; r < key.kdeg[static_cast<std::size_t>(i)]; ++r)
                t.word.push_back(Token{Token::Kind::Cre, i + 1});
        for (int r = 0; r < key.p; ++r) t.word.push_back(Token{Token::Kind::Q, 1});
        for (int i = 0; i < modes; ++i)
            for (int r = 0; r < key.ldeg[static_cast<std::size_t>(i)]; ++r)
                t.word.push_back(Token{Token::Kind::Ann, i + 1});
        e.terms.push_back(std::move(t));
    }
    return e;
}

std::string NormalForm::to_string() const {
    if (coef.empty()) return "0";
    std::string out;
    bool first = true;
    char buf[96];
    for (const auto& [key, c] : coef) {
        if (!first) out += " + ";
        first = false;
        if (c.imag() == 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g", c.real());
        } else if (c.real() == 0.0) {
            std::snprintf(buf, sizeof buf, "%.17gi", c.imag());
        } else {
            std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
        }
        out += buf;
        std::string word;
        auto append_power = [&word](const std::string& sym, int power) {
            if (power == 0) return;
            word += "\xC2\xB7" + sym;
            if (power > 1) word += "^" + std::to_string(power);
        };
        for (int i = 0; i < modes; ++i)
            append_power("A" + std::to_string(i + 1), key.kdeg[static_cast<std::size_t>(i)]);
        append_power("Q", key.p);
        for (int i = 0; i < modes; ++i)
            append_power("a" + std::to_string(i + 1), key.ldeg[static_cast<std::size_t>(i)]);
        out += word.empty() ? "\xC2\xB7I" : word;
    }
    return out;
}

SparseOperator evaluate_matrix(const AlgExpr& e, const GeneratorSet& gen) {
    const int d = gen.dim();
    SparseOperator acc(d);
    for (const ExprTerm& t : e.terms) {
        SparseOperator prod = SparseOperator::identity(d);
        for (const Token& tok : t.word) {
            const SparseOperator* m = nullptr;
            switch (tok.kind) {
                case Token::Kind::Ann:
                    if (tok.index > gen.generators())
                        throw DimensionError("expression uses generator a" + std::to_string(tok.index) +
                                             " beyond the family");
                    m = &gen.anns[static_cast<std::size_t>(tok.index - 1)];
                    break;
                case Token::Kind::Cre:
                    if (tok.index > gen.generators())
                        throw DimensionError("expression uses generator A" + std::to_string(tok.index) +
                                             " beyond the family");
                    m = &gen.creations[static_cast<std::size_t>(tok.index - 1)];
                    break;
                case Token::Kind::Q:
                    if (!gen.has_q) throw Error("family exposes no Q operator");
                    m = &gen.q_op;
                    break;
            }
            prod = prod * *m;
        }
        acc = acc + prod.scaled(t.coeff);
    }
    return acc;
}

cplx berezin_of_normal_form(const NormalForm& nf, const FamilySpec& spec,
                            const TruncationScheme& trunc, const PhasePoint& p) {
    require_in_domain(spec, p);
    StateVector k = coherent_vector(spec, trunc, p);
    double n2 = 0.0;
    for (const cplx& a : k.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw DomainError("berezin_of_normal_form: degenerate kernel");

    // <Q^p> per needed power (diagonal symbol; p = 0 term equals 1)
    std::map<int, double> qpow_symbol;
    for (const auto& [key, c] : nf.coef) qpow_symbol[key.p] = 0.0;
    for (auto& [pw, val] : qpow_symbol) {
        if (pw == 0) {
            val = 1.0;
            continue;
        }
        double acc = 0.0;
        for (int n = 0; n < trunc.dim(); ++n)
            acc += std::pow(std::pow(spec.q, n), pw) * std::norm(k[n]);
        val = acc / n2;
    }

    cplx out = 0.0;
    for (const auto& [key, c] : nf.coef) {
        cplx term = c * qpow_symbol[key.p];
        for (int i = 0; i < nf.modes; ++i) {
            for (int r = 0; r < key.kdeg[static_cast<std::size_t>(i)]; ++r)
                term *= std::conj(p.z[static_cast<std::size_t>(i)]);
            for (int r = 0; r < key.ldeg[static_cast<std::size_t>(i)]; ++r)
                term *= p.z[static_cast<std::size_t>(i)];
        }
        out += term;
    }
    return out;
}

} // namespace qk
