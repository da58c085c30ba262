#pragma once

#include <map>
#include <string>
#include <vector>

#include "qkahler/expr.hpp"
#include "qkahler/generators.hpp"

namespace qk {

/// Relations under which words are normally ordered.
///
/// QHW: a_i A_i -> q A_i a_i + I; generators of different modes commute.
/// RDef (single mode): a A -> R(qQ), a Q -> q Q a, Q A -> q A Q.
struct RelationSet {
    enum class Kind { QHW, RDef } kind = Kind::QHW;
    double q = 0.5;
    int modes = 1;   // QHW
    Polynomial R;    // RDef

    static RelationSet qhw(double q, int modes);
    static RelationSet rdef(double q, Polynomial R);
    static RelationSet for_family(const FamilySpec& spec);
};

/// Key of a normally ordered monomial A^kdeg Q^p a^ldeg.
struct NormalKey {
    std::vector<int> kdeg;
    int p = 0;
    std::vector<int> ldeg;
    bool operator<(const NormalKey& o) const {
        if (kdeg != o.kdeg) return kdeg < o.kdeg;
        if (p != o.p) return p < o.p;
        return ldeg < o.ldeg;
    }
    friend bool operator==(const NormalKey&, const NormalKey&) = default;
};

struct NormalForm {
    int modes = 1;
    std::map<NormalKey, cplx> coef;  // zero coefficients purged

    AlgExpr to_expr() const;
    /// Terms sorted by (kdeg, p, ldeg); coefficients with 17 significant digits.
    std::string to_string() const;
};

enum class RewriteStrategy { Leftmost, Rightmost };

struct RewriteStats {
    long long steps = 0;
    long long terms_created = 0;
};

NormalForm normal_order(const AlgExpr& e, const RelationSet& rel,
                        RewriteStrategy strategy = RewriteStrategy::Leftmost,
                        RewriteStats* stats = nullptr);

/// Literal left-to-right product/sum of the generator matrices (the oracle
/// the rewriter is checked against).
SparseOperator evaluate_matrix(const AlgExpr& e, const GeneratorSet& gen);

/// Berezin symbol of a normal form at a phase point:
/// sum coeff * conj(z)^kdeg * <Q^p>(p) * z^ldeg.
cplx berezin_of_normal_form(const NormalForm& nf, const FamilySpec& spec,
                            const TruncationScheme& trunc, const PhasePoint& p);

} // namespace qk
