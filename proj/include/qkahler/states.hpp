#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qkahler/generators.hpp"
#include "qkahler/rewrite.hpp"
#include "qkahler/rng.hpp"

namespace qk {

/// omega_p(x) = <K(p)|x K(p)> / <K(p)|K(p)>, the coherent state at p as a
/// positive linear unital functional on the truncated algebra.
class CoherentState {
public:
    CoherentState(const GeneratorSet& gen, const PhasePoint& p);

    const GeneratorSet& generators() const { return *gen_; }
    const PhasePoint& point() const { return point_; }
    const StateVector& vector() const { return k_; }  // normalized

    cplx eval(const SparseOperator& x) const;
    cplx eval(const AlgExpr& x) const;

private:
    const GeneratorSet* gen_;
    PhasePoint point_;
    StateVector k_;
};

/// max |omega(x a) - omega(x) omega(a)| over the product set; zero for the
/// untruncated theory, bounded by truncation tails here.
double coherence_residual(const CoherentState& omega, const std::vector<AlgExpr>& xs,
                          const std::vector<AlgExpr>& annihilation_words);

struct Theorem10Report {
    int trials = 0;
    int premise_hits = 0;
    int violations = 0;
    double worst_excess = 0.0;  // max over hits of lhs - rhs (<= slack when passing)
};

/// Random polynomials a_1..a_J, b_1..b_S in the annihilation generators; when
/// sum a*a <= sum b*b holds as matrices (min eig >= -1e-10), checks
/// sum |omega(a_j)|^2 <= sum |omega(b_s)|^2 + 1e-9.
Theorem10Report theorem10_check(const CoherentState& omega, int trials, std::uint64_t seed);

/// Creation word A1^{c_1} ... AN^{c_N} (creations commute; fixed order).
using CreationWord = std::vector<int>;

AlgExpr creation_word_expr(const CreationWord& w);

/// Hardy/GNS shadow built from the Gram matrix G_ij = omega(b_i^* b_j) of
/// creation words: null directions below rank_tol are quotiented out and the
/// generator actions [b] -> [A b] are expressed in the orthonormal quotient
/// basis.
struct GnsModel {
    PhasePoint point;
    std::vector<CreationWord> words;
    Eigen::MatrixXcd gram;
    double rank_tol = 1e-10;
    int rank = 0;
    Eigen::MatrixXcd quotient_basis;           // words x rank, orthonormal under gram
    std::vector<Eigen::MatrixXcd> gamma;       // per creation generator, rank x rank
};

GnsModel build_hardy_gns(const CoherentState& omega, const std::vector<CreationWord>& words,
                         double rank_tol = 1e-10);

/// Max difference between the model's Gram/actions and the ambient-space
/// route through the vectors b_i K(p)/||K(p)||; small values certify the
/// unitary equivalence of the Hardy and GNS pictures at this finite shadow.
double gns_equivalence_check(const GnsModel& model, const GeneratorSet& gen);

/// Dimension of {X : [X, a_i] = [X, a_i^*] = 0 for all i} by eigenvalue
/// thresholding of the stacked commutator map on D x D matrices (threshold
/// tol * max applied to the squared singular values). Dense solve, D <= 64.
int commutant_dimension(const GeneratorSet& gen, double tol = 1e-10);

} // namespace qk
