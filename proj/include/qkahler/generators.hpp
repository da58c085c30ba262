#pragma once

#include <map>
#include <string>
#include <vector>

#include "qkahler/family.hpp"

namespace qk {

/// Annihilation operators of a family in a truncation, with their adjoints.
/// Each a_i is at most bidiagonal in the canonical basis (Minkowski operators
/// have the two shell-shift terms); matrix elements that would leave the
/// truncation are dropped.
struct GeneratorSet {
    FamilySpec spec;
    TruncationScheme trunc;
    std::vector<SparseOperator> anns;
    std::vector<SparseOperator> creations;
    std::vector<std::string> labels;
    SparseOperator q_op;  // RDeformed only: Q|n> = q^n |n>
    bool has_q = false;

    int dim() const { return trunc.dim(); }
    int generators() const { return static_cast<int>(anns.size()); }
};

GeneratorSet build_generators(const FamilySpec& spec, const TruncationScheme& trunc);

/// Coordinate values z_i(p) in generator order.
std::vector<cplx> coordinates(const PhasePoint& p);

/// ||(a_i - z_i) K(p)|| / ||K(p)|| per generator; bounded by the relative
/// truncation tail of K.
std::vector<double> eigen_residual(const GeneratorSet& gen, const PhasePoint& p);

/// <K(p)| x K(p)> / <K(p)|K(p)>
cplx covariant_symbol(const SparseOperator& x, const FamilySpec& spec,
                      const TruncationScheme& trunc, const PhasePoint& p);

struct RelationResidual {
    double interior = 0.0;  // compressed one level below every cutoff
    double full = 0.0;
};

/// Operator norms of the residual of each structural relation of the family.
std::map<std::string, RelationResidual> relation_residuals(const GeneratorSet& gen,
                                                           double norm_tol = 1e-9);

struct NormSymbolSup {
    double opnorm = 0.0;
    double symbol_sup = 0.0;
};

/// operator_norm(a_i) against sup over the grid of |<a_i>|; the sup never
/// exceeds the norm, and approaches it when an identity resolution exists.
NormSymbolSup norm_vs_symbol_sup(const GeneratorSet& gen, int i,
                                 const std::vector<PhasePoint>& grid,
                                 double norm_tol = 1e-9);

class ReconstructError : public DomainError {
public:
    ReconstructError(const std::string& msg, std::vector<cplx> coords)
        : DomainError(msg), raw_coordinates(std::move(coords)) {}
    std::vector<cplx> raw_coordinates;
};

/// z_i = <v|a_i v>/<v|v> assembled into a phase point; inverts
/// coherent_vector up to the eigen-residual bound. Throws ReconstructError
/// (carrying the raw coordinates) when the result leaves the domain.
PhasePoint reconstruct_point(const StateVector& v, const GeneratorSet& gen);

} // namespace qk
