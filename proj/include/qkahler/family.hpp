#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qkahler/basis.hpp"
#include "qkahler/state.hpp"

namespace qk {

/// Real polynomial c0 + c1 x + c2 x^2 + ...
struct Polynomial {
    std::vector<double> coef;
    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coef.size(); i-- > 0;) acc = acc * x + coef[i];
        return acc;
    }
    int degree() const { return coef.empty() ? 0 : static_cast<int>(coef.size()) - 1; }
};

/// Which coherent-state family, with its parameters.
struct FamilySpec {
    FamilyKind kind = FamilyKind::Toeplitz;
    double q = 0.5;        // RDeformed, QHW
    Polynomial R;          // RDeformed: R(1) = 0, R(q^n) > 0 on the truncation
    int modes = 1;         // QHW
    int lambda = 4;        // Minkowski: integer > 3

    static FamilySpec toeplitz();
    static FamilySpec rdeformed(double q, Polynomial R);
    /// R(x) = (1-x)/(1-q), the q-oscillator weight
    static FamilySpec rdeformed_qhw(double q);
    static FamilySpec qhw(double q, int modes);
    static FamilySpec minkowski(int lambda);

    /// Radius of the classical domain (per coordinate); Minkowski uses the
    /// spectral bound on Z instead.
    double domain_radius() const;
};

/// Point of the classical domain; validated strictly inside with margin.
struct PhasePoint {
    FamilyKind kind = FamilyKind::Toeplitz;
    std::vector<cplx> z;  // 1 (disc), N (polydisc) or 4 (Z row-major)

    static PhasePoint disc(cplx z);
    static PhasePoint rdisc(cplx z);
    static PhasePoint polydisc(std::vector<cplx> z);
    static PhasePoint mink(const std::array<cplx, 4>& z_row_major);

    /// Parse "a+bi" / comma-separated list per the family.
    static PhasePoint parse(FamilyKind kind, const std::string& text);

    std::string to_string() const;
};

/// Margin to the boundary of the family's domain (negative when outside).
double domain_margin(const FamilySpec& spec, const PhasePoint& p);
/// Throws DomainError unless the margin is at least 1e-9.
void require_in_domain(const FamilySpec& spec, const PhasePoint& p);

void validate(const FamilySpec& spec, const TruncationScheme& trunc);

/// Unnormalized coherent vector K(p) in the truncation.
///
/// Toeplitz: K_n = z^n (sums start at n = 0, so K(0) = |0> and the kernel is
/// the Szego kernel 1/(1 - conj(z) w)); RDeformed: K_n = z^n / sqrt(prod_{k=1}^n R(q^k));
/// QHW: K_k = prod_i z_i^{k_i} / sqrt([k_i]!_q); Minkowski: Delta^{jm}_{j1j2}(Z).
StateVector coherent_vector(const FamilySpec& spec, const TruncationScheme& trunc,
                            const PhasePoint& p);

/// Coefficient-wise holomorphic derivative d K / d z_mu of the truncated series.
StateVector coherent_vector_derivative(const FamilySpec& spec, const TruncationScheme& trunc,
                                       const PhasePoint& p, int mu);

/// <K(p) | K(q)>; conjugate-symmetric under swap.
cplx kernel(const FamilySpec& spec, const TruncationScheme& trunc, const PhasePoint& p,
            const PhasePoint& q);

/// P(p) = |K><K| / <K|K>
SparseOperator projector(const FamilySpec& spec, const TruncationScheme& trunc,
                         const PhasePoint& p);

/// I(v)(p) = <K(p) | v>, the realization of v as a phase-space function.
cplx symbol_transform(const StateVector& v, const FamilySpec& spec,
                      const TruncationScheme& trunc, const PhasePoint& p);

/// The Minkowski expansion coefficient Delta^{jm}_{j1j2}(Z), log-domain
/// factorials. Spins passed doubled. Throws on inadmissible indices.
cplx minkowski_delta(int lambda, int tj, int m, int tj1, int tj2,
                     const std::array<cplx, 4>& z_row_major);

/// q-integer [n]_q by the recurrence [n+1] = 1 + q [n].
double q_integer(double q, int n);

namespace detail {
/// Monomial table for one Delta: sum of c * z11^e11 z12^e12 z21^e21 z22^e22.
struct MinkMonomials {
    struct Mono {
        int e11, e12, e21, e22;
        double c;
    };
    std::vector<Mono> terms;
    cplx eval(const std::array<cplx, 4>& z) const;
    MinkMonomials derivative(int mu) const;  // d/dz_mu, mu in 0..3 row-major
};
/// Tables for every basis index of the truncation, in ordinal order.
std::vector<MinkMonomials> minkowski_tables(int lambda, const TruncationScheme& trunc);
} // namespace detail

} // namespace qk
