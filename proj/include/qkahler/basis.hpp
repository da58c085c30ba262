#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "qkahler/common.hpp"

namespace qk {

/// Fock level n.
struct MonoIndex {
    int n = 0;
    friend bool operator==(const MonoIndex&, const MonoIndex&) = default;
};

/// Occupation numbers (k_1, ..., k_N).
struct MultiIndex {
    std::vector<int> k;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Minkowski quadruple (j, m, j1, j2); spins stored doubled so half-integers
/// stay exact. Admissible iff tj >= 0, m >= 0, |tj1| <= tj, |tj2| <= tj and
/// tj1, tj2 have the parity of tj.
struct MinkIndex {
    int tj = 0;   // 2j
    int m = 0;
    int tj1 = 0;  // 2*j1
    int tj2 = 0;  // 2*j2
    bool admissible() const {
        return tj >= 0 && m >= 0 && tj1 >= -tj && tj1 <= tj && tj2 >= -tj &&
               tj2 <= tj && (tj - tj1) % 2 == 0 && (tj - tj2) % 2 == 0;
    }
    friend bool operator==(const MinkIndex&, const MinkIndex&) = default;
};

using BasisIndex = std::variant<MonoIndex, MultiIndex, MinkIndex>;

enum class FamilyKind { Toeplitz, RDeformed, QHW, Minkowski };

/// Finite truncation of the separable carrier space, with a deterministic
/// bijection BasisIndex <-> {0, ..., D-1}.
///
/// Ordering: Mono ascending n; Multi lexicographic (first mode most
/// significant); Mink ascending (2j, m, 2j1, 2j2).
class TruncationScheme {
public:
    static TruncationScheme mono(int n_max);
    static TruncationScheme multi(std::vector<int> k_max);
    static TruncationScheme multi_uniform(int modes, int k_max);
    /// Cutoffs 2j <= 2*j_max (pass doubled), m <= m_max.
    static TruncationScheme mink(int tj_max, int m_max);

    FamilyKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int modes() const;  // coordinate generators: 1, N, or 4

    int n_max() const { return n_max_; }
    const std::vector<int>& k_max() const { return k_max_; }
    int tj_max() const { return tj_max_; }
    int m_max() const { return m_max_; }

    std::vector<BasisIndex> enumerate() const;
    int ordinal(const BasisIndex& ix) const;  // -1 when outside the truncation
    BasisIndex index_at(int ordinal) const;

    /// Ordinals at least `depth` levels below every cutoff, in ascending
    /// order. Relation and oracle checks compress onto this subspace to
    /// exclude truncation edge effects.
    std::vector<int> interior(int depth) const;

    friend bool operator==(const TruncationScheme&, const TruncationScheme&) = default;

private:
    FamilyKind kind_ = FamilyKind::Toeplitz;
    int dim_ = 0;
    int n_max_ = 0;
    std::vector<int> k_max_;
    int tj_max_ = 0;
    int m_max_ = 0;
    std::vector<int> mink_block_offset_;  // per 2j
};

} // namespace qk
