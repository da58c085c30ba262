#include "qkahler/basis.hpp"

namespace qk {

TruncationScheme TruncationScheme::mono(int n_max) {
    if (n_max < 0) throw Error("mono truncation needs n_max >= 0");
    TruncationScheme t;
    t.kind_ = FamilyKind::Toeplitz;
    t.n_max_ = n_max;
    t.dim_ = n_max + 1;
    return t;
}

TruncationScheme TruncationScheme::multi(std::vector<int> k_max) {
    if (k_max.empty()) throw Error("multi truncation needs at least one mode");
    TruncationScheme t;
    t.kind_ = FamilyKind::QHW;
    t.k_max_ = std::move(k_max);
    long long d = 1;
    for (int k : t.k_max_) {
        if (k < 0) throw Error("multi truncation needs k_max >= 0");
        d *= k + 1;
        if (d > 1 << 26) throw Error("multi truncation too large");
    }
    t.dim_ = static_cast<int>(d);
    return t;
}

TruncationScheme TruncationScheme::multi_uniform(int modes, int k_max) {
    return multi(std::vector<int>(static_cast<std::size_t>(modes), k_max));
}

TruncationScheme TruncationScheme::mink(int tj_max, int m_max) {
    if (tj_max < 0 || m_max < 0) throw Error("mink truncation needs nonnegative cutoffs");
    TruncationScheme t;
    t.kind_ = FamilyKind::Minkowski;
    t.tj_max_ = tj_max;
    t.m_max_ = m_max;
    t.mink_block_offset_.resize(static_cast<std::size_t>(tj_max) + 2, 0);
    int off = 0;
    for (int tj = 0; tj <= tj_max; ++tj) {
        t.mink_block_offset_[static_cast<std::size_t>(tj)] = off;
        off += (tj + 1) * (tj + 1) * (m_max + 1);
    }
    t.mink_block_offset_.back() = off;
    t.dim_ = off;  // D = sum (2j+1)^2 (m_max+1)
    return t;
}

int TruncationScheme::modes() const {
    switch (kind_) {
        case FamilyKind::Toeplitz:
        case FamilyKind::RDeformed: return 1;
        case FamilyKind::QHW: return static_cast<int>(k_max_.size());
        case FamilyKind::Minkowski: return 4;
    }
    return 1;
}

std::vector<BasisIndex> TruncationScheme::enumerate() const {
    std::vector<BasisIndex> out;
    out.reserve(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) out.push_back(index_at(i));
    return out;
}

int TruncationScheme::ordinal(const BasisIndex& ix) const {
    switch (kind_) {
        case FamilyKind::Toeplitz:
        case FamilyKind::RDeformed: {
            const auto* p = std::get_if<MonoIndex>(&ix);
            if (!p || p->n < 0 || p->n > n_max_) return -1;
            return p->n;
        }
        case FamilyKind::QHW: {
            const auto* p = std::get_if<MultiIndex>(&ix);
            if (!p || p->k.size() != k_max_.size()) return -1;
            long long o = 0;
            for (std::size_t i = 0; i < k_max_.size(); ++i) {
                int ki = p->k[i];
                if (ki < 0 || ki > k_max_[i]) return -1;
                o = o * (k_max_[i] + 1) + ki;
            }
            return static_cast<int>(o);
        }
        case FamilyKind::Minkowski: {
            const auto* p = std::get_if<MinkIndex>(&ix);
            if (!p || !p->admissible() || p->tj > tj_max_ || p->m > m_max_) return -1;
            int w = p->tj + 1;
            int o = mink_block_offset_[static_cast<std::size_t>(p->tj)];
            o += p->m * w * w;
            o += ((p->tj1 + p->tj) / 2) * w;
            o += (p->tj2 + p->tj) / 2;
            return o;
        }
    }
    return -1;
}

BasisIndex TruncationScheme::index_at(int ordinal) const {
    if (ordinal < 0 || ordinal >= dim_) throw Error("ordinal out of range");
    switch (kind_) {
        case FamilyKind::Toeplitz:
        case FamilyKind::RDeformed: return MonoIndex{ordinal};
        case FamilyKind::QHW: {
            std::vector<int> k(k_max_.size(), 0);
            int rem = ordinal;
            for (std::size_t i = k_max_.size(); i-- > 0;) {
                k[i] = rem % (k_max_[i] + 1);
                rem /= k_max_[i] + 1;
            }
            return MultiIndex{std::move(k)};
        }
        case FamilyKind::Minkowski: {
            int tj = 0;
            while (ordinal >= mink_block_offset_[static_cast<std::size_t>(tj) + 1]) ++tj;
            int rem = ordinal - mink_block_offset_[static_cast<std::size_t>(tj)];
            int w = tj + 1;
            int m = rem / (w * w);
            rem %= w * w;
            int tj1 = 2 * (rem / w) - tj;
            int tj2 = 2 * (rem % w) - tj;
            return MinkIndex{tj, m, tj1, tj2};
        }
    }
    throw Error("unreachable");
}

std::vector<int> TruncationScheme::interior(int depth) const {
    std::vector<int> keep;
    for (int i = 0; i < dim_; ++i) {
        const BasisIndex ix = index_at(i);
        bool ok = true;
        switch (kind_) {
            case FamilyKind::Toeplitz:
            case FamilyKind::RDeformed:
                ok = std::get<MonoIndex>(ix).n <= n_max_ - depth;
                break;
            case FamilyKind::QHW: {
                const auto& k = std::get<MultiIndex>(ix).k;
                for (std::size_t j = 0; j < k.size(); ++j)
                    ok = ok && k[j] <= k_max_[j] - depth;
                break;
            }
            case FamilyKind::Minkowski: {
                const auto& mk = std::get<MinkIndex>(ix);
                ok = mk.tj <= tj_max_ - depth && mk.m <= m_max_ - depth;
                break;
            }
        }
        if (ok) keep.push_back(i);
    }
    return keep;
}

} // namespace qk
