#include "qkahler/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace qk {

FamilySpec FamilySpec::toeplitz() {
    FamilySpec s;
    s.kind = FamilyKind::Toeplitz;
    return s;
}

FamilySpec FamilySpec::rdeformed(double q, Polynomial R) {
    FamilySpec s;
    s.kind = FamilyKind::RDeformed;
    s.q = q;
    s.R = std::move(R);
    return s;
}

FamilySpec FamilySpec::rdeformed_qhw(double q) {
    return rdeformed(q, Polynomial{{1.0 / (1.0 - q), -1.0 / (1.0 - q)}});
}

FamilySpec FamilySpec::qhw(double q, int modes) {
    FamilySpec s;
    s.kind = FamilyKind::QHW;
    s.q = q;
    s.modes = modes;
    return s;
}

FamilySpec FamilySpec::minkowski(int lambda) {
    FamilySpec s;
    s.kind = FamilyKind::Minkowski;
    s.lambda = lambda;
    return s;
}

double FamilySpec::domain_radius() const {
    switch (kind) {
        case FamilyKind::Toeplitz: return 1.0;
        case FamilyKind::RDeformed: return std::sqrt(R(0.0));
        case FamilyKind::QHW: return 1.0 / std::sqrt(1.0 - q);
        case FamilyKind::Minkowski: return 1.0;  // spectral bound on Z
    }
    return 1.0;
}

PhasePoint PhasePoint::disc(cplx z) { return PhasePoint{FamilyKind::Toeplitz, {z}}; }
PhasePoint PhasePoint::rdisc(cplx z) { return PhasePoint{FamilyKind::RDeformed, {z}}; }
PhasePoint PhasePoint::polydisc(std::vector<cplx> z) {
    return PhasePoint{FamilyKind::QHW, std::move(z)};
}
PhasePoint PhasePoint::mink(const std::array<cplx, 4>& z) {
    return PhasePoint{FamilyKind::Minkowski, {z[0], z[1], z[2], z[3]}};
}

namespace {

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty complex literal", 0);
    // split at the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
            split = i;
    }
    auto parse_part = [](std::string part, std::size_t at) -> double {
        if (part.empty() || part == "+") part = "1";
        else if (part == "-") part = "-1";
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + part + "'", at);
        }
        if (used != part.size()) throw ParseError("bad number '" + part + "'", at);
        return v;
    };
    bool tail_imag = s.back() == 'i';
    if (split == std::string::npos) {
        if (tail_imag) return cplx(0.0, parse_part(s.substr(0, s.size() - 1), 0));
        return cplx(parse_part(s, 0), 0.0);
    }
    if (!tail_imag) throw ParseError("expected trailing 'i' in complex literal", s.size() - 1);
    double re = parse_part(s.substr(0, split), 0);
    double im = parse_part(s.substr(split, s.size() - split - 1), split);
    return cplx(re, im);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(cplx z) {
    std::string s = format_double(z.real());
    s += z.imag() < 0 ? "-" : "+";
    s += format_double(std::abs(z.imag()));
    s += "i";
    return s;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

PhasePoint PhasePoint::parse(FamilyKind kind, const std::string& text) {
    PhasePoint p;
    p.kind = kind;
    if (kind == FamilyKind::Toeplitz || kind == FamilyKind::RDeformed) {
        p.z = {parse_complex(text)};
        return p;
    }
    std::vector<std::string> parts = split_commas(text);
    if (kind == FamilyKind::Minkowski && parts.size() != 4)
        throw ParseError("Minkowski point needs four comma-separated entries", 0);
    for (const std::string& part : parts) p.z.push_back(parse_complex(part));
    return p;
}

std::string PhasePoint::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i) s += ",";
        s += format_complex(z[i]);
    }
    return s;
}

double domain_margin(const FamilySpec& spec, const PhasePoint& p) {
    if (p.kind != spec.kind) throw DomainError("phase point kind does not match the family");
    switch (spec.kind) {
        case FamilyKind::Toeplitz:
            return 1.0 - std::abs(p.z.at(0));
        case FamilyKind::RDeformed:
            return std::sqrt(spec.R(0.0)) - std::abs(p.z.at(0));
        case FamilyKind::QHW: {
            if (static_cast<int>(p.z.size()) != spec.modes)
                throw DomainError("polydisc point has wrong number of coordinates");
            double radius = spec.domain_radius();
            double m = radius;
            for (const cplx& zi : p.z) m = std::min(m, radius - std::abs(zi));
            return m;
        }
        case FamilyKind::Minkowski: {
            if (p.z.size() != 4) throw DomainError("Minkowski point needs a 2x2 matrix");
            // min eigenvalue of E - Z^dag Z for 2x2 Hermitian, closed form
            const cplx z11 = p.z[0], z12 = p.z[1], z21 = p.z[2], z22 = p.z[3];
            double h11 = 1.0 - (std::norm(z11) + std::norm(z21));
            double h22 = 1.0 - (std::norm(z12) + std::norm(z22));
            cplx h12 = -(std::conj(z11) * z12 + std::conj(z21) * z22);
            double tr = h11 + h22;
            double disc = std::sqrt(std::max(0.0, 0.25 * (h11 - h22) * (h11 - h22) + std::norm(h12)));
            return 0.5 * tr - disc;
        }
    }
    return -1.0;
}

void require_in_domain(const FamilySpec& spec, const PhasePoint& p) {
    double m = domain_margin(spec, p);
    if (!(m >= 1e-9))
        throw DomainError("phase point outside the classical domain (margin " +
                          std::to_string(m) + ")");
}

void validate(const FamilySpec& spec, const TruncationScheme& trunc) {
    switch (spec.kind) {
        case FamilyKind::Toeplitz:
            if (trunc.kind() != FamilyKind::Toeplitz && trunc.kind() != FamilyKind::RDeformed)
                throw Error("Toeplitz family needs a mono truncation");
            break;
        case FamilyKind::RDeformed: {
            if (trunc.kind() != FamilyKind::Toeplitz && trunc.kind() != FamilyKind::RDeformed)
                throw Error("RDeformed family needs a mono truncation");
            if (!(spec.q > 0.0 && spec.q < 1.0)) throw Error("RDeformed needs q in (0,1)");
            double scale = 0.0;
            for (double c : spec.R.coef) scale = std::max(scale, std::abs(c));
            if (std::abs(spec.R(1.0)) > 1e-12 * std::max(1.0, scale))
                throw Error("RDeformed needs R(1) = 0");
            double x = 1.0;
            for (int n = 1; n <= trunc.n_max(); ++n) {
                x *= spec.q;
                if (!(spec.R(x) > 0.0))
                    throw Error("RDeformed needs R(q^n) > 0 up to the truncation (fails at n=" +
                                std::to_string(n) + ")");
            }
            break;
        }
        case FamilyKind::QHW:
            if (trunc.kind() != FamilyKind::QHW) throw Error("QHW family needs a multi truncation");
            if (!(spec.q > 0.0 && spec.q < 1.0)) throw Error("QHW needs q in (0,1)");
            if (trunc.modes() != spec.modes) throw Error("QHW truncation modes mismatch");
            break;
        case FamilyKind::Minkowski:
            if (trunc.kind() != FamilyKind::Minkowski)
                throw Error("Minkowski family needs a mink truncation");
            if (spec.lambda < 4) throw Error("Minkowski needs integer lambda >= 4");
            break;
    }
}

double q_integer(double q, int n) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v = 1.0 + q * v;
    return v;
}

// ---------------------------------------------------------------------------
// Minkowski Delta tables
// ---------------------------------------------------------------------------

namespace detail {

cplx MinkMonomials::eval(const std::array<cplx, 4>& z) const {
    cplx acc = 0.0;
    for (const Mono& t : terms) {
        cplx v = t.c;
        for (int e = 0; e < t.e11; ++e) v *= z[0];
        for (int e = 0; e < t.e12; ++e) v *= z[1];
        for (int e = 0; e < t.e21; ++e) v *= z[2];
        for (int e = 0; e < t.e22; ++e) v *= z[3];
        acc += v;
    }
    return acc;
}

MinkMonomials MinkMonomials::derivative(int mu) const {
    MinkMonomials d;
    for (const Mono& t : terms) {
        Mono m = t;
        int* e = mu == 0 ? &m.e11 : mu == 1 ? &m.e12 : mu == 2 ? &m.e21 : &m.e22;
        if (*e == 0) continue;
        m.c *= *e;
        --*e;
        d.terms.push_back(m);
    }
    return d;
}

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// log N^lambda_{jm}; normalization of the Delta expansion, fixed so that the
// amplitudes reproduce det(E - Z^dag W)^(-lambda)
double log_norm_constant(int lambda, int tj, int m) {
    double L = lambda;
    return std::log(L - 1) + 2.0 * std::log(L - 2) + std::log(L - 3) + std::lgamma(L - 2) +
           std::lgamma(L - 3) + std::lgamma(m + 1.0) + std::lgamma(m + tj + 2.0) -
           std::log(tj + 1.0) - std::lgamma(m + L - 1.0) - std::lgamma(m + tj + L);
}

MinkMonomials build_delta(int lambda, const MinkIndex& ix) {
    const int tj = ix.tj, m = ix.m, tj1 = ix.tj1, tj2 = ix.tj2;
    const int jpj1 = (tj + tj1) / 2, jmj1 = (tj - tj1) / 2;
    const int jpj2 = (tj + tj2) / 2, jmj2 = (tj - tj2) / 2;
    const int smin = std::max(0, (tj1 + tj2) / 2);
    const int smax = std::min(jpj1, jpj2);
    const double pref =
        std::exp(0.5 * (std::lgamma(jpj1 + 1.0) + std::lgamma(jmj1 + 1.0) -
                        std::lgamma(jpj2 + 1.0) - std::lgamma(jmj2 + 1.0)) -
                 0.5 * log_norm_constant(lambda, tj, m));
    // exponents depend on (S, r) only through e11 = S + r; merge those terms
    std::map<int, double> by_e11;
    for (int S = smin; S <= smax; ++S) {
        double bs = binom(jpj2, S) * binom(jmj2, S - (tj1 + tj2) / 2);
        if (bs == 0.0) continue;
        for (int r = 0; r <= m; ++r) {
            double c = bs * binom(m, r) * ((m - r) % 2 == 0 ? 1.0 : -1.0);
            by_e11[S + r] += c;
        }
    }
    MinkMonomials out;
    for (const auto& [e11, c] : by_e11) {
        if (c == 0.0) continue;
        MinkMonomials::Mono t;
        t.e11 = e11;
        t.e12 = jpj1 + m - e11;
        t.e21 = jpj2 + m - e11;
        t.e22 = e11 - (tj1 + tj2) / 2;
        t.c = pref * c;
        out.terms.push_back(t);
    }
    return out;
}

} // namespace

std::vector<MinkMonomials> minkowski_tables(int lambda, const TruncationScheme& trunc) {
    struct Key {
        int lambda, tj_max, m_max;
        bool operator<(const Key& o) const {
            return std::tie(lambda, tj_max, m_max) < std::tie(o.lambda, o.tj_max, o.m_max);
        }
    };
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const std::vector<MinkMonomials>>> cache;
    Key key{lambda, trunc.tj_max(), trunc.m_max()};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    std::vector<MinkMonomials> tables;
    tables.reserve(static_cast<std::size_t>(trunc.dim()));
    for (int i = 0; i < trunc.dim(); ++i)
        tables.push_back(build_delta(lambda, std::get<MinkIndex>(trunc.index_at(i))));
    auto shared = std::make_shared<const std::vector<MinkMonomials>>(std::move(tables));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, shared);
    return *shared;
}

} // namespace detail

cplx minkowski_delta(int lambda, int tj, int m, int tj1, int tj2,
                     const std::array<cplx, 4>& z) {
    if (lambda < 4) throw Error("minkowski_delta needs integer lambda >= 4");
    MinkIndex ix{tj, m, tj1, tj2};
    if (!ix.admissible()) throw Error("minkowski_delta: inadmissible index");
    return detail::build_delta(lambda, ix).eval(z);
}

// ---------------------------------------------------------------------------
// Coherent vectors
// ---------------------------------------------------------------------------

namespace {

// per-mode amplitude ladders amp[k] = z^k / sqrt(w_1 ... w_k)
std::vector<cplx> mode_ladder(cplx z, int k_max, const std::vector<double>& w) {
    std::vector<cplx> amp(static_cast<std::size_t>(k_max) + 1);
    amp[0] = 1.0;
    for (int k = 1; k <= k_max; ++k)
        amp[static_cast<std::size_t>(k)] =
            amp[static_cast<std::size_t>(k) - 1] * z / std::sqrt(w[static_cast<std::size_t>(k) - 1]);
    return amp;
}

std::vector<double> toeplitz_weights(int n_max) {
    return std::vector<double>(static_cast<std::size_t>(n_max), 1.0);
}

std::vector<double> rdef_weights(const FamilySpec& spec, int n_max) {
    std::vector<double> w(static_cast<std::size_t>(n_max));
    double x = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        x *= spec.q;
        double v = spec.R(x);
        if (!(v > 0.0)) throw DomainError("R(q^n) <= 0 inside the truncation");
        w[static_cast<std::size_t>(n) - 1] = v;
    }
    return w;
}

std::vector<double> qhw_weights(double q, int k_max) {
    std::vector<double> w(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) w[static_cast<std::size_t>(k) - 1] = q_integer(q, k);
    return w;
}

} // namespace

StateVector coherent_vector(const FamilySpec& spec, const TruncationScheme& trunc,
                            const PhasePoint& p) {
    validate(spec, trunc);
    require_in_domain(spec, p);
    StateVector v(trunc.dim());
    switch (spec.kind) {
        case FamilyKind::Toeplitz: {
            auto amp = mode_ladder(p.z[0], trunc.n_max(), toeplitz_weights(trunc.n_max()));
            for (int n = 0; n <= trunc.n_max(); ++n) v[n] = amp[static_cast<std::size_t>(n)];
            break;
        }
        case FamilyKind::RDeformed: {
            auto amp = mode_ladder(p.z[0], trunc.n_max(), rdef_weights(spec, trunc.n_max()));
            for (int n = 0; n <= trunc.n_max(); ++n) v[n] = amp[static_cast<std::size_t>(n)];
            break;
        }
        case FamilyKind::QHW: {
            std::vector<std::vector<cplx>> amps;
            for (int i = 0; i < spec.modes; ++i)
                amps.push_back(mode_ladder(p.z[static_cast<std::size_t>(i)], trunc.k_max()[static_cast<std::size_t>(i)],
                                           qhw_weights(spec.q, trunc.k_max()[static_cast<std::size_t>(i)])));
            for (int o = 0; o < trunc.dim(); ++o) {
                const auto& k = std::get<MultiIndex>(trunc.index_at(o)).k;
                cplx a = 1.0;
                for (int i = 0; i < spec.modes; ++i)
                    a *= amps[static_cast<std::size_t>(i)][static_cast<std::size_t>(k[static_cast<std::size_t>(i)])];
                v[o] = a;
            }
            break;
        }
        case FamilyKind::Minkowski: {
            const auto& tables = detail::minkowski_tables(spec.lambda, trunc);
            std::array<cplx, 4> z{p.z[0], p.z[1], p.z[2], p.z[3]};
            for (int o = 0; o < trunc.dim(); ++o) v[o] = tables[static_cast<std::size_t>(o)].eval(z);
            break;
        }
    }
    return v;
}

StateVector coherent_vector_derivative(const FamilySpec& spec, const TruncationScheme& trunc,
                                       const PhasePoint& p, int mu) {
    validate(spec, trunc);
    require_in_domain(spec, p);
    if (mu < 0 || mu >= trunc.modes()) throw Error("derivative mode out of range");
    StateVector v(trunc.dim());
    switch (spec.kind) {
        case FamilyKind::Toeplitz:
        case FamilyKind::RDeformed: {
            auto w = spec.kind == FamilyKind::Toeplitz ? toeplitz_weights(trunc.n_max())
                                                       : rdef_weights(spec, trunc.n_max());
            // d/dz [z^n / sqrt(w!)] = n z^(n-1) / sqrt(w!)
            std::vector<cplx> damp(static_cast<std::size_t>(trunc.n_max()) + 1, 0.0);
            std::vector<cplx> pow(static_cast<std::size_t>(trunc.n_max()) + 1);
            pow[0] = 1.0;
            double sq = 1.0;
            for (int n = 1; n <= trunc.n_max(); ++n) {
                sq *= std::sqrt(w[static_cast<std::size_t>(n) - 1]);
                pow[static_cast<std::size_t>(n)] = pow[static_cast<std::size_t>(n) - 1] * p.z[0];
                damp[static_cast<std::size_t>(n)] =
                    static_cast<double>(n) * pow[static_cast<std::size_t>(n) - 1] / sq;
            }
            for (int n = 0; n <= trunc.n_max(); ++n) v[n] = damp[static_cast<std::size_t>(n)];
            break;
        }
        case FamilyKind::QHW: {
            std::vector<std::vector<cplx>> amps, damps;
            for (int i = 0; i < spec.modes; ++i) {
                int km = trunc.k_max()[static_cast<std::size_t>(i)];
                auto w = qhw_weights(spec.q, km);
                amps.push_back(mode_ladder(p.z[static_cast<std::size_t>(i)], km, w));
                std::vector<cplx> dz(static_cast<std::size_t>(km) + 1, 0.0);
                std::vector<cplx> pw(static_cast<std::size_t>(km) + 1);
                pw[0] = 1.0;
                double sq = 1.0;
                for (int k = 1; k <= km; ++k) {
                    sq *= std::sqrt(w[static_cast<std::size_t>(k) - 1]);
                    pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k) - 1] * p.z[static_cast<std::size_t>(i)];
                    dz[static_cast<std::size_t>(k)] = static_cast<double>(k) * pw[static_cast<std::size_t>(k) - 1] / sq;
                }
                damps.push_back(std::move(dz));
            }
            for (int o = 0; o < trunc.dim(); ++o) {
                const auto& k = std::get<MultiIndex>(trunc.index_at(o)).k;
                cplx a = 1.0;
                for (int i = 0; i < spec.modes; ++i) {
                    const auto& src = i == mu ? damps[static_cast<std::size_t>(i)] : amps[static_cast<std::size_t>(i)];
                    a *= src[static_cast<std::size_t>(k[static_cast<std::size_t>(i)])];
                }
                v[o] = a;
            }
            break;
        }
        case FamilyKind::Minkowski: {
            const auto& tables = detail::minkowski_tables(spec.lambda, trunc);
            std::array<cplx, 4> z{p.z[0], p.z[1], p.z[2], p.z[3]};
            for (int o = 0; o < trunc.dim(); ++o)
                v[o] = tables[static_cast<std::size_t>(o)].derivative(mu).eval(z);
            break;
        }
    }
    return v;
}

cplx kernel(const FamilySpec& spec, const TruncationScheme& trunc, const PhasePoint& p,
            const PhasePoint& q) {
    return inner(coherent_vector(spec, trunc, p), coherent_vector(spec, trunc, q));
}

SparseOperator projector(const FamilySpec& spec, const TruncationScheme& trunc,
                         const PhasePoint& p) {
    StateVector k = coherent_vector(spec, trunc, p);
    double n2 = 0.0;
    for (const cplx& a : k.amp) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw DomainError("projector: vanishing self-kernel");
    SparseOperator out(trunc.dim());
    for (int r = 0; r < trunc.dim(); ++r) {
        if (k[r] == cplx(0.0)) continue;
        for (int c = 0; c < trunc.dim(); ++c) {
            cplx v = k[r] * std::conj(k[c]) / n2;
            if (v != cplx(0.0)) out.add(r, c, v);
        }
    }
    return out;
}

cplx symbol_transform(const StateVector& v, const FamilySpec& spec,
                      const TruncationScheme& trunc, const PhasePoint& p) {
    if (v.dim() != trunc.dim()) throw DimensionError("symbol_transform: dimension mismatch");
    return inner(coherent_vector(spec, trunc, p), v);
}

} // namespace qk
