#include "qkahler/state.hpp"

#include <algorithm>
#include <cmath>

#include "qkahler/parallel.hpp"

namespace qk {

StateVector StateVector::basis_vector(int dim, int i) {
    StateVector v(dim);
    v[i] = 1.0;
    return v;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

cplx inner(const StateVector& v, const StateVector& w) {
    if (v.dim() != w.dim()) throw DimensionError("inner: dimension mismatch");
    cplx s = 0.0;
    for (int i = 0; i < v.dim(); ++i) s += std::conj(v[i]) * w[i];
    return s;
}

SparseOperator SparseOperator::identity(int dim) {
    SparseOperator a(dim);
    for (int i = 0; i < dim; ++i) a.add(i, i, 1.0);
    return a;
}

void SparseOperator::add(int row, int col, cplx value) {
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
        throw DimensionError("SparseOperator::add: index out of range");
    if (value == cplx(0.0)) return;
    entries_.push_back({row, col, value});
    dirty_ = true;
}

void SparseOperator::consolidate() const {
    if (!dirty_ && !row_ptr_.empty()) return;
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const Entry& e : entries_) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
            merged.back().value += e.value;
        else
            merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Entry& e) { return e.value == cplx(0.0); }),
                 merged.end());
    entries_ = std::move(merged);
    row_ptr_.assign(static_cast<std::size_t>(dim_) + 1, 0);
    for (const Entry& e : entries_) ++row_ptr_[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t r = 0; r < static_cast<std::size_t>(dim_); ++r)
        row_ptr_[r + 1] += row_ptr_[r];
    dirty_ = false;
}

const std::vector<SparseOperator::Entry>& SparseOperator::entries() const {
    consolidate();
    return entries_;
}

cplx SparseOperator::coeff(int row, int col) const {
    consolidate();
    std::size_t lo = row_ptr_[static_cast<std::size_t>(row)];
    std::size_t hi = row_ptr_[static_cast<std::size_t>(row) + 1];
    for (std::size_t i = lo; i < hi; ++i)
        if (entries_[i].col == col) return entries_[i].value;
    return 0.0;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const Entry& e : entries()) m = std::max(m, std::abs(e.value));
    return m;
}

StateVector SparseOperator::apply(const StateVector& x) const {
    if (x.dim() != dim_) throw DimensionError("SparseOperator::apply: dimension mismatch");
    StateVector y(dim_);
    apply(x.amp.data(), y.amp.data());
    return y;
}

void SparseOperator::apply(const cplx* x, cplx* y) const {
    consolidate();
    std::fill(y, y + dim_, cplx(0.0));
    for (const Entry& e : entries_) y[e.row] += e.value * x[e.col];
}

void SparseOperator::apply_adjoint(const cplx* x, cplx* y) const {
    consolidate();
    std::fill(y, y + dim_, cplx(0.0));
    for (const Entry& e : entries_) y[e.col] += std::conj(e.value) * x[e.row];
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator a(dim_);
    for (const Entry& e : entries()) a.add(e.col, e.row, std::conj(e.value));
    a.consolidate();
    return a;
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
    if (dim_ != rhs.dim_) throw DimensionError("SparseOperator::*: dimension mismatch");
    consolidate();
    rhs.consolidate();
    SparseOperator out(dim_);
    // (this * rhs)[r, c] = sum_k this[r, k] rhs[k, c]
    std::vector<cplx> rowacc(static_cast<std::size_t>(dim_), cplx(0.0));
    std::vector<int> touched;
    for (int r = 0; r < dim_; ++r) {
        touched.clear();
        for (std::size_t i = row_ptr_[static_cast<std::size_t>(r)];
             i < row_ptr_[static_cast<std::size_t>(r) + 1]; ++i) {
            const Entry& e = entries_[i];
            for (std::size_t jj = rhs.row_ptr_[static_cast<std::size_t>(e.col)];
                 jj < rhs.row_ptr_[static_cast<std::size_t>(e.col) + 1]; ++jj) {
                const Entry& f = rhs.entries_[jj];
                if (rowacc[static_cast<std::size_t>(f.col)] == cplx(0.0)) touched.push_back(f.col);
                rowacc[static_cast<std::size_t>(f.col)] += e.value * f.value;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int c : touched) {
            if (rowacc[static_cast<std::size_t>(c)] != cplx(0.0))
                out.add(r, c, rowacc[static_cast<std::size_t>(c)]);
            rowacc[static_cast<std::size_t>(c)] = 0.0;
        }
    }
    out.consolidate();
    return out;
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
    if (dim_ != rhs.dim_) throw DimensionError("SparseOperator::+: dimension mismatch");
    SparseOperator out(dim_);
    for (const Entry& e : entries()) out.add(e.row, e.col, e.value);
    for (const Entry& e : rhs.entries()) out.add(e.row, e.col, e.value);
    out.consolidate();
    return out;
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
    return *this + rhs.scaled(-1.0);
}

SparseOperator SparseOperator::scaled(cplx factor) const {
    SparseOperator out(dim_);
    for (const Entry& e : entries()) out.add(e.row, e.col, factor * e.value);
    out.consolidate();
    return out;
}

SparseOperator SparseOperator::compressed(const std::vector<int>& keep) const {
    std::vector<int> remap(static_cast<std::size_t>(dim_), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    SparseOperator out(static_cast<int>(keep.size()));
    for (const Entry& e : entries()) {
        int r = remap[static_cast<std::size_t>(e.row)];
        int c = remap[static_cast<std::size_t>(e.col)];
        if (r >= 0 && c >= 0) out.add(r, c, e.value);
    }
    out.consolidate();
    return out;
}

Eigen::MatrixXcd SparseOperator::dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (const Entry& e : entries()) m(e.row, e.col) += e.value;
    return m;
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXcd& m, double drop_below) {
    if (m.rows() != m.cols()) throw DimensionError("from_dense: matrix not square");
    SparseOperator a(static_cast<int>(m.rows()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > drop_below) a.add(r, c, m(r, c));
    a.consolidate();
    return a;
}

namespace {

// One power-iteration run on the Hermitian PSD matrix B from a given start.
// Rayleigh quotients are monotone for PSD B; convergence compares checkpoints
// k and 2k, which certifies the tail for 1/k-type decay where the plain
// per-iteration test stalls early.
struct PowerResult {
    double theta = 0.0;     // Rayleigh quotient estimate of lambda_max(B)
    bool converged = false;
    std::vector<cplx> x;
};

PowerResult power_run(const SparseOperator& b, std::vector<cplx> x, double tol,
                      long long budget) {
    const int d = b.dim();
    PowerResult res;
    double xn = 0.0;
    for (const cplx& c : x) xn += std::norm(c);
    xn = std::sqrt(xn);
    if (xn == 0.0) return res;
    for (cplx& c : x) c /= xn;

    std::vector<cplx> y(static_cast<std::size_t>(d));
    double theta_checkpoint = -1.0;
    long long next_checkpoint = 1;
    double theta = 0.0;
    for (long long k = 1; k <= budget; ++k) {
        b.apply(x.data(), y.data());
        cplx dot = 0.0;
        double yn = 0.0;
        for (int i = 0; i < d; ++i) {
            dot += std::conj(x[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
            yn += std::norm(y[static_cast<std::size_t>(i)]);
        }
        theta = dot.real();
        yn = std::sqrt(yn);
        if (yn == 0.0) {  // start annihilated; caller retries elsewhere
            res.theta = 0.0;
            res.converged = false;
            res.x = std::move(x);
            return res;
        }
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / yn;
        if (k == next_checkpoint) {
            if (theta_checkpoint >= 0.0 &&
                theta - theta_checkpoint <= 0.5 * tol * std::max(theta, 1e-300)) {
                res.theta = theta;
                res.converged = true;
                res.x = std::move(x);
                return res;
            }
            theta_checkpoint = theta;
            next_checkpoint *= 2;
        }
    }
    res.theta = theta;
    res.converged = false;
    res.x = std::move(x);
    return res;
}

} // namespace

double operator_norm(const SparseOperator& a, double tol) {
    if (tol <= 0.0) throw Error("operator_norm: tol must be positive");
    const int d = a.dim();
    if (a.nnz() == 0) return 0.0;

    SparseOperator b = a.adjoint() * a;
    if (b.nnz() == 0) return 0.0;

    long long budget = std::max<long long>(10LL * d, std::min<long long>(
        static_cast<long long>(0.1 / tol), 8'000'000LL));

    std::vector<cplx> ones(static_cast<std::size_t>(d), cplx(1.0));
    PowerResult result = power_run(b, ones, tol, budget);

    // Deterministic probe from a hashed start guards against the all-ones
    // vector sitting in an invariant subspace below the top eigenvalue.
    std::vector<cplx> hashed(static_cast<std::size_t>(d));
    {
        std::uint64_t z = 0x243F6A8885A308D3ull;
        for (int i = 0; i < d; ++i) {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull + static_cast<std::uint64_t>(i) + 1;
            hashed[static_cast<std::size_t>(i)] =
                cplx(1.0 + static_cast<double>(z >> 40) * 0x1.0p-24,
                     static_cast<double>((z >> 16) & 0xFFFFFF) * 0x1.0p-24);
        }
    }
    PowerResult probe = power_run(b, hashed, tol, 128);
    if (probe.theta > result.theta * (1.0 + tol) || result.x.empty()) {
        result = power_run(b, probe.x, tol, budget);
    }
    if (result.x.empty() || result.theta == 0.0) {
        // both starts annihilated: restart from the basis vector with the
        // largest diagonal of B (nonzero since B != 0)
        int imax = 0;
        double dmax = -1.0;
        for (const SparseOperator::Entry& e : b.entries())
            if (e.row == e.col && e.value.real() > dmax) {
                dmax = e.value.real();
                imax = e.row;
            }
        std::vector<cplx> ei(static_cast<std::size_t>(d), cplx(0.0));
        ei[static_cast<std::size_t>(imax)] = 1.0;
        result = power_run(b, ei, tol, budget);
    }
    if (!result.converged) {
        double rs = 0.0;
        if (!result.x.empty()) {
            std::vector<cplx> y(static_cast<std::size_t>(d));
            b.apply(result.x.data(), y.data());
            for (int i = 0; i < d; ++i)
                rs += std::norm(y[static_cast<std::size_t>(i)] -
                                result.theta * result.x[static_cast<std::size_t>(i)]);
        }
        throw ConvergenceError("operator_norm: power iteration did not converge",
                               std::sqrt(std::max(result.theta, 0.0)), std::sqrt(rs));
    }
    return std::sqrt(std::max(result.theta, 0.0));
}

Eigen::MatrixXcd gram_matrix(const std::vector<StateVector>& vs) {
    const int n = static_cast<int>(vs.size());
    if (n == 0) return Eigen::MatrixXcd(0, 0);
    const int d = vs[0].dim();
    for (const StateVector& v : vs)
        if (v.dim() != d) throw DimensionError("gram_matrix: dimension mismatch");
    Eigen::MatrixXcd g(n, n);
    parallel_for(static_cast<std::ptrdiff_t>(n) * n, [&](std::ptrdiff_t e) {
        int i = static_cast<int>(e / n);
        int j = static_cast<int>(e % n);
        g(i, j) = inner(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
    });
    return g;
}

} // namespace qk
