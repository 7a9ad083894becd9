#pragma once

// Demand matrices, permutation (matching) representations and the synthetic
// matrix families used throughout the scheduling code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdcn {

/// One-to-one port matching, stored as a row -> column map.
/// map[k] is the column holding the single 1 of row k.
struct Permutation {
    std::vector<int> map;

    Permutation() = default;
    explicit Permutation(std::vector<int> m) : map(std::move(m)) {}

    int n() const { return static_cast<int>(map.size()); }
    int operator[](int row) const { return map[row]; }

    bool is_bijection() const {
        std::vector<char> seen(map.size(), 0);
        for (int c : map) {
            if (c < 0 || c >= n() || seen[c]) return false;
            seen[c] = 1;
        }
        return true;
    }

    /// True when the matching is a derangement: a valid configuration never
    /// connects a node to itself.
    bool is_derangement() const {
        if (!is_bijection()) return false;
        for (int k = 0; k < n(); ++k)
            if (map[k] == k) return false;
        return true;
    }

    bool operator==(const Permutation&) const = default;
};

/// Cyclic shift by `s`: row k connects to column (k+s) mod n.
/// For 1 <= s <= n-1 this is always a derangement.
inline Permutation cyclic_shift(int n, int s) {
    std::vector<int> m(n);
    for (int k = 0; k < n; ++k) m[k] = (k + s) % n;
    return Permutation(std::move(m));
}

/// Square nonnegative demand matrix with a structurally zero diagonal.
/// Values are in bits, normalized so that a saturated matrix has unit row
/// sums when the line rate is 1.
class DemandMatrix {
public:
    DemandMatrix() = default;
    explicit DemandMatrix(int n) : n_(n), cells_(static_cast<size_t>(n) * n, 0.0) {
        if (n < 2) throw std::invalid_argument("DemandMatrix: n must be >= 2");
    }

    int n() const { return n_; }

    double& at(int i, int j) { return cells_[static_cast<size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return at(i, j); }

    const std::vector<double>& data() const { return cells_; }

    void add(int i, int j, double w) { at(i, j) += w; }

    double row_sum(int i) const {
        double s = 0;
        for (int j = 0; j < n_; ++j) s += at(i, j);
        return s;
    }
    double col_sum(int j) const {
        double s = 0;
        for (int i = 0; i < n_; ++i) s += at(i, j);
        return s;
    }

    DemandMatrix& operator+=(const DemandMatrix& o) {
        for (size_t k = 0; k < cells_.size(); ++k) cells_[k] += o.cells_[k];
        return *this;
    }
    DemandMatrix& operator-=(const DemandMatrix& o) {
        for (size_t k = 0; k < cells_.size(); ++k) cells_[k] -= o.cells_[k];
        return *this;
    }
    DemandMatrix& operator*=(double a) {
        for (double& c : cells_) c *= a;
        return *this;
    }

    bool operator==(const DemandMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<double> cells_;
};

inline double weight(const DemandMatrix& M) {
    const auto& d = M.data();
    return std::accumulate(d.begin(), d.end(), 0.0);
}

inline double max_entry(const DemandMatrix& M) {
    const auto& d = M.data();
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

inline double frobenius(const DemandMatrix& M) {
    double s = 0;
    for (double c : M.data()) s += c * c;
    return std::sqrt(s);
}

inline double frobenius_diff(const DemandMatrix& A, const DemandMatrix& B) {
    double s = 0;
    for (size_t k = 0; k < A.data().size(); ++k) {
        double d = A.data()[k] - B.data()[k];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Default absolute tolerance on row/column sums.
inline constexpr double kRowSumTol = 1e-9;

/// True iff every row and column sum agrees with a common value lambda
/// within tau. A saturated matrix has lambda = 1; scaled inputs are allowed.
inline bool is_doubly_stochastic(const DemandMatrix& M, double tau = kRowSumTol) {
    const int n = M.n();
    const double lambda = weight(M) / n;
    for (int i = 0; i < n; ++i) {
        if (std::abs(M.row_sum(i) - lambda) > tau) return false;
        if (std::abs(M.col_sum(i) - lambda) > tau) return false;
    }
    return true;
}

inline DemandMatrix from_permutation(const Permutation& p, double scale = 1.0) {
    DemandMatrix M(p.n());
    for (int k = 0; k < p.n(); ++k) M.at(k, p[k]) = scale;
    return M;
}

/// Uniform saturated matrix: every off-diagonal cell is 1/(n-1).
inline DemandMatrix make_uniform(int n) {
    DemandMatrix M(n);
    const double w = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) M.at(i, j) = w;
    return M;
}

/// Sum of v pairwise disjoint derangements, each weighted 1/v.
/// The derangements are cyclic shifts; the seed picks which v of the n-1
/// shift amounts are used, so disjointness holds for every n and v.
inline DemandMatrix make_mv(int n, int v, std::uint64_t seed) {
    if (v < 1 || v > n - 1) throw std::invalid_argument("make_mv: need 1 <= v <= n-1");
    std::vector<int> shifts(n - 1);
    std::iota(shifts.begin(), shifts.end(), 1);
    std::mt19937_64 rng(seed);
    std::shuffle(shifts.begin(), shifts.end(), rng);
    DemandMatrix M(n);
    const double w = 1.0 / v;
    for (int i = 0; i < v; ++i) {
        const int s = shifts[i];
        for (int k = 0; k < n; ++k) M.add(k, (k + s) % n, w);
    }
    return M;
}

/// The shift amounts make_mv(n, v, seed) uses, in application order.
inline std::vector<int> mv_shifts(int n, int v, std::uint64_t seed) {
    std::vector<int> shifts(n - 1);
    std::iota(shifts.begin(), shifts.end(), 1);
    std::mt19937_64 rng(seed);
    std::shuffle(shifts.begin(), shifts.end(), rng);
    shifts.resize(v);
    return shifts;
}

/// Convex mix of a v-derangement matrix with the uniform matrix:
/// u * uniform + (1-u) * make_mv(n, v, seed).
inline DemandMatrix make_mvu(int n, int v, double u, std::uint64_t seed) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("make_mvu: need 0 <= u <= 1");
    DemandMatrix M = make_mv(n, v, seed);
    if (u == 0.0) return M;
    const double uw = u / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) M.at(i, j) = uw + (1.0 - u) * M.at(i, j);
    return M;
}

struct MatrixMetrics {
    double weight = 0;
    double max_entry = 0;
    double sparsity = 0;            // fraction of zero cells over all n^2
    double variation_distance = 0;  // total-variation distance from uniform
};

/// Weight, max, zero-cell fraction and total-variation distance from the
/// uniform matrix of equal weight. The variation distance considers
/// off-diagonal cells only since the diagonal is structurally zero.
inline MatrixMetrics metrics(const DemandMatrix& M) {
    MatrixMetrics m;
    const int n = M.n();
    m.weight = weight(M);
    m.max_entry = max_entry(M);
    int zeros = 0;
    for (double c : M.data())
        if (c == 0.0) ++zeros;
    m.sparsity = static_cast<double>(zeros) / (static_cast<double>(n) * n);
    if (m.weight > 0) {
        const double avg = m.weight / (static_cast<double>(n) * (n - 1));
        double tv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) tv += std::abs(M.at(i, j) - avg);
        m.variation_distance = 0.5 * tv / m.weight;
    }
    return m;
}

}  // namespace rdcn
