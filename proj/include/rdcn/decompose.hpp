#pragma once

// Birkhoff style decomposition of (scaled) doubly stochastic demand matrices
// into weighted derangement matchings, with a configurable residual cutoff.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "rdcn/matrix.hpp"

namespace rdcn {

struct NotDoublyStochastic : std::runtime_error {
    NotDoublyStochastic() : std::runtime_error("matrix is not doubly stochastic within tolerance") {}
};
struct NoPerfectMatching : std::runtime_error {
    NoPerfectMatching()
        : std::runtime_error(
              "no perfect matching above the support threshold; "
              "input was not doubly stochastic within tolerance") {}
};

enum class MatchStrategy { MinGreedy, MaxBottleneck };

struct BvnDecomposition {
    std::vector<Permutation> perms;
    std::vector<double> coeffs;   // positive, sorted descending
    double residual = 0.0;        // Frobenius norm of the unserved remainder

    size_t size() const { return coeffs.size(); }
};

namespace detail {

// Row -> column matching by augmenting paths (Kuhn). adj holds, per row, the
// admissible columns in ascending order. Returns row->col map or nullopt when
// no perfect matching exists.
inline std::optional<std::vector<int>> kuhn_matching(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> match_row(n, -1);  // row -> col
    std::vector<int> match_col(n, -1);  // col -> row
    // Greedy seed: most rows get matched without search.
    for (int i = 0; i < n; ++i)
        for (int j : adj[i])
            if (match_col[j] < 0) {
                match_row[i] = j;
                match_col[j] = i;
                break;
            }
    std::vector<char> used(n);
    auto augment = [&](auto&& self, int i) -> bool {
        for (int j : adj[i]) {
            if (used[j]) continue;
            used[j] = 1;
            if (match_col[j] < 0 || self(self, match_col[j])) {
                match_row[i] = j;
                match_col[j] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        if (match_row[i] >= 0) continue;
        std::fill(used.begin(), used.end(), 0);
        if (!augment(augment, i)) return std::nullopt;
    }
    return match_row;
}

inline std::vector<std::vector<int>> level_graph(const DemandMatrix& M, double lo) {
    const int n = M.n();
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (M.at(i, j) >= lo) adj[i].push_back(j);
    return adj;
}

// Lexicographically smallest perfect matching on a graph known to admit one.
// Rows are fixed in order; each candidate column is accepted when the
// remaining rows can still be matched, tested with one augmenting search.
inline std::vector<int> lex_min_matching(const std::vector<std::vector<int>>& adj,
                                         std::vector<int> match_row) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> match_col(n, -1);
    for (int i = 0; i < n; ++i) match_col[match_row[i]] = i;

    std::vector<char> fixed_row(n, 0), used(n);
    auto augment = [&](auto&& self, int r) -> bool {
        for (int j : adj[r]) {
            if (used[j]) continue;
            used[j] = 1;
            int owner = match_col[j];
            if (owner < 0 || (!fixed_row[owner] && self(self, owner))) {
                match_row[r] = j;
                match_col[j] = r;
                return true;
            }
        }
        return false;
    };

    for (int i = 0; i < n; ++i) {
        for (int j : adj[i]) {
            if (j == match_row[i]) break;  // already the smallest feasible column
            int owner = match_col[j];
            if (owner < 0) {
                match_col[match_row[i]] = -1;
                match_row[i] = j;
                match_col[j] = i;
                break;
            }
            if (fixed_row[owner]) continue;
            // Steal column j for row i and try to re-home its owner.
            int prev = match_row[i];
            match_col[prev] = -1;
            match_row[i] = j;
            match_col[j] = i;
            std::fill(used.begin(), used.end(), 0);
            used[j] = 1;
            match_row[owner] = -1;
            if (augment(augment, owner)) break;
            // Revert.
            match_row[owner] = j;
            match_col[j] = owner;
            match_row[i] = prev;
            match_col[prev] = i;
        }
        fixed_row[i] = 1;
    }
    return match_row;
}

}  // namespace detail

/// Perfect matching over cells with value > threshold.
/// MinGreedy returns the first perfect matching found by augmenting paths;
/// MaxBottleneck maximizes the minimum cell value along the matching (binary
/// search over cell values), breaking ties toward the lexicographically
/// smallest row->column map.
inline std::optional<Permutation> support_matching(const DemandMatrix& M, double threshold,
                                                   MatchStrategy strategy) {
    std::vector<double> vals;
    for (double c : M.data())
        if (c > threshold) vals.push_back(c);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) return std::nullopt;

    auto base = detail::kuhn_matching(detail::level_graph(M, vals.front()));
    if (!base) return std::nullopt;
    if (strategy == MatchStrategy::MinGreedy) return Permutation(*base);

    // Largest level whose graph still has a perfect matching.
    size_t lo = 0, hi = vals.size() - 1;
    std::vector<int> best = *base;
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        auto m = detail::kuhn_matching(detail::level_graph(M, vals[mid]));
        if (m) {
            lo = mid;
            best = *m;
        } else {
            hi = mid - 1;
        }
    }
    auto adj = detail::level_graph(M, vals[lo]);
    return Permutation(detail::lex_min_matching(adj, std::move(best)));
}

/// Greedy decomposition: repeatedly pick a matching over the remaining
/// support and subtract its minimum entry, until the Frobenius norm of the
/// remainder drops to eps. The default strategy removes mass fastest by
/// maximizing the bottleneck entry of each matching.
inline BvnDecomposition decompose(const DemandMatrix& M, double eps = 1e-4,
                                  MatchStrategy strategy = MatchStrategy::MaxBottleneck,
                                  double tau_ds = 1e-6) {
    const int n = M.n();
    if (!is_doubly_stochastic(M, tau_ds)) throw NotDoublyStochastic();
    for (int i = 0; i < n; ++i)
        if (M.at(i, i) != 0.0) throw std::invalid_argument("decompose: nonzero diagonal");

    const double support_threshold = eps / (static_cast<double>(n) * n);
    DemandMatrix R = M;
    std::vector<std::pair<double, Permutation>> terms;
    const size_t cap = 4 * static_cast<size_t>(n) * n;

    while (frobenius(R) > eps) {
        auto p = support_matching(R, support_threshold, strategy);
        if (!p) throw NoPerfectMatching();
        double beta = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) beta = std::min(beta, R.at(k, (*p)[k]));
        if (beta <= 0) throw NoPerfectMatching();
        for (int k = 0; k < n; ++k) {
            double& c = R.at(k, (*p)[k]);
            c -= beta;
            if (c < 0) c = 0;
        }
        terms.emplace_back(beta, std::move(*p));
        if (terms.size() > cap) throw std::runtime_error("decompose: did not converge");
    }

    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    BvnDecomposition d;
    d.residual = frobenius(R);
    d.coeffs.reserve(terms.size());
    d.perms.reserve(terms.size());
    for (auto& [beta, perm] : terms) {
        d.coeffs.push_back(beta);
        d.perms.push_back(std::move(perm));
    }
    return d;
}

inline DemandMatrix reconstruct(const BvnDecomposition& d, int n) {
    DemandMatrix M(n);
    for (size_t t = 0; t < d.size(); ++t)
        for (int k = 0; k < n; ++k) M.add(k, d.perms[t][k], d.coeffs[t]);
    return M;
}

inline nlohmann::json to_json(const BvnDecomposition& d) {
    nlohmann::json j;
    j["coeffs"] = d.coeffs;
    j["perms"] = nlohmann::json::array();
    for (const auto& p : d.perms) j["perms"].push_back(p.map);
    j["residual"] = d.residual;
    return j;
}

inline BvnDecomposition decomposition_from_json(const nlohmann::json& j) {
    BvnDecomposition d;
    d.coeffs = j.at("coeffs").get<std::vector<double>>();
    for (const auto& p : j.at("perms")) d.perms.emplace_back(p.get<std::vector<int>>());
    d.residual = j.at("residual").get<double>();
    if (d.coeffs.size() != d.perms.size())
        throw std::runtime_error("decomposition json: length mismatch");
    return d;
}

}  // namespace rdcn
