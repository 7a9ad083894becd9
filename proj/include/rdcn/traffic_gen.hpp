#pragma once

// Stochastic demand generator: a mix of heavy and light random derangement
// flows with multiplicative-scale Gaussian noise, rescaled to a doubly
// stochastic matrix.

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rdcn/matrix.hpp"

namespace rdcn {

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TmParams {
    double t_l = 0.2;        // fraction of flows that are large
    int n_f = 64;            // flows per node
    double c_l = 0.7;        // share of the total load carried by large flows
    int n = 64;
    double lambda_noise = 0.01;  // noise std relative to the flow weight
    std::uint64_t seed = 0;
    bool literal_weights = false;  // weight large flows t_l/n_l instead of c_l/n_l

    int n_large() const { return static_cast<int>(std::ceil(t_l * n_f)); }
    int n_small() const { return n_f - n_large(); }
};

namespace detail {
inline Permutation random_derangement(int n, std::mt19937_64& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (;;) {
        std::shuffle(p.begin(), p.end(), rng);
        bool ok = true;
        for (int k = 0; k < n; ++k)
            if (p[k] == k) {
                ok = false;
                break;
            }
        if (ok) return Permutation(p);
    }
}

// Alternate row and column rescaling until every sum is 1 within tau.
inline void sinkhorn(DemandMatrix& M, double tau = 1e-9, int max_iters = 100000) {
    const int n = M.n();
    for (int it = 0; it < max_iters; ++it) {
        double dev = 0;
        for (int i = 0; i < n; ++i) {
            const double s = M.row_sum(i);
            if (s <= 0) throw std::runtime_error("sinkhorn: empty row");
            dev = std::max(dev, std::abs(s - 1.0));
            for (int j = 0; j < n; ++j) M.at(i, j) /= s;
        }
        for (int j = 0; j < n; ++j) {
            const double s = M.col_sum(j);
            if (s <= 0) throw std::runtime_error("sinkhorn: empty column");
            dev = std::max(dev, std::abs(s - 1.0));
            for (int i = 0; i < n; ++i) M.at(i, j) /= s;
        }
        if (dev <= tau) return;
    }
    throw std::runtime_error("sinkhorn: did not converge");
}
}  // namespace detail

inline DemandMatrix generate_tm(const TmParams& p) {
    if (p.t_l < 0 || p.t_l > 1 || p.c_l < 0 || p.c_l > 1 || p.n_f < 1)
        throw InvalidParams("generate_tm: parameters out of range");
    const int n_l = p.n_large();
    const int n_s = p.n_small();
    if (p.t_l < 1.0 && n_s < 1) throw InvalidParams("generate_tm: no small flows");
    if (p.t_l > 0.0 && n_l < 1) throw InvalidParams("generate_tm: no large flows");

    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DemandMatrix M(p.n);
    for (int f = 0; f < p.n_f; ++f) {
        const bool large = f < n_l;
        const double share = large ? (p.literal_weights ? p.t_l : p.c_l)
                                   : (p.literal_weights ? 1.0 - p.t_l : 1.0 - p.c_l);
        const double base = share / (large ? n_l : n_s);
        const Permutation perm = detail::random_derangement(p.n, rng);
        double w = base;
        if (p.lambda_noise > 0) w += gauss(rng) * p.lambda_noise * base;
        if (w < 0) w = 0;
        for (int k = 0; k < p.n; ++k) M.add(k, perm[k], w);
    }
    detail::sinkhorn(M);
    return M;
}

}  // namespace rdcn
