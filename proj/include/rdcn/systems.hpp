#pragma once

// The concrete schedulers. Each returns a topology schedule, a traffic
// schedule and the completion time it claims; verifiers in schedule.hpp can
// then cross-check the claim against the materialized schedule.
//
// Planning variants compute the claimed completion time without building
// traffic entries; parameter sweeps use those.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdcn/decompose.hpp"
#include "rdcn/matrix.hpp"
#include "rdcn/schedule.hpp"

namespace rdcn {

struct SystemConfig {
    int n = 0;
    double r = 1.0;       // line rate, bits per second
    double R_b = 0.0;     // reconfiguration time of the demand-aware switch
    double R_r = 0.0;     // reconfiguration time of the rotor switch
    double eta = 1.0;     // rotor duty cycle, fraction of time transmitting
    double delta = 0.0;   // fixed rotor slot length; 0 means size slots to fit
    double eps = 1e-4;    // decomposition residual cutoff
    bool quantize = false;  // round rotor cycles up to whole slots
};

struct NotDerangement : std::runtime_error {
    NotDerangement() : std::runtime_error("input is not a uniformly scaled derangement") {}
};

struct ScheduleResult {
    TopologySchedule topology;
    TrafficSchedule traffic;
    double claimed_dct = 0;
    std::string label;
    // Composite schedulers record how the demand was split.
    std::optional<int> pivot_index;
    std::optional<double> extracted_uniform;  // per-cell weight peeled off by the "+" variants
};

/// The n-1 cyclic shifts. Their supports partition all ordered off-diagonal
/// pairs, so one pass over them touches every possible link exactly once.
inline std::vector<Permutation> rr_cycle_configurations(int n) {
    std::vector<Permutation> out;
    out.reserve(n - 1);
    for (int s = 1; s < n; ++s) out.push_back(cyclic_shift(n, s));
    return out;
}

namespace detail {

// Slot index (within one rotor cycle) whose configuration holds link x -> y.
inline int rr_slot_of_link(int n, int x, int y) { return (y - x + n) % n - 1; }

// Per-slot overhead that realizes duty cycle eta.
inline double rr_overhead(double alpha, double eta) { return alpha * (1.0 - eta) / eta; }

inline void append_rr_cycle(TopologySchedule& S, int n, double alpha, double eta) {
    for (auto& cfg : rr_cycle_configurations(n))
        S.slots.push_back({std::move(cfg), alpha, rr_overhead(alpha, eta)});
}

// One rotor pass-pair serving a uniformly scaled derangement of total weight
// W. Every link carries exactly W/n^2 per cycle: the first cycle moves the
// direct share plus all first hops, the second the direct share plus all
// second hops.
inline void append_oneperm(TopologySchedule& S, TrafficSchedule& T, const Permutation& pi,
                           double W, const SystemConfig& cfg) {
    const int n = cfg.n;
    const int base = static_cast<int>(S.size());
    const double w = W / (static_cast<double>(n) * n);
    const double alpha = w / cfg.r;
    append_rr_cycle(S, n, alpha, cfg.eta);
    append_rr_cycle(S, n, alpha, cfg.eta);
    const int c2 = base + (n - 1);
    for (int s = 0; s < n; ++s) {
        const int d = pi[s];
        T.dl.push_back({base + rr_slot_of_link(n, s, d), s, d, w});
        T.dl.push_back({c2 + rr_slot_of_link(n, s, d), s, d, w});
        for (int q = 0; q < n; ++q) {
            if (q == s || q == d) continue;
            T.h1.push_back({base + rr_slot_of_link(n, s, q), s, d, q, w});
            T.h2.push_back({c2 + rr_slot_of_link(n, q, d), s, d, q, w});
        }
    }
    T.num_slots = static_cast<int>(S.size());
}

inline void append_bvn_terms(TopologySchedule& S, TrafficSchedule& T,
                             const BvnDecomposition& d, size_t first, size_t last,
                             const SystemConfig& cfg) {
    for (size_t t = first; t < last; ++t) {
        const int slot = static_cast<int>(S.size());
        S.slots.push_back({d.perms[t], d.coeffs[t] / cfg.r, cfg.R_b});
        for (int k = 0; k < cfg.n; ++k) T.dl.push_back({slot, k, d.perms[t][k], d.coeffs[t]});
    }
    T.num_slots = static_cast<int>(S.size());
}

// Rotor cycles serving every cell on its own link only. Fluid mode holds each
// configuration just long enough for the largest cell; quantize mode uses
// fixed slots of cfg.delta and spreads each cell over the resulting cycles.
inline void append_rr_direct(TopologySchedule& S, TrafficSchedule& T, const DemandMatrix& M,
                             const SystemConfig& cfg) {
    const int n = cfg.n;
    const double mx = max_entry(M);
    if (mx <= 0) return;
    int cycles = 1;
    double alpha = mx / cfg.r;
    if (cfg.quantize) {
        if (cfg.delta <= 0) throw std::invalid_argument("quantize needs a positive delta");
        cycles = static_cast<int>(std::ceil(mx / (cfg.delta * cfg.r)));
        alpha = cfg.delta;
    }
    const int base = static_cast<int>(S.size());
    for (int c = 0; c < cycles; ++c) append_rr_cycle(S, n, alpha, cfg.eta);
    for (int s = 0; s < n; ++s)
        for (int d = 0; d < n; ++d) {
            const double m = M.at(s, d);
            if (m <= 0) continue;
            const int slot = rr_slot_of_link(n, s, d);
            for (int c = 0; c < cycles; ++c)
                T.dl.push_back({base + c * (n - 1) + slot, s, d, m / cycles});
        }
    T.num_slots = static_cast<int>(S.size());
}

inline double rr_direct_dct(const SystemConfig& cfg, double mx) {
    if (mx <= 0) return 0;
    if (cfg.quantize) {
        const int cycles = static_cast<int>(std::ceil(mx / (cfg.delta * cfg.r)));
        return (cfg.n - 1) * cycles * cfg.delta / cfg.eta;
    }
    return (cfg.n - 1) * mx / (cfg.eta * cfg.r);
}

inline double mulp_dct(const SystemConfig& cfg, double W) {
    return (2.0 - 2.0 / cfg.n) * W / (cfg.eta * cfg.r * cfg.n);
}

inline double bvn_dct_terms(const SystemConfig& cfg, double coeff_sum, size_t v) {
    return coeff_sum / cfg.r + static_cast<double>(v) * cfg.R_b;
}

// Best rotor option for a matrix summarized by its weight and max entry.
inline double upper_dct(const SystemConfig& cfg, double W, double mx) {
    if (W <= 0) return 0;
    return std::min(mulp_dct(cfg, W), rr_direct_dct(cfg, mx));
}

inline bool upper_picks_mulp(const SystemConfig& cfg, double W, double mx) {
    return (2.0 - 2.0 / cfg.n) * W / (static_cast<double>(cfg.n - 1) * cfg.n) <= mx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schedule builders
// ---------------------------------------------------------------------------

/// Demand-aware scheduling: one configuration per decomposition term, each
/// held exactly long enough to drain its coefficient, paying R_b per switch.
inline ScheduleResult schedule_bvn_direct(const DemandMatrix& M, const SystemConfig& cfg) {
    ScheduleResult res;
    res.label = "bvn-direct";
    auto d = decompose(M, cfg.eps);
    res.topology.n = res.traffic.n = cfg.n;
    detail::append_bvn_terms(res.topology, res.traffic, d, 0, d.size(), cfg);
    double sum = 0;
    for (double b : d.coeffs) sum += b;
    res.claimed_dct = detail::bvn_dct_terms(cfg, sum, d.size());
    return res;
}

/// Rotor scheduling with single-hop traffic only.
inline ScheduleResult schedule_rr_direct(const DemandMatrix& M, const SystemConfig& cfg) {
    ScheduleResult res;
    res.label = "rr-direct";
    res.topology.n = res.traffic.n = cfg.n;
    detail::append_rr_direct(res.topology, res.traffic, M, cfg);
    res.claimed_dct = detail::rr_direct_dct(cfg, max_entry(M));
    return res;
}

/// Rotor scheduling of one uniformly scaled derangement over two cycles,
/// spreading its mass evenly across every link.
inline ScheduleResult schedule_rr_oneperm(const DemandMatrix& P, const SystemConfig& cfg) {
    const int n = P.n();
    std::vector<int> pi(n, -1);
    double cell = -1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = P.at(i, j);
            if (v <= 0) continue;
            if (pi[i] >= 0) throw NotDerangement();
            pi[i] = j;
            if (cell < 0) cell = v;
            if (std::abs(v - cell) > 1e-9 * std::max(1.0, cell)) throw NotDerangement();
        }
    Permutation perm{pi};
    if (!perm.is_derangement()) throw NotDerangement();

    ScheduleResult res;
    res.label = "rr-oneperm";
    res.topology.n = res.traffic.n = cfg.n;
    const double W = weight(P);
    detail::append_oneperm(res.topology, res.traffic, perm, W, cfg);
    res.claimed_dct = detail::mulp_dct(cfg, W);
    return res;
}

/// Rotor scheduling of an arbitrary doubly stochastic matrix: decompose and
/// run one two-cycle pass per term, each with its own slot length.
inline ScheduleResult schedule_rr_mulp(const DemandMatrix& M, const SystemConfig& cfg) {
    ScheduleResult res;
    res.label = "rr-mulp";
    res.topology.n = res.traffic.n = cfg.n;
    auto d = decompose(M, cfg.eps);
    double served = 0;
    for (size_t t = 0; t < d.size(); ++t) {
        detail::append_oneperm(res.topology, res.traffic, d.perms[t], d.coeffs[t] * cfg.n, cfg);
        served += d.coeffs[t] * cfg.n;
    }
    res.claimed_dct = detail::mulp_dct(cfg, served);
    return res;
}

/// Best single rotor strategy: multi-pass decomposition scheduling when the
/// matrix is spread out, per-link direct scheduling when one cell dominates.
inline ScheduleResult rr_upper(const DemandMatrix& M, const SystemConfig& cfg) {
    ScheduleResult res = detail::upper_picks_mulp(cfg, weight(M), max_entry(M))
                             ? schedule_rr_mulp(M, cfg)
                             : schedule_rr_direct(M, cfg);
    res.label = "rr-upper";
    return res;
}

/// Composite scheduler: sort the decomposition by coefficient, serve the
/// heavy prefix on the demand-aware switch and the light suffix on the rotor,
/// choosing the split index that minimizes the combined completion time.
inline ScheduleResult pivot(const DemandMatrix& M, const SystemConfig& cfg) {
    ScheduleResult res;
    res.label = "comp-pivot";
    res.topology.n = res.traffic.n = cfg.n;
    auto d = decompose(M, cfg.eps);
    const size_t v = d.size();

    // Suffix weight and max entry, built by adding terms from the smallest
    // coefficient upward so the max only ever grows.
    std::vector<double> suf_w(v + 1, 0.0), suf_mx(v + 1, 0.0);
    DemandMatrix acc(cfg.n);
    double running_max = 0;
    for (size_t j = v; j-- > 0;) {
        for (int k = 0; k < cfg.n; ++k) {
            double& c = acc.at(k, d.perms[j][k]);
            c += d.coeffs[j];
            running_max = std::max(running_max, c);
        }
        suf_w[j] = suf_w[j + 1] + d.coeffs[j] * cfg.n;
        suf_mx[j] = running_max;
    }

    size_t f = 0;
    double best = std::numeric_limits<double>::infinity();
    double prefix = 0;
    for (size_t i = 0; i <= v; ++i) {
        const double dct = detail::bvn_dct_terms(cfg, prefix, i) +
                           detail::upper_dct(cfg, suf_w[i], suf_mx[i]);
        if (dct < best) {
            best = dct;
            f = i;
        }
        if (i < v) prefix += d.coeffs[i];
    }

    detail::append_bvn_terms(res.topology, res.traffic, d, 0, f, cfg);
    if (f < v) {
        if (detail::upper_picks_mulp(cfg, suf_w[f], suf_mx[f])) {
            for (size_t t = f; t < v; ++t)
                detail::append_oneperm(res.topology, res.traffic, d.perms[t],
                                       d.coeffs[t] * cfg.n, cfg);
        } else {
            DemandMatrix suffix(cfg.n);
            for (size_t t = f; t < v; ++t)
                for (int k = 0; k < cfg.n; ++k) suffix.add(k, d.perms[t][k], d.coeffs[t]);
            detail::append_rr_direct(res.topology, res.traffic, suffix, cfg);
        }
    }
    res.claimed_dct = (v == 0) ? 0.0 : best;
    res.pivot_index = static_cast<int>(f);
    return res;
}

/// Uniform-component peeling: serve the largest uniform matrix under M on the
/// rotor in a single pass, then run the given scheduler on the remainder.
namespace detail {
inline double min_off_diagonal(const DemandMatrix& M) {
    double c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M.n(); ++i)
        for (int j = 0; j < M.n(); ++j)
            if (i != j) c = std::min(c, M.at(i, j));
    return c;
}

template <typename Scheduler>
ScheduleResult with_uniform_extraction(const DemandMatrix& M, const SystemConfig& cfg,
                                       Scheduler&& rest, const std::string& label) {
    const double c = min_off_diagonal(M);
    if (c <= 0) {
        ScheduleResult res = rest(M);
        res.label = label;
        res.extracted_uniform = 0.0;
        return res;
    }
    DemandMatrix remainder = M;
    for (int i = 0; i < M.n(); ++i)
        for (int j = 0; j < M.n(); ++j)
            if (i != j) remainder.at(i, j) = std::max(0.0, remainder.at(i, j) - c);
    ScheduleResult res = rest(remainder);
    res.label = label;
    res.extracted_uniform = c;
    DemandMatrix uni(M.n());
    for (int i = 0; i < M.n(); ++i)
        for (int j = 0; j < M.n(); ++j)
            if (i != j) uni.at(i, j) = c;
    append_rr_direct(res.topology, res.traffic, uni, cfg);
    res.claimed_dct += rr_direct_dct(cfg, c);
    return res;
}
}  // namespace detail

inline ScheduleResult pivot_plus(const DemandMatrix& M, const SystemConfig& cfg) {
    return detail::with_uniform_extraction(
        M, cfg, [&](const DemandMatrix& R) { return pivot(R, cfg); }, "comp-pivot-plus");
}

inline ScheduleResult rr_upper_plus(const DemandMatrix& M, const SystemConfig& cfg) {
    return detail::with_uniform_extraction(
        M, cfg, [&](const DemandMatrix& R) { return rr_upper(R, cfg); }, "rr-upper-plus");
}

inline ScheduleResult run_system(const std::string& label, const DemandMatrix& M,
                                 const SystemConfig& cfg) {
    if (label == "bvn-direct") return schedule_bvn_direct(M, cfg);
    if (label == "rr-direct") return schedule_rr_direct(M, cfg);
    if (label == "rr-oneperm") return schedule_rr_oneperm(M, cfg);
    if (label == "rr-mulp") return schedule_rr_mulp(M, cfg);
    if (label == "rr-upper") return rr_upper(M, cfg);
    if (label == "comp-pivot") return pivot(M, cfg);
    if (label == "comp-pivot-plus") return pivot_plus(M, cfg);
    throw std::invalid_argument("unknown scheduler: " + label);
}

// ---------------------------------------------------------------------------
// Planning (claimed completion times only, no traffic materialization)
// ---------------------------------------------------------------------------

struct PivotPlan {
    double dct = 0;
    int split = 0;
};

inline double plan_bvn_direct(const BvnDecomposition& d, const SystemConfig& cfg) {
    double sum = 0;
    for (double b : d.coeffs) sum += b;
    return detail::bvn_dct_terms(cfg, sum, d.size());
}

inline double plan_rr_direct(const DemandMatrix& M, const SystemConfig& cfg) {
    return detail::rr_direct_dct(cfg, max_entry(M));
}

inline double plan_rr_mulp(const DemandMatrix& M, const SystemConfig& cfg) {
    return detail::mulp_dct(cfg, weight(M));
}

inline double plan_rr_upper(const DemandMatrix& M, const SystemConfig& cfg) {
    return detail::upper_dct(cfg, weight(M), max_entry(M));
}

inline PivotPlan plan_pivot(const BvnDecomposition& d, const SystemConfig& cfg) {
    const size_t v = d.size();
    std::vector<double> suf_w(v + 1, 0.0), suf_mx(v + 1, 0.0);
    DemandMatrix acc(cfg.n);
    double running_max = 0;
    for (size_t j = v; j-- > 0;) {
        for (int k = 0; k < cfg.n; ++k) {
            double& c = acc.at(k, d.perms[j][k]);
            c += d.coeffs[j];
            running_max = std::max(running_max, c);
        }
        suf_w[j] = suf_w[j + 1] + d.coeffs[j] * cfg.n;
        suf_mx[j] = running_max;
    }
    PivotPlan plan;
    plan.dct = std::numeric_limits<double>::infinity();
    double prefix = 0;
    for (size_t i = 0; i <= v; ++i) {
        const double dct = detail::bvn_dct_terms(cfg, prefix, i) +
                           detail::upper_dct(cfg, suf_w[i], suf_mx[i]);
        if (dct < plan.dct) {
            plan.dct = dct;
            plan.split = static_cast<int>(i);
        }
        if (i < v) prefix += d.coeffs[i];
    }
    if (v == 0) plan.dct = 0;
    return plan;
}

inline double plan_pivot(const DemandMatrix& M, const SystemConfig& cfg) {
    return plan_pivot(decompose(M, cfg.eps), cfg).dct;
}

template <typename Plan>
double plan_with_uniform_extraction(const DemandMatrix& M, const SystemConfig& cfg,
                                    Plan&& rest) {
    const double c = detail::min_off_diagonal(M);
    if (c <= 0) return rest(M);
    DemandMatrix remainder = M;
    for (int i = 0; i < M.n(); ++i)
        for (int j = 0; j < M.n(); ++j)
            if (i != j) remainder.at(i, j) = std::max(0.0, remainder.at(i, j) - c);
    return detail::rr_direct_dct(cfg, c) + rest(remainder);
}

inline double plan_pivot_plus(const DemandMatrix& M, const SystemConfig& cfg) {
    return plan_with_uniform_extraction(
        M, cfg, [&](const DemandMatrix& R) { return plan_pivot(R, cfg); });
}

inline double plan_rr_upper_plus(const DemandMatrix& M, const SystemConfig& cfg) {
    return plan_with_uniform_extraction(
        M, cfg, [&](const DemandMatrix& R) { return plan_rr_upper(R, cfg); });
}

}  // namespace rdcn
