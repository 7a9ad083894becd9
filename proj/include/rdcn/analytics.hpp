#pragma once

// Closed-form completion-time expressions, worst-case system values over the
// M(v, u) family, crossing points, the composite-advantage ratio psi and the
// relay-collision analysis. These serve as the oracle layer the simulated
// schedules are tested against.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdcn/matrix.hpp"

namespace rdcn {

struct UnknownSystem : std::invalid_argument {
    explicit UnknownSystem(const std::string& s) : std::invalid_argument("unknown system: " + s) {}
};
struct NonPositiveDct : std::invalid_argument {
    NonPositiveDct() : std::invalid_argument("completion time must be positive") {}
};

enum class BoundKind { Exact, Upper, Lower };

struct BoundReport {
    double value = 0;
    BoundKind kind = BoundKind::Exact;
    std::string source;  // which formula produced the value
    nlohmann::json parameters;
};

/// Demand-aware completion: drain time of the coefficients plus one
/// reconfiguration per term. weight is the full matrix weight; weight/n is
/// the per-node load.
inline double dct_bvn(double weight, int n, double v, double R_b, double r = 1.0) {
    return weight / (n * r) + v * R_b;
}

/// Rotor single-hop completion: the busiest link paces everyone.
inline double dct_rr_direct(int n, double max_entry, double eta = 1.0, double r = 1.0) {
    return (n - 1) * max_entry / (eta * r);
}

/// Rotor multi-pass completion: weight alone decides.
inline double dct_rr_mulp(int n, double weight, double eta = 1.0, double r = 1.0) {
    return (2.0 - 2.0 / n) * weight / (eta * r * n);
}

/// Lower bound on any rotor completion given the single-hop fraction phi and
/// the number w of per-row links the schedule never uses.
inline double dct_rr_lower(int n, double weight, double eta, double r, double phi, double w) {
    return (2.0 - phi) * (weight / (eta * r * n)) * ((n - 1) / (n - w));
}

/// Upper bound on the single-hop fraction achievable on M(v) matrices when w
/// links per row stay unused.
inline double skew_upper_mv(int n, int v, int w) {
    return 2.0 * v / (n - w + v);
}

/// Best rotor completion for a matrix summarized by weight and max entry.
inline double dct_rr_upper(int n, double weight, double max_entry, double eta = 1.0,
                           double r = 1.0) {
    return std::min(dct_rr_mulp(n, weight, eta, r), dct_rr_direct(n, max_entry, eta, r));
}

/// The v solving 1 + R_b v = (n-1)/v: where the demand-aware cost climbs past
/// the rotor single-hop cost on the M(v) family.
inline double crossing_v(int n, double R_b) {
    return (std::sqrt(1.0 + 4.0 * R_b * (n - 1)) - 1.0) / (2.0 * R_b);
}

/// The v solving 1 + R_b v = 2 - 2v/(n-1+v): where the demand-aware cost
/// climbs past the rotor lower bound.
inline double low_crossing(double R_b, int n) {
    const double b = R_b * (1.0 - n) - 1.0;
    return (b + std::sqrt(4.0 * R_b * (n - 1) + b * b)) / (2.0 * R_b);
}

struct SystemWorstCase {
    double worst_v = 0;
    double worst_u = 0;
    double dct = 0;
};

/// Worst-case completion of each system over the M(v, u) family (eta = r = 1
/// normalization folded in via the eta/r parameters).
inline SystemWorstCase system_dct_mvu(const std::string& system, int n, double R_b,
                                      double eta = 1.0, double r = 1.0) {
    if (system == "bvn") return {static_cast<double>(n - 1), 0.0, (1.0 + (n - 1) * R_b) / r};
    if (system == "rr") return {1.0, 0.0, (2.0 - 2.0 / n) / (eta * r)};
    if (system == "comp") {
        if (R_b < (2.0 * n - 4.0) / (static_cast<double>(n) * n)) {
            const double root = std::sqrt(1.0 + 4.0 * R_b * (n - 1));
            return {(root - 1.0) / (2.0 * R_b), 0.0, (root + 1.0) / 2.0};
        }
        return {(n - 2.0) / (n * R_b), 0.0, 2.0 - 2.0 / n};
    }
    throw UnknownSystem(system);
}

/// Composite completion on M(v, u): the uniform share u rides the rotor for
/// cost u, the remaining (1-u)M(v) goes to whichever side is cheaper.
inline double dct_comp_mvu(double v, double u, int n, double R_b, double eta = 1.0,
                           double r = 1.0) {
    const double full_bvn = (1.0 + R_b * v) / r;
    const double split = (u + (1.0 - u) * std::min(2.0 - 2.0 / n, (n - 1.0) / v)) / (eta * r);
    return std::min(full_bvn, split);
}

/// Relative completion-time advantage of the composite system over the
/// better of the two pure systems, at each one's worst case.
inline double psi(int n, double R_b) {
    const double comp = system_dct_mvu("comp", n, R_b).dct;
    const double rr = system_dct_mvu("rr", n, R_b).dct;
    const double bvn = system_dct_mvu("bvn", n, R_b).dct;
    return std::min(rr / comp, bvn / comp) - 1.0;
}

inline double throughput(double dct) {
    if (dct <= 0) throw NonPositiveDct();
    return 1.0 / dct;
}

enum class CollisionKind { Single, Dual };

/// An empty cell (row, col) whose use as a relay link would collide with
/// traffic of the listed demand columns.
struct CollisionCell {
    int row = 0;
    int col = 0;
    CollisionKind kind = CollisionKind::Single;
    std::vector<int> witnesses;  // demand columns a with M[row,a] > 0 and M[col,a] > 0
};

/// Empty cells that cannot serve as relays without contending with demand:
/// (l, j) collides with demand (l, a) when node j itself must send to a.
inline std::vector<CollisionCell> find_collision_cells(const DemandMatrix& M,
                                                       double tau = 1e-9) {
    std::vector<CollisionCell> out;
    const int n = M.n();
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            if (l == j || M.at(l, j) > tau) continue;
            CollisionCell cc;
            cc.row = l;
            cc.col = j;
            for (int a = 0; a < n; ++a) {
                if (a == l || a == j) continue;
                if (M.at(l, a) > tau && M.at(j, a) > tau) cc.witnesses.push_back(a);
            }
            if (cc.witnesses.empty()) continue;
            cc.kind = cc.witnesses.size() >= 2 ? CollisionKind::Dual : CollisionKind::Single;
            out.push_back(std::move(cc));
        }
    return out;
}

inline nlohmann::json to_json(const BoundReport& b) {
    nlohmann::json j;
    j["value"] = b.value;
    j["kind"] = b.kind == BoundKind::Exact ? "exact" : (b.kind == BoundKind::Upper ? "upper" : "lower");
    j["source"] = b.source;
    j["parameters"] = b.parameters;
    return j;
}

}  // namespace rdcn
