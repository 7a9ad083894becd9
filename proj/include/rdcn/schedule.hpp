#pragma once

// Topology and traffic schedules, plus the verifiers: admissibility, slot
// capacity, two-hop causality, completeness and skewness.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "rdcn/matrix.hpp"

namespace rdcn {

struct TopologySlot {
    Permutation config;
    double alpha = 0;  // transmission (hold) time, > 0
    double R = 0;      // reconfiguration time after the slot, >= 0
};

struct TopologySchedule {
    int n = 0;
    std::vector<TopologySlot> slots;

    size_t size() const { return slots.size(); }
};

/// Wall-clock span of a schedule: every hold time plus every
/// reconfiguration gap.
inline double completion_time(const TopologySchedule& S) {
    double t = 0;
    for (const auto& s : S.slots) t += s.alpha + s.R;
    return t;
}

/// Traffic delivered source->destination on the direct link, in one slot.
struct DirectEntry {
    int slot, s, d;
    double w;
};

/// One hop of a two-hop delivery. For first hops the mass moves s -> relay,
/// for second hops relay -> d; (s, d) always names the original demand cell.
struct HopEntry {
    int slot, s, d, relay;
    double w;
};

struct TrafficSchedule {
    int n = 0;
    int num_slots = 0;
    std::vector<DirectEntry> dl;
    std::vector<HopEntry> h1;
    std::vector<HopEntry> h2;
};

/// Raw per-transmission record: at slot t, w bits of demand (s, d) move
/// across the link x -> y.
struct TrafficEntry {
    int t;
    double w;
    int s, d, x, y;
};

struct InadmissibleEntry : std::runtime_error {
    int t, x, y;
    InadmissibleEntry(int t_, int x_, int y_)
        : std::runtime_error("entry at slot " + std::to_string(t_) + " uses absent link " +
                             std::to_string(x_) + "->" + std::to_string(y_)),
          t(t_), x(x_), y(y_) {}
};

struct EmptySchedule : std::runtime_error {
    EmptySchedule() : std::runtime_error("schedule carries no traffic") {}
};

/// Classify raw entries into direct / first-hop / second-hop lists.
/// Every entry must sit on a link present in its slot's configuration.
inline TrafficSchedule summarize(const std::vector<TrafficEntry>& detailed,
                                 const TopologySchedule& S) {
    TrafficSchedule T;
    T.n = S.n;
    T.num_slots = static_cast<int>(S.size());
    for (const auto& e : detailed) {
        if (e.t < 0 || e.t >= T.num_slots || S.slots[e.t].config[e.x] != e.y)
            throw InadmissibleEntry(e.t, e.x, e.y);
        if (e.s == e.x && e.d == e.y) {
            T.dl.push_back({e.t, e.s, e.d, e.w});
        } else if (e.s == e.x) {
            T.h1.push_back({e.t, e.s, e.d, e.y, e.w});
        } else if (e.d == e.y) {
            T.h2.push_back({e.t, e.s, e.d, e.x, e.w});
        } else {
            throw InadmissibleEntry(e.t, e.x, e.y);  // more than one hop away
        }
    }
    return T;
}

inline double total_mass(const TrafficSchedule& T) {
    double s = 0;
    for (const auto& e : T.dl) s += e.w;
    for (const auto& e : T.h1) s += e.w;
    for (const auto& e : T.h2) s += e.w;
    return s;
}

/// Demand served per cell, counting direct mass plus first hops.
inline DemandMatrix served_demand(const TrafficSchedule& T) {
    DemandMatrix M(T.n);
    for (const auto& e : T.dl) M.add(e.s, e.d, e.w);
    for (const auto& e : T.h1) M.add(e.s, e.d, e.w);
    return M;
}

/// Demand arriving per cell, counting direct mass plus second hops.
inline DemandMatrix arrived_demand(const TrafficSchedule& T) {
    DemandMatrix M(T.n);
    for (const auto& e : T.dl) M.add(e.s, e.d, e.w);
    for (const auto& e : T.h2) M.add(e.s, e.d, e.w);
    return M;
}

/// Total bits crossing each physical link over the whole schedule.
inline DemandMatrix total_traffic(const TrafficSchedule& T) {
    DemandMatrix M(T.n);
    for (const auto& e : T.dl) M.add(e.s, e.d, e.w);
    for (const auto& e : T.h1) M.add(e.s, e.relay, e.w);
    for (const auto& e : T.h2) M.add(e.relay, e.d, e.w);
    return M;
}

/// Bits crossing each link within one slot, for all slots.
inline std::vector<DemandMatrix> per_slot_traffic(const TrafficSchedule& T) {
    std::vector<DemandMatrix> out(T.num_slots, DemandMatrix(T.n));
    for (const auto& e : T.dl) out[e.slot].add(e.s, e.d, e.w);
    for (const auto& e : T.h1) out[e.slot].add(e.s, e.relay, e.w);
    for (const auto& e : T.h2) out[e.slot].add(e.relay, e.d, e.w);
    return out;
}

struct FeasibilityReport {
    bool ok = true;
    int violated_property = 0;  // 1 admissibility, 2 slot capacity, 3 causality
    std::string detail;
};

/// Check the three feasibility properties:
///   #1 every entry uses a link present in its slot's configuration;
///   #2 no slot's link carries more than alpha * r bits;
///   #3 per (source, destination, relay), second-hop mass never overtakes
///      first-hop mass (strict slot ordering), and the two totals agree.
inline FeasibilityReport verify_feasible(const TopologySchedule& S, const TrafficSchedule& T,
                                         double r, double tol = 1e-9) {
    FeasibilityReport rep;
    auto fail = [&](int prop, std::string detail) {
        rep.ok = false;
        rep.violated_property = prop;
        rep.detail = std::move(detail);
        return rep;
    };
    const int v = static_cast<int>(S.size());
    if (T.num_slots != v) return fail(1, "slot count mismatch");

    auto bad_slot = [&](int t) { return t < 0 || t >= v; };
    auto loc = [](int t, int x, int y) {
        return "slot " + std::to_string(t) + " link " + std::to_string(x) + "->" +
               std::to_string(y);
    };

    // Property #1 plus per-slot load accumulation for property #2. In a
    // permutation configuration each source has exactly one outgoing link,
    // so per-slot loads index by (slot, source).
    std::vector<double> load(static_cast<size_t>(v) * T.n, 0.0);
    auto place = [&](int t, int x, int y, double w) -> bool {
        if (bad_slot(t) || w <= 0 || x == y || S.slots[t].config[x] != y) return false;
        load[static_cast<size_t>(t) * T.n + x] += w;
        return true;
    };
    for (const auto& e : T.dl)
        if (!place(e.slot, e.s, e.d, e.w)) return fail(1, "direct " + loc(e.slot, e.s, e.d));
    for (const auto& e : T.h1) {
        if (e.relay == e.s || e.relay == e.d || !place(e.slot, e.s, e.relay, e.w))
            return fail(1, "first hop " + loc(e.slot, e.s, e.relay));
    }
    for (const auto& e : T.h2) {
        if (e.relay == e.s || e.relay == e.d || !place(e.slot, e.relay, e.d, e.w))
            return fail(1, "second hop " + loc(e.slot, e.relay, e.d));
    }

    for (int t = 0; t < v; ++t)
        for (int x = 0; x < T.n; ++x)
            if (load[static_cast<size_t>(t) * T.n + x] > S.slots[t].alpha * r + tol)
                return fail(2, "overfull " + loc(t, x, S.slots[t].config[x]));

    // Property #3: prefix dominance per (s, d, relay). A second hop at slot t
    // may only carry mass already relayed strictly before t.
    std::map<std::tuple<int, int, int>, std::map<int, std::pair<double, double>>> keyed;
    for (const auto& e : T.h1) keyed[{e.s, e.d, e.relay}][e.slot].first += e.w;
    for (const auto& e : T.h2) keyed[{e.s, e.d, e.relay}][e.slot].second += e.w;
    for (const auto& [key, slots] : keyed) {
        double sent = 0, forwarded = 0;
        for (const auto& [t, masses] : slots) {
            forwarded += masses.second;
            if (forwarded > sent + tol)
                return fail(3, "relay " + std::to_string(std::get<2>(key)) + " of demand " +
                                   std::to_string(std::get<0>(key)) + "->" +
                                   std::to_string(std::get<1>(key)) + " overtakes at slot " +
                                   std::to_string(t));
            sent += masses.first;
        }
        if (std::abs(sent - forwarded) > tol)
            return fail(3, "relay " + std::to_string(std::get<2>(key)) + " of demand " +
                               std::to_string(std::get<0>(key)) + "->" +
                               std::to_string(std::get<1>(key)) + " strands mass");
    }
    return rep;
}

/// Every bit of M is sent and every bit arrives.
inline bool verify_complete(const DemandMatrix& M, const TrafficSchedule& T, double tau = 1e-9) {
    DemandMatrix sent = served_demand(T);
    DemandMatrix got = arrived_demand(T);
    for (int i = 0; i < M.n(); ++i)
        for (int j = 0; j < M.n(); ++j)
            if (std::abs(sent.at(i, j) - M.at(i, j)) > tau ||
                std::abs(got.at(i, j) - M.at(i, j)) > tau)
                return false;
    return true;
}

/// All of M except a Frobenius mass of at most eps is served.
inline bool verify_epsilon(const DemandMatrix& M, const TrafficSchedule& T, double eps) {
    return frobenius_diff(M, served_demand(T)) <= eps;
}

/// Fraction of demand bits delivered over a single hop. Two-hop bits appear
/// in both hop lists, so each pair counts once toward the denominator.
inline double skewness(const TrafficSchedule& T) {
    double wdl = 0, wh1 = 0, wh2 = 0;
    for (const auto& e : T.dl) wdl += e.w;
    for (const auto& e : T.h1) wh1 += e.w;
    for (const auto& e : T.h2) wh2 += e.w;
    const double denom = wdl + 0.5 * (wh1 + wh2);
    if (denom <= 0) throw EmptySchedule();
    return wdl / denom;
}

inline nlohmann::json to_json(const TopologySchedule& S, const TrafficSchedule& T) {
    nlohmann::json j;
    j["topology"] = nlohmann::json::array();
    for (const auto& s : S.slots)
        j["topology"].push_back({{"pi", s.config.map}, {"alpha", s.alpha}, {"R", s.R}});
    nlohmann::json dl = nlohmann::json::array(), h1 = nlohmann::json::array(),
                   h2 = nlohmann::json::array();
    for (const auto& e : T.dl) dl.push_back({e.slot, e.s, e.d, e.w});
    for (const auto& e : T.h1) h1.push_back({e.slot, e.s, e.d, e.relay, e.w});
    for (const auto& e : T.h2) h2.push_back({e.slot, e.s, e.d, e.relay, e.w});
    j["traffic"] = {{"dl", dl}, {"h1", h1}, {"h2", h2}};
    return j;
}

inline std::pair<TopologySchedule, TrafficSchedule> schedule_from_json(const nlohmann::json& j) {
    TopologySchedule S;
    for (const auto& s : j.at("topology")) {
        TopologySlot slot;
        slot.config = Permutation(s.at("pi").get<std::vector<int>>());
        slot.alpha = s.at("alpha").get<double>();
        slot.R = s.at("R").get<double>();
        S.slots.push_back(std::move(slot));
    }
    if (S.slots.empty()) throw std::runtime_error("schedule json: empty topology");
    S.n = S.slots.front().config.n();
    TrafficSchedule T;
    T.n = S.n;
    T.num_slots = static_cast<int>(S.size());
    for (const auto& e : j.at("traffic").at("dl"))
        T.dl.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                        e.at(3).get<double>()});
    for (const auto& e : j.at("traffic").at("h1"))
        T.h1.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                        e.at(3).get<int>(), e.at(4).get<double>()});
    for (const auto& e : j.at("traffic").at("h2"))
        T.h2.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                        e.at(3).get<int>(), e.at(4).get<double>()});
    return {std::move(S), std::move(T)};
}

}  // namespace rdcn
