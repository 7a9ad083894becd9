#pragma once

// A hand-built 5-node schedule for a two-derangement demand matrix that
// completes in 4/3 time units, below the generic rotor multi-pass cost of
// 1.6. Two rotor cycles at slot length 1/6: every demand cell sends 1/6
// directly in each cycle, and 1/6 through one hand-picked relay (first hop
// in cycle one, second hop in cycle two). Each cycle loads every link with
// exactly 1/6, and the relay choices below are collision free.

#include <array>

#include "rdcn/matrix.hpp"
#include "rdcn/schedule.hpp"
#include "rdcn/systems.hpp"

namespace rdcn::fixtures {

inline constexpr std::array<int, 5> kP1{1, 0, 3, 4, 2};
inline constexpr std::array<int, 5> kP2{2, 3, 4, 1, 0};

/// The demand matrix: half a unit on each cell of the two derangements.
inline DemandMatrix two_perm_demand() {
    DemandMatrix M(5);
    for (int k = 0; k < 5; ++k) {
        M.add(k, kP1[k], 0.5);
        M.add(k, kP2[k], 0.5);
    }
    return M;
}

struct RelayChoice {
    int s, d, q;
};

inline constexpr std::array<RelayChoice, 10> kRelays{{{0, 1, 4},
                                                      {0, 2, 3},
                                                      {1, 0, 2},
                                                      {1, 3, 4},
                                                      {2, 3, 0},
                                                      {2, 4, 1},
                                                      {3, 1, 2},
                                                      {3, 4, 0},
                                                      {4, 0, 3},
                                                      {4, 2, 1}}};

inline std::pair<TopologySchedule, TrafficSchedule> two_perm_schedule() {
    constexpr int n = 5;
    constexpr double w = 1.0 / 6.0;

    TopologySchedule S;
    S.n = n;
    detail::append_rr_cycle(S, n, w, 1.0);
    detail::append_rr_cycle(S, n, w, 1.0);

    TrafficSchedule T;
    T.n = n;
    T.num_slots = static_cast<int>(S.size());
    const int c2 = n - 1;
    for (const auto& [s, d, q] : kRelays) {
        T.dl.push_back({detail::rr_slot_of_link(n, s, d), s, d, w});
        T.dl.push_back({c2 + detail::rr_slot_of_link(n, s, d), s, d, w});
        T.h1.push_back({detail::rr_slot_of_link(n, s, q), s, d, q, w});
        T.h2.push_back({c2 + detail::rr_slot_of_link(n, q, d), s, d, q, w});
    }
    return {std::move(S), std::move(T)};
}

}  // namespace rdcn::fixtures
