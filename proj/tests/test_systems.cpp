#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "rdcn/analytics.hpp"
#include "rdcn/matrix.hpp"
#include "rdcn/systems.hpp"
#include "rdcn/traffic_gen.hpp"

using namespace rdcn;

namespace {

DemandMatrix random_ds(int n, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DemandMatrix M(n);
    for (int t = 0; t < k; ++t) {
        auto p = rdcn::detail::random_derangement(n, rng);
        for (int i = 0; i < n; ++i) M.add(i, p[i], 1.0 / k);
    }
    return M;
}

void check_result(const DemandMatrix& M, const ScheduleResult& res, const SystemConfig& cfg,
                  double complete_tol) {
    INFO(res.label);
    CHECK(res.claimed_dct == Catch::Approx(completion_time(res.topology)).margin(1e-9));
    auto rep = verify_feasible(res.topology, res.traffic, cfg.r);
    INFO(rep.detail);
    CHECK(rep.ok);
    CHECK(verify_complete(M, res.traffic, complete_tol));
}

}  // namespace

TEST_CASE("rotor cycle covers the complete graph") {
    for (int n : {4, 5, 9, 16}) {
        auto cfgs = rr_cycle_configurations(n);
        REQUIRE(cfgs.size() == static_cast<size_t>(n - 1));
        std::set<std::pair<int, int>> links;
        for (const auto& p : cfgs) {
            CHECK(p.is_derangement());
            for (int k = 0; k < n; ++k) links.insert({k, p[k]});
        }
        CHECK(links.size() == static_cast<size_t>(n) * (n - 1));
    }
}

TEST_CASE("demand-aware direct scheduling") {
    SECTION("one reconfiguration per decomposition term") {
        SystemConfig cfg{.n = 16, .R_b = 0.02, .eps = 1e-9};
        for (int v : {1, 4, 15}) {
            auto M = make_mv(16, v, 50 + v);
            auto res = schedule_bvn_direct(M, cfg);
            CHECK(res.claimed_dct == Catch::Approx(1.0 + v * cfg.R_b).margin(1e-9));
            check_result(M, res, cfg, 1e-9);
        }
    }
    SECTION("single permutation costs 1 + R_b") {
        SystemConfig cfg{.n = 8, .R_b = 0.1, .eps = 1e-9};
        auto res = schedule_bvn_direct(from_permutation(cyclic_shift(8, 2)), cfg);
        CHECK(res.claimed_dct == Catch::Approx(1.1).margin(1e-12));
    }
    SECTION("uniform matrix at n=64") {
        SystemConfig cfg{.n = 64, .R_b = 0.015, .eps = 1e-9};
        auto res = schedule_bvn_direct(make_uniform(64), cfg);
        CHECK(res.claimed_dct == Catch::Approx(1.945).margin(1e-6));
    }
}

TEST_CASE("rotor direct scheduling") {
    SECTION("uniform demand is the rotor sweet spot") {
        SystemConfig cfg{.n = 16};
        auto M = make_uniform(16);
        auto res = schedule_rr_direct(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(1.0).margin(1e-12));
        check_result(M, res, cfg, 1e-12);
    }
    SECTION("a permutation wastes almost the whole cycle") {
        SystemConfig cfg{.n = 64};
        auto res = schedule_rr_direct(from_permutation(cyclic_shift(64, 7)), cfg);
        CHECK(res.claimed_dct == Catch::Approx(63.0).margin(1e-12));
    }
    SECTION("v disjoint derangements") {
        SystemConfig cfg{.n = 12};
        for (int v : {1, 3, 6, 11}) {
            auto res = schedule_rr_direct(make_mv(12, v, 3), cfg);
            CHECK(res.claimed_dct == Catch::Approx(11.0 / v).margin(1e-12));
        }
    }
    SECTION("duty cycle scales completion linearly") {
        SystemConfig cfg{.n = 12, .eta = 0.8};
        auto M = make_mv(12, 4, 3);
        auto res = schedule_rr_direct(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(11.0 / 4 / 0.8).margin(1e-9));
        check_result(M, res, cfg, 1e-12);
    }
    SECTION("quantized cycles round up") {
        SystemConfig cfg{.n = 6, .delta = 0.1, .quantize = true};
        DemandMatrix M(6);
        M.at(0, 1) = 0.25;  // needs ceil(0.25 / 0.1) = 3 cycles
        auto res = schedule_rr_direct(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(5 * 3 * 0.1).margin(1e-12));
        CHECK(verify_feasible(res.topology, res.traffic, cfg.r).ok);
        CHECK(verify_complete(M, res.traffic, 1e-12));
    }
}

TEST_CASE("rotor single-permutation pass") {
    SECTION("saturated permutation at n=64") {
        SystemConfig cfg{.n = 64};
        auto M = from_permutation(cyclic_shift(64, 5));
        auto res = schedule_rr_oneperm(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(2.0 - 2.0 / 64).margin(1e-12));
        check_result(M, res, cfg, 1e-12);
    }
    SECTION("completion scales with the permutation weight") {
        SystemConfig cfg{.n = 16};
        auto P = cyclic_shift(16, 3);
        const double full = schedule_rr_oneperm(from_permutation(P), cfg).claimed_dct;
        const double scaled = schedule_rr_oneperm(from_permutation(P, 0.3), cfg).claimed_dct;
        CHECK(scaled == Catch::Approx(0.3 * full).margin(1e-12));
    }
    SECTION("rejects non-derangements") {
        SystemConfig cfg{.n = 4};
        DemandMatrix M(4);
        M.at(0, 1) = M.at(1, 0) = 1.0;  // rows 2,3 empty
        CHECK_THROWS_AS(schedule_rr_oneperm(M, cfg), NotDerangement);
        CHECK_THROWS_AS(schedule_rr_oneperm(make_mv(4, 2, 1), cfg), NotDerangement);
    }
}

TEST_CASE("rotor multi-pass scheduling") {
    SECTION("any saturated matrix lands at the same completion") {
        SystemConfig cfg{.n = 64, .eps = 1e-9};
        auto M = random_ds(64, 10, 5);
        auto res = schedule_rr_mulp(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(2.0 - 2.0 / 64).margin(1e-9));
        check_result(M, res, cfg, 1e-9);
    }
    SECTION("a single permutation degenerates to the one-pass schedule") {
        SystemConfig cfg{.n = 8, .eps = 1e-9};
        auto M = from_permutation(cyclic_shift(8, 3));
        CHECK(schedule_rr_mulp(M, cfg).claimed_dct ==
              Catch::Approx(schedule_rr_oneperm(M, cfg).claimed_dct).margin(1e-12));
    }
    SECTION("two derangements at n=5") {
        SystemConfig cfg{.n = 5, .eps = 1e-9};
        auto M = make_mv(5, 2, 9);
        auto res = schedule_rr_mulp(M, cfg);
        CHECK(res.claimed_dct == Catch::Approx(1.6).margin(1e-9));
        check_result(M, res, cfg, 1e-9);
    }
}

TEST_CASE("best rotor strategy picks the cheaper branch") {
    const int n = 16;
    SystemConfig cfg{.n = n, .eps = 1e-9};
    for (int v = 1; v < n; ++v) {
        auto M = make_mv(n, v, 70 + v);
        auto res = rr_upper(M, cfg);
        const double expected =
            v < n / 2 ? 2.0 - 2.0 / n : static_cast<double>(n - 1) / v;
        CHECK(res.claimed_dct == Catch::Approx(expected).margin(1e-9));
        check_result(M, res, cfg, 1e-9);
    }
    auto res = rr_upper(make_uniform(n), cfg);
    CHECK(res.claimed_dct == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("composite split scheduling") {
    SECTION("degenerates to the better whole-matrix choice on disjoint families") {
        SystemConfig cfg{.n = 16, .R_b = 0.05, .eps = 1e-9};
        for (int v = 1; v < 16; ++v) {
            auto M = make_mv(16, v, 90 + v);
            auto d = decompose(M, cfg.eps);
            const double whole_min =
                std::min(plan_bvn_direct(d, cfg), plan_rr_upper(M, cfg));
            auto res = pivot(M, cfg);
            CHECK(res.claimed_dct == Catch::Approx(whole_min).margin(1e-9));
            check_result(M, res, cfg, 1e-9);
        }
    }
    SECTION("never worse than either pure system") {
        std::mt19937_64 rng(4);
        SystemConfig cfg{.n = 12, .R_b = 0.03, .eps = 1e-9};
        for (int trial = 0; trial < 100; ++trial) {
            auto M = random_ds(12, 1 + static_cast<int>(rng() % 12), rng());
            auto d = decompose(M, cfg.eps);
            const double dct = plan_pivot(d, cfg).dct;
            CHECK(dct <= plan_bvn_direct(d, cfg) + 1e-12);
            CHECK(dct <= plan_rr_upper(M, cfg) + 1e-12);
        }
    }
    SECTION("mixed split verifies end to end") {
        // Skewed but exactly doubly stochastic: heavy terms go demand-aware,
        // light ones ride the rotor.
        SystemConfig cfg{.n = 10, .R_b = 0.02, .eps = 1e-9};
        DemandMatrix M(10);
        auto heavy = cyclic_shift(10, 1);
        for (int k = 0; k < 10; ++k) M.add(k, heavy[k], 0.6);
        for (int s = 2; s < 10; ++s) {
            auto p = cyclic_shift(10, s);
            for (int k = 0; k < 10; ++k) M.add(k, p[k], 0.05);
        }
        REQUIRE(is_doubly_stochastic(M, 1e-9));
        auto res = pivot(M, cfg);
        REQUIRE(res.pivot_index.has_value());
        CHECK(*res.pivot_index > 0);
        CHECK(static_cast<size_t>(*res.pivot_index) < decompose(M, cfg.eps).size());
        check_result(M, res, cfg, 1e-9);
    }
}

TEST_CASE("uniform-component peeling") {
    SystemConfig cfg{.n = 16, .R_b = 0.05, .eps = 1e-9};
    SECTION("mixed family splits into its parts") {
        auto M = make_mvu(16, 3, 0.4, 11);
        auto res = pivot_plus(M, cfg);
        REQUIRE(res.extracted_uniform.has_value());
        CHECK(*res.extracted_uniform == Catch::Approx(0.4 / 15).margin(1e-12));
        check_result(M, res, cfg, 1e-9);
    }
    SECTION("no uniform component means plain composite behavior") {
        auto M = make_mv(16, 3, 11);
        CHECK(pivot_plus(M, cfg).claimed_dct ==
              Catch::Approx(pivot(M, cfg).claimed_dct).margin(1e-12));
        CHECK(rr_upper_plus(M, cfg).claimed_dct ==
              Catch::Approx(rr_upper(M, cfg).claimed_dct).margin(1e-12));
    }
    SECTION("mixing toward uniform never hurts") {
        for (int v : {2, 5, 9, 15}) {
            const double base = plan_pivot_plus(make_mvu(16, v, 0.0, 7), cfg);
            for (double u : {0.1, 0.5, 0.9, 1.0}) {
                CHECK(plan_pivot_plus(make_mvu(16, v, u, 7), cfg) <= base + 1e-9);
                CHECK(plan_rr_upper_plus(make_mvu(16, v, u, 7), cfg) <=
                      plan_rr_upper_plus(make_mvu(16, v, 0.0, 7), cfg) + 1e-9);
            }
        }
    }
}

TEST_CASE("scheduler dispatch by label") {
    SystemConfig cfg{.n = 8, .R_b = 0.01, .eps = 1e-9};
    auto M = make_mv(8, 2, 1);
    for (const char* label : {"bvn-direct", "rr-direct", "rr-mulp", "rr-upper", "comp-pivot",
                              "comp-pivot-plus"}) {
        auto res = run_system(label, M, cfg);
        check_result(M, res, cfg, 1e-9);
    }
    CHECK(run_system("rr-oneperm", from_permutation(cyclic_shift(8, 1)), cfg).claimed_dct > 0);
    CHECK_THROWS_AS(run_system("nope", M, cfg), std::invalid_argument);
}

TEST_CASE("claimed completion matches analytic forms across schedulers") {
    SystemConfig cfg{.n = 32, .eta = 0.9, .eps = 1e-9};
    auto M = random_ds(32, 6, 8);
    CHECK(schedule_rr_mulp(M, cfg).claimed_dct ==
          Catch::Approx(dct_rr_mulp(32, weight(M), cfg.eta)).margin(1e-9));
    CHECK(schedule_rr_direct(M, cfg).claimed_dct ==
          Catch::Approx(dct_rr_direct(32, max_entry(M), cfg.eta)).margin(1e-9));
    CHECK(rr_upper(M, cfg).claimed_dct ==
          Catch::Approx(dct_rr_upper(32, weight(M), max_entry(M), cfg.eta)).margin(1e-9));
}
