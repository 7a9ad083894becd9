#include <catch2/catch_amalgamated.hpp>

#include "rdcn/matrix.hpp"
#include "rdcn/traffic_gen.hpp"

using namespace rdcn;

TEST_CASE("generated demand is doubly stochastic with a zero diagonal") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto M = generate_tm({.t_l = 0.2, .n_f = 64, .c_l = 0.7, .n = 32, .seed = seed});
        CHECK(is_doubly_stochastic(M, 1e-6));
        for (int i = 0; i < 32; ++i) CHECK(M.at(i, i) == 0.0);
        CHECK(weight(M) == Catch::Approx(32.0).margin(1e-4));
    }
}

TEST_CASE("all-large noiseless flows weigh exactly 1/n_f") {
    auto M = generate_tm(
        {.t_l = 1.0, .n_f = 10, .c_l = 1.0, .n = 12, .lambda_noise = 0.0, .seed = 5});
    CHECK(is_doubly_stochastic(M, 1e-9));
    for (double c : M.data()) {
        if (c == 0.0) continue;
        // Cells are multiples of 1/10 wherever flows stack.
        CHECK(std::abs(c * 10 - std::round(c * 10)) < 1e-9);
    }
}

TEST_CASE("noiseless weight before rescaling is the node count") {
    // With no noise the flow weights add up to one per node by construction,
    // so the rescaling pass has nothing to fix.
    auto a = generate_tm(
        {.t_l = 0.25, .n_f = 16, .c_l = 0.6, .n = 10, .lambda_noise = 0.0, .seed = 7});
    CHECK(weight(a) == Catch::Approx(10.0).margin(1e-9));
}

TEST_CASE("more flows spread the load") {
    // Averaged over seeds, both the empty-cell fraction and the largest cell
    // shrink as the flow count grows.
    double sparsity_few = 0, sparsity_many = 0, max_few = 0, max_many = 0;
    const int reps = 30;
    for (int s = 0; s < reps; ++s) {
        auto few = metrics(generate_tm({.t_l = 0.2, .n_f = 16, .c_l = 0.7, .n = 32,
                                        .seed = 100u + static_cast<unsigned>(s)}));
        auto many = metrics(generate_tm({.t_l = 0.2, .n_f = 256, .c_l = 0.7, .n = 32,
                                         .seed = 100u + static_cast<unsigned>(s)}));
        sparsity_few += few.sparsity;
        sparsity_many += many.sparsity;
        max_few += few.max_entry;
        max_many += many.max_entry;
    }
    CHECK(sparsity_many < sparsity_few);
    CHECK(max_many < max_few);
}

TEST_CASE("deterministic per seed, distinct across seeds") {
    TmParams p{.t_l = 0.2, .n_f = 64, .c_l = 0.7, .n = 16, .seed = 9};
    CHECK(generate_tm(p) == generate_tm(p));
    TmParams q = p;
    q.seed = 10;
    CHECK_FALSE(generate_tm(p) == generate_tm(q));
}

TEST_CASE("literal weight mode changes the heavy/light split") {
    TmParams p{.t_l = 0.2, .n_f = 20, .c_l = 0.7, .n = 16, .lambda_noise = 0.0, .seed = 1};
    TmParams lit = p;
    lit.literal_weights = true;
    CHECK_FALSE(generate_tm(p) == generate_tm(lit));
    CHECK(is_doubly_stochastic(generate_tm(lit), 1e-6));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate_tm({.t_l = 1.5, .n_f = 10, .c_l = 0.5, .n = 8}), InvalidParams);
    CHECK_THROWS_AS(generate_tm({.t_l = 0.5, .n_f = 0, .c_l = 0.5, .n = 8}), InvalidParams);
    // Every flow rounds up to "large": no small flows left to carry 1 - c_l.
    CHECK_THROWS_AS(generate_tm({.t_l = 0.95, .n_f = 10, .c_l = 0.5, .n = 8}), InvalidParams);
}
