// Command line harness: generate demand matrices, decompose them, build and
// verify schedules, evaluate closed-form bounds and run parameter sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdcn/analytics.hpp"
#include "rdcn/decompose.hpp"
#include "rdcn/io.hpp"
#include "rdcn/matrix.hpp"
#include "rdcn/schedule.hpp"
#include "rdcn/systems.hpp"
#include "rdcn/traffic_gen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;

struct GlobalOpts {
    int n = 64;
    double rate = 1.0;
    double rb = 0.015;
    double rr = 0.0;
    double delta = 0.0;
    double eps = 1e-4;
    std::uint64_t seed = 0;
    int repeats = 30;
    bool quantize = false;
    bool literal = false;
    bool json = false;

    rdcn::SystemConfig system_config() const {
        rdcn::SystemConfig cfg;
        cfg.n = n;
        cfg.r = rate;
        cfg.R_b = rb;
        cfg.R_r = rr;
        cfg.delta = delta;
        cfg.eta = (rr > 0 && delta > 0) ? delta / (delta + rr) : 1.0;
        cfg.eps = eps;
        cfg.quantize = quantize;
        return cfg;
    }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    return file;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

// ---------------------------------------------------------------------------

int cmd_gen(const GlobalOpts& g, const std::string& family, int v, double u, int flows,
            double tl, double cl, const std::string& out_path) {
    rdcn::DemandMatrix M(std::max(g.n, 2));
    if (family == "mv") {
        M = rdcn::make_mv(g.n, v, g.seed);
    } else if (family == "mvu") {
        M = rdcn::make_mvu(g.n, v, u, g.seed);
    } else if (family == "tm") {
        M = rdcn::generate_tm({.t_l = tl, .n_f = flows, .c_l = cl, .n = g.n,
                               .seed = g.seed, .literal_weights = g.literal});
    } else if (family == "perm") {
        std::mt19937_64 rng(g.seed);
        M = rdcn::from_permutation(rdcn::detail::random_derangement(g.n, rng));
    } else if (family == "uniform") {
        M = rdcn::make_uniform(g.n);
    } else {
        throw CLI::ValidationError("--family", "unknown family " + family);
    }
    std::ofstream file;
    rdcn::write_matrix_csv(open_out(file, out_path), M);
    return kExitOk;
}

int cmd_decompose(const GlobalOpts& g, const std::string& matrix_path,
                  const std::string& strategy, const std::string& out_path) {
    auto M = rdcn::read_matrix_csv(matrix_path);
    auto strat = strategy == "min-greedy" ? rdcn::MatchStrategy::MinGreedy
                                          : rdcn::MatchStrategy::MaxBottleneck;
    auto d = rdcn::decompose(M, g.eps, strat);
    std::ofstream file;
    open_out(file, out_path) << rdcn::to_json(d).dump(g.json ? -1 : 2) << "\n";
    return kExitOk;
}

int cmd_schedule(const GlobalOpts& g, const std::string& system, const std::string& matrix_path,
                 const std::string& out_path) {
    auto M = rdcn::read_matrix_csv(matrix_path);
    auto cfg = g.system_config();
    cfg.n = M.n();
    auto res = rdcn::run_system(system, M, cfg);

    const double simulated = rdcn::completion_time(res.topology);
    auto rep = rdcn::verify_feasible(res.topology, res.traffic, cfg.r);
    const bool complete = rdcn::verify_complete(M, res.traffic, 1e-7);
    const bool within_eps = rdcn::verify_epsilon(M, res.traffic, cfg.eps);
    const bool ok = rep.ok && (complete || within_eps) &&
                    std::abs(simulated - res.claimed_dct) <= 1e-9;

    nlohmann::json report{{"system", res.label},
                          {"n", M.n()},
                          {"claimed_dct", res.claimed_dct},
                          {"simulated_dct", simulated},
                          {"throughput", simulated > 0 ? 1.0 / simulated : 0.0},
                          {"feasible", rep.ok},
                          {"complete", complete},
                          {"within_eps", within_eps}};
    if (!rep.ok) report["violation"] = rep.detail;
    if (res.pivot_index) report["pivot_index"] = *res.pivot_index;

    if (!out_path.empty()) {
        std::ofstream file;
        open_out(file, out_path) << rdcn::to_json(res.topology, res.traffic).dump() << "\n";
    }
    if (g.json) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << res.label << ": dct=" << fmt(simulated)
                  << " throughput=" << fmt(simulated > 0 ? 1.0 / simulated : 0.0)
                  << (ok ? " [verified]" : " [VERIFICATION FAILED]") << "\n";
        if (!rep.ok) std::cout << "  violation: " << rep.detail << "\n";
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const GlobalOpts& g, const std::string& matrix_path,
               const std::string& schedule_path) {
    auto M = rdcn::read_matrix_csv(matrix_path);
    std::ifstream f(schedule_path);
    if (!f) throw std::runtime_error("cannot open " + schedule_path);
    auto [S, T] = rdcn::schedule_from_json(nlohmann::json::parse(f));

    auto rep = rdcn::verify_feasible(S, T, g.rate);
    const bool complete = rdcn::verify_complete(M, T, 1e-7);
    const bool within_eps = rdcn::verify_epsilon(M, T, g.eps);
    const bool ok = rep.ok && (complete || within_eps);
    if (g.json) {
        nlohmann::json j{{"feasible", rep.ok},
                         {"complete", complete},
                         {"within_eps", within_eps},
                         {"dct", rdcn::completion_time(S)}};
        if (!rep.ok) {
            j["violated_property"] = rep.violated_property;
            j["violation"] = rep.detail;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (ok ? "OK" : "FAIL") << " dct=" << fmt(rdcn::completion_time(S))
                  << " feasible=" << rep.ok << " complete=" << complete << "\n";
        if (!rep.ok) std::cout << "  violation #" << rep.violated_property << ": " << rep.detail
                               << "\n";
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_bounds(const GlobalOpts& g) {
    nlohmann::json out = nlohmann::json::array();
    for (const char* sys : {"bvn", "rr", "comp"}) {
        auto wc = rdcn::system_dct_mvu(sys, g.n, g.rb);
        rdcn::BoundReport b;
        b.value = wc.dct;
        b.kind = rdcn::BoundKind::Exact;
        b.source = std::string("worst-case system completion (") + sys + ")";
        b.parameters = {{"n", g.n}, {"R_b", g.rb}, {"worst_v", wc.worst_v}, {"worst_u", wc.worst_u}};
        out.push_back(rdcn::to_json(b));
    }
    rdcn::BoundReport p;
    p.value = rdcn::psi(g.n, g.rb);
    p.source = "composite advantage ratio";
    p.parameters = {{"n", g.n}, {"R_b", g.rb}};
    out.push_back(rdcn::to_json(p));
    if (g.json) {
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& b : out)
            std::cout << b["source"].get<std::string>() << ": " << fmt(b["value"].get<double>())
                      << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
    double x;
    std::string system;
    std::vector<double> dcts;
    rdcn::MatrixMetrics mean_metrics{};
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_metrics) {
    out << "x,system,dct_mean,dct_std,throughput_mean";
    if (with_metrics) out << ",weight_mean,max_mean,sparsity_mean,variation_mean";
    out << "\n";
    for (const auto& row : rows) {
        const double k = static_cast<double>(row.dcts.size());
        const double mean = std::accumulate(row.dcts.begin(), row.dcts.end(), 0.0) / k;
        double var = 0, thr = 0;
        for (double d : row.dcts) {
            var += (d - mean) * (d - mean);
            thr += 1.0 / d;
        }
        const double sd = k > 1 ? std::sqrt(var / (k - 1)) : 0.0;
        out << fmt(row.x) << ',' << row.system << ',' << fmt(mean) << ',' << fmt(sd) << ','
            << fmt(thr / k);
        if (with_metrics)
            out << ',' << fmt(row.mean_metrics.weight) << ',' << fmt(row.mean_metrics.max_entry)
                << ',' << fmt(row.mean_metrics.sparsity) << ','
                << fmt(row.mean_metrics.variation_distance);
        out << "\n";
    }
}

void sweep_three_systems(const rdcn::DemandMatrix& M, const rdcn::SystemConfig& cfg,
                         double x, std::vector<SweepRow>& rows, size_t base) {
    auto d = rdcn::decompose(M, cfg.eps);
    rows[base + 0].dcts.push_back(rdcn::plan_bvn_direct(d, cfg));
    rows[base + 1].dcts.push_back(rdcn::plan_rr_upper(M, cfg));
    rows[base + 2].dcts.push_back(rdcn::plan_pivot(d, cfg).dct);
    for (size_t i = 0; i < 3; ++i) rows[base + i].x = x;
}

int cmd_sweep(const GlobalOpts& g, const std::string& experiment, const std::string& out_path) {
    std::vector<SweepRow> rows;
    bool with_metrics = false;
    auto cfg = g.system_config();
    const char* systems[] = {"bvn", "rr", "comp"};

    auto new_block = [&](double x) {
        const size_t base = rows.size();
        for (const char* s : systems) rows.push_back({x, s, {}, {}});
        return base;
    };

    if (experiment == "mv") {
        // Deterministic family: one evaluation per point.
        for (int v = 1; v < g.n; ++v) {
            const size_t base = new_block(v);
            auto M = rdcn::make_mv(g.n, v, g.seed + v);
            sweep_three_systems(M, cfg, v, rows, base);
        }
    } else if (experiment == "flows") {
        with_metrics = true;
        cfg.R_b = 0.01;
        for (int x = 4; x <= 4 * g.n * g.n; x *= 2) {
            const size_t base = new_block(x);
            rdcn::MatrixMetrics acc{};
            for (int rep = 0; rep < g.repeats; ++rep) {
                auto M = rdcn::generate_tm({.t_l = 0.2, .n_f = x, .c_l = 0.7, .n = g.n,
                                            .seed = g.seed + 1000u * rep + static_cast<unsigned>(x),
                                            .literal_weights = g.literal});
                auto m = rdcn::metrics(M);
                acc.weight += m.weight / g.repeats;
                acc.max_entry += m.max_entry / g.repeats;
                acc.sparsity += m.sparsity / g.repeats;
                acc.variation_distance += m.variation_distance / g.repeats;
                sweep_three_systems(M, cfg, x, rows, base);
            }
            for (size_t i = 0; i < 3; ++i) rows[base + i].mean_metrics = acc;
        }
    } else if (experiment.starts_with("cl-") || experiment.starts_with("tl-")) {
        cfg.R_b = 0.01;
        const bool dense = experiment.ends_with("-dense");
        if (!dense && !experiment.ends_with("-sparse"))
            throw CLI::ValidationError("--experiment", "unknown experiment " + experiment);
        const int flows = dense ? 3000 : 64;
        const bool vary_cl = experiment.starts_with("cl-");
        for (int step = 1; step <= 18; ++step) {
            const double val = 0.05 * step;
            const size_t base = new_block(val);
            for (int rep = 0; rep < g.repeats; ++rep) {
                auto M = rdcn::generate_tm({.t_l = vary_cl ? 0.2 : val,
                                            .n_f = flows,
                                            .c_l = vary_cl ? val : 0.7,
                                            .n = g.n,
                                            .seed = g.seed + 1000u * rep + 17u * step,
                                            .literal_weights = g.literal});
                sweep_three_systems(M, cfg, val, rows, base);
            }
        }
    } else {
        throw CLI::ValidationError("--experiment", "unknown experiment " + experiment);
    }

    std::ofstream file;
    write_sweep_csv(open_out(file, out_path), rows, with_metrics);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scheduling toolkit for reconfigurable networks"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--n", g.n, "node count")->capture_default_str();
    app.add_option("--rate", g.rate, "link rate")->capture_default_str();
    app.add_option("--rb", g.rb, "demand-aware reconfiguration time")->capture_default_str();
    app.add_option("--rr", g.rr, "rotor reconfiguration time")->capture_default_str();
    app.add_option("--delta", g.delta, "rotor slot length")->capture_default_str();
    app.add_option("--eps", g.eps, "decomposition residual cutoff")->capture_default_str();
    app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
    app.add_option("--repeats", g.repeats, "runs per sweep point")->capture_default_str();
    app.add_flag("--quantize", g.quantize, "round rotor cycles up to whole slots");
    app.add_flag("--literal", g.literal, "weight heavy flows by their count share");
    app.add_flag("--json", g.json, "machine readable output");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a demand matrix (CSV)");
    std::string family = "tm", out_path, matrix_path, schedule_path, system = "comp-pivot";
    std::string strategy = "max-bottleneck", experiment = "flows";
    int v = 1, flows = 64;
    double u = 0.0, tl = 0.2, cl = 0.7;
    gen->add_option("--family", family, "mv|mvu|tm|perm|uniform")->capture_default_str();
    gen->add_option("--v", v, "derangement count for mv/mvu");
    gen->add_option("--u", u, "uniform mix for mvu");
    gen->add_option("--flows", flows, "flows per node for tm");
    gen->add_option("--tl", tl, "fraction of large flows");
    gen->add_option("--cl", cl, "load share of large flows");
    gen->add_option("--out", out_path, "output path (default stdout)");

    auto* dec = app.add_subcommand("decompose", "decompose a matrix into matchings (JSON)");
    dec->add_option("--matrix", matrix_path, "matrix CSV")->required();
    dec->add_option("--strategy", strategy, "max-bottleneck|min-greedy")->capture_default_str();
    dec->add_option("--out", out_path, "output path (default stdout)");

    auto* sch = app.add_subcommand("schedule", "build and verify a schedule");
    sch->add_option("--system", system,
                    "bvn-direct|rr-direct|rr-oneperm|rr-mulp|rr-upper|comp-pivot|comp-pivot-plus")
        ->capture_default_str();
    sch->add_option("--matrix", matrix_path, "matrix CSV")->required();
    sch->add_option("--out", out_path, "write the schedule JSON here");

    auto* ver = app.add_subcommand("verify", "verify a schedule against a matrix");
    ver->add_option("--matrix", matrix_path, "matrix CSV")->required();
    ver->add_option("--schedule", schedule_path, "schedule JSON")->required();

    auto* bnd = app.add_subcommand("bounds", "closed-form worst-case values");

    auto* swp = app.add_subcommand("sweep", "run a parameter sweep (CSV)");
    swp->add_option("--experiment", experiment, "mv|flows|cl-sparse|cl-dense|tl-sparse|tl-dense")
        ->capture_default_str();
    swp->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(g, family, v, u, flows, tl, cl, out_path);
        if (dec->parsed()) return cmd_decompose(g, matrix_path, strategy, out_path);
        if (sch->parsed()) return cmd_schedule(g, system, matrix_path, out_path);
        if (ver->parsed()) return cmd_verify(g, matrix_path, schedule_path);
        if (bnd->parsed()) return cmd_bounds(g);
        if (swp->parsed()) return cmd_sweep(g, experiment, out_path);
        return kExitBadInput;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
