// fchosim_main.cpp - Command line front end.
//
//   fchosim init-config [--out config.json]
//   fchosim simulate --config config.json [--policy policy.csv] [--seed N] [--out DIR]
//   fchosim derive-policy --log events.log --approach NAME --out policy.csv
//   fchosim campaign --figure {5,6,9,10} --out DIR [--seeds N] [--paper-scale]

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "fchosim/campaign.hpp"
#include "fchosim/config.hpp"
#include "fchosim/mro.hpp"
#include "fchosim/sim.hpp"

int main(int argc, char** argv) {
    CLI::App app{"FR2 mobility simulator: conditional handover with hand blockage"};
    app.require_subcommand(1);

    // init-config
    auto* init = app.add_subcommand("init-config", "write a config with full defaults");
    std::string init_out = "config.json";
    init->add_option("--out", init_out, "output path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one scenario");
    std::string sim_config;
    std::string sim_policy;
    std::string sim_out = "out";
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    sim->add_option("--config", sim_config, "scenario config (json)")->required();
    sim->add_option("--policy", sim_policy, "optimization policy csv");
    auto* seed_opt = sim->add_option("--seed", sim_seed, "override the config seed");
    sim->add_option("--out", sim_out, "output directory");
    int sim_trace_ue = -1;
    std::string sim_large_scale;
    sim->add_option("--trace-ue", sim_trace_ue,
                    "dump an RSRP/SINR trace (trace_ue.csv) for this UE id");
    sim->add_option("--dump-large-scale", sim_large_scale,
                    "write the per-link path-loss/shadow map to this csv");

    // derive-policy
    auto* derive = app.add_subcommand("derive-policy",
                                      "derive an optimization policy from an event log");
    std::string dp_log, dp_out, dp_h_out;
    std::string dp_approach = "blocklist";
    int dp_cells = 21;
    fchosim::PolicyThresholds th;
    derive->add_option("--log", dp_log, "training events.log")->required();
    derive->add_option("--approach", dp_approach,
                       "none | blocklist | offset-reduction | combined");
    derive->add_option("--out", dp_out, "policy csv path")->required();
    derive->add_option("--h-out", dp_h_out, "also write the H matrix csv");
    derive->add_option("--num-cells", dp_cells, "cell count of the layout");
    derive->add_option("--p-block", th.p_block, "block-listing probability threshold");
    derive->add_option("--p-reduce", th.p_reduce, "offset-reduction probability threshold");
    derive->add_option("--offset-db", th.base_offset_db, "default preparation offset");
    derive->add_option("--reduced-offset-db", th.reduced_offset_db,
                       "reduced preparation offset");

    // campaign
    auto* camp = app.add_subcommand("campaign", "run a figure-style experiment grid");
    fchosim::CampaignOptions opts;
    camp->add_option("--figure", opts.figure, "5, 6, 9 or 10")->required();
    camp->add_option("--seeds", opts.seeds, "seeds per series");
    camp->add_option("--seed-base", opts.seed_base, "first evaluation seed");
    camp->add_option("--out", opts.out_dir, "output directory")->required();
    camp->add_flag("--paper-scale", opts.paper_scale, "420 UEs / 30 s instead of desk scale");
    camp->add_option("--workers", opts.workers, "worker threads per run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*init) {
            fchosim::ScenarioConfig config;
            config.validate();
            config.save(init_out);
            std::printf("wrote %s\n", init_out.c_str());
        } else if (*sim) {
            fchosim::ScenarioConfig config = fchosim::ScenarioConfig::load(sim_config);
            if (!sim_policy.empty()) config.policy_file = sim_policy;
            sim_seed_set = seed_opt->count() > 0;
            if (sim_seed_set) config.seed = sim_seed;
            config.validate();
            fchosim::TraceOptions trace;
            trace.trace_ue = sim_trace_ue;
            fchosim::SimResult result = fchosim::run_scenario(config, nullptr, &trace);
            fchosim::write_run_outputs(result, sim_out);
            if (sim_trace_ue >= 0) {
                std::ofstream os(std::filesystem::path(sim_out) / "trace_ue.csv");
                os << result.trace_csv;
            }
            if (!sim_large_scale.empty()) {
                std::ofstream os(sim_large_scale);
                os << fchosim::large_scale_map_csv(config);
            }
            std::printf("%s\n%s\n", fchosim::KpiSummary::csv_header().c_str(),
                        result.summary.csv_row().c_str());
        } else if (*derive) {
            auto events = fchosim::read_event_log_file(dp_log);
            auto h = fchosim::build_h(events, dp_cells);
            auto policy = fchosim::derive_policy(
                h, fchosim::approach_from_string(dp_approach), th);
            fchosim::save_policy_csv(policy, dp_out);
            if (!dp_h_out.empty()) fchosim::save_h_csv(h, dp_h_out);
            std::printf("wrote %s\n", dp_out.c_str());
        } else if (*camp) {
            auto rows = fchosim::run_campaign(opts);
            std::printf("campaign figure %d: %zu series -> %s/plotdata_fig%d.csv\n",
                        opts.figure, rows.size(), opts.out_dir.c_str(), opts.figure);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
