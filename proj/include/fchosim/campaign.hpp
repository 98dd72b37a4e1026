// campaign.hpp - Multi-run experiment grids and per-figure CSV emission.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/kpi.hpp"

namespace fchosim {

struct CampaignOptions {
    int figure = 5;        // 5, 6, 9 or 10
    int seeds = 5;
    std::uint64_t seed_base = 1;
    bool paper_scale = false;  // 420 UEs / 30 s instead of 105 UEs / 10 s
    std::string out_dir = ".";
    int workers = 1;
};

struct CampaignRow {
    std::string series;    // e.g. "fcho", "fcho+blocklist", "n_max=2"
    std::string mode;
    std::string blockage_case;
    double speed_kmh = 0;
    int runs_ok = 0;
    int runs_failed = 0;
    // mean / stdev over seeds
    double ho_mean = 0, ho_std = 0;
    double fast_mean = 0, fast_std = 0;
    double fail_mean = 0, fail_std = 0;
    double outage_mean = 0, outage_std = 0;
    double signaling_mean = 0, signaling_std = 0;
    double prep_mean = 0, rel_mean = 0, rep_mean = 0;
    double res_median_mean = 0, res_p95_mean = 0, res_norm_mean = 0;
};

// Applies desk/paper scale to a base config.
ScenarioConfig campaign_base_config(const CampaignOptions& options);

// Runs the requested figure grid; per-run failures are recorded and the
// campaign continues. Writes plotdata_fig<N>.csv plus kpi_summary.csv rows
// for every run into out_dir.
std::vector<CampaignRow> run_campaign(const CampaignOptions& options);

}  // namespace fchosim
