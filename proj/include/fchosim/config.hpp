// config.hpp - Scenario configuration schema, JSON (de)serialization, validation.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fchosim {

enum class Mode { kCho, kFcho };
enum class BlockageCase { kI, kII, kIII, kIV, kV, kVI };
enum class SinrMode { kExpectation, kSampled };
enum class BlockageModel { kParametric, kStochastic3gpp };

const char* to_string(Mode m);
const char* to_string(BlockageCase c);
Mode mode_from_string(const std::string& s);
BlockageCase case_from_string(const std::string& s);

struct ShadowConfig {
    bool enabled = true;
    double sigma_db = 4.0;
    double corr_dist_m = 13.0;
    double grid_res_m = 2.0;
};

struct FadingConfig {
    bool enabled = true;
    int num_oscillators = 16;
};

struct StochasticRegionConfig {
    double azimuth_deg = 260.0;   // blocker orientation, portrait mode
    double azimuth_span_deg = 120.0;
    double zenith_deg = 100.0;
    double zenith_span_deg = 80.0;
    double loss_db = 30.0;
};

struct ScenarioConfig {
    std::string scenario_id = "run";

    // Deployment
    double carrier_ghz = 28.0;
    double bandwidth_mhz = 100.0;
    double tx_power_dbm = 40.0;
    double bs_height_m = 10.0;
    double ue_height_m = 1.5;
    double inter_site_distance_m = 200.0;
    int num_sites = 7;

    // Population / timing
    int num_ues = 420;
    double ue_speed_kmh = 120.0;
    double sim_time_s = 30.0;
    std::int64_t time_step_ms = 10;
    std::int64_t ssb_period_ms = 20;
    double run_scale = 1.0;  // scales num_ues and sim_time_s together

    // Scheduler / SINR
    int scheduled_beams_per_cell = 4;  // K_b
    SinrMode sinr_mode = SinrMode::kExpectation;
    double noise_figure_db = 9.0;

    // CHO signaling
    Mode mode = Mode::kFcho;
    double o_prep_db = 10.0;
    double o_exec_db = 3.0;
    double o_rel_db = 13.0;
    double o_rep_db = 3.0;
    std::int64_t t_prep_ms = 80;
    std::int64_t t_exec_ms = 80;
    std::int64_t t_rel_ms = 80;
    std::int64_t t_rep_ms = 80;
    int max_prepared_cells = 4;  // n_u^max
    std::int64_t prep_latency_ms = 200;

    // Failure models
    double gamma_out_db = -8.0;
    double gamma_in_db = -6.0;
    std::int64_t t_hof_ms = 200;
    std::int64_t t_rlf_ms = 1000;
    std::int64_t rach_period_ms = 20;
    std::int64_t bfr_window_ms = 60;
    std::int64_t rlm_window_ms = 200;
    std::int64_t ho_outage_ms = 55;
    std::int64_t reest_outage_ms = 180;

    // Measurement
    double l3_filter_coeff = 0.5;
    double panel_hysteresis_db = 1.0;

    // KPI
    double fast_ho_window_s = 1.0;  // T_FH

    // Blockage
    BlockageCase blockage_case = BlockageCase::kII;
    BlockageModel blockage_model = BlockageModel::kParametric;
    double p1_boresight_loss_db = 18.66;  // thumb on P1
    double p3_boresight_loss_db = 5.28;   // middle finger on P3
    double overlay_half_width_deg = 60.0;
    // The fingers wrap the edges from behind the handset, so each shadow
    // core sits rearward of the panel boresight; the boresight losses above
    // stay the anchors. The thumb lies nearly parallel to P1 (small offset),
    // the middle finger crosses P3 at a visible angle (larger offset).
    double p1_lobe_offset_deg = -10.0;
    double p3_lobe_offset_deg = -45.0;
    double case1_penalty_db = 1.0;
    StochasticRegionConfig stochastic_region;
    // Optional tabulated overlays (CSV az,el,attenuation) per panel, overriding
    // the parametric taper when non-empty. Indexed P1, P2, P3.
    std::vector<std::string> overlay_csv = {"", "", ""};

    // Channel
    ShadowConfig shadow;
    FadingConfig fading;

    // Policy / reproducibility
    std::string policy_file;
    std::uint64_t seed = 1;
    int workers = 1;
    bool check_invariants = true;

    // Derived quantities ------------------------------------------------
    double ue_speed_mps() const { return ue_speed_kmh / 3.6; }
    int effective_num_ues() const;
    std::int64_t effective_sim_time_ms() const;
    double noise_dbm() const;          // thermal + figure over the system bandwidth
    double wavelength_m() const { return 299792458.0 / (carrier_ghz * 1e9); }
    double doppler_hz() const { return ue_speed_mps() / wavelength_m(); }

    // Throws std::invalid_argument listing every offending field.
    void validate() const;

    std::string to_json() const;
    static ScenarioConfig from_json(const std::string& text);
    static ScenarioConfig load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace fchosim
