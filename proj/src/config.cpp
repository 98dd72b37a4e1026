// config.cpp - JSON schema binding and validation for ScenarioConfig.

#include "fchosim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fchosim {

using nlohmann::json;

const char* to_string(Mode m) { return m == Mode::kCho ? "cho" : "fcho"; }

const char* to_string(BlockageCase c) {
    switch (c) {
        case BlockageCase::kI: return "I";
        case BlockageCase::kII: return "II";
        case BlockageCase::kIII: return "III";
        case BlockageCase::kIV: return "IV";
        case BlockageCase::kV: return "V";
        case BlockageCase::kVI: return "VI";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "cho") return Mode::kCho;
    if (s == "fcho") return Mode::kFcho;
    throw std::invalid_argument("unknown mode: " + s);
}

BlockageCase case_from_string(const std::string& s) {
    if (s == "I") return BlockageCase::kI;
    if (s == "II") return BlockageCase::kII;
    if (s == "III") return BlockageCase::kIII;
    if (s == "IV") return BlockageCase::kIV;
    if (s == "V") return BlockageCase::kV;
    if (s == "VI") return BlockageCase::kVI;
    throw std::invalid_argument("unknown blockage case: " + s);
}

int ScenarioConfig::effective_num_ues() const {
    return std::max(1, static_cast<int>(std::lround(num_ues * run_scale)));
}

std::int64_t ScenarioConfig::effective_sim_time_ms() const {
    double ms = sim_time_s * run_scale * 1000.0;
    std::int64_t t = static_cast<std::int64_t>(std::llround(ms));
    // keep the run an integer number of steps
    return (t / time_step_ms) * time_step_ms;
}

double ScenarioConfig::noise_dbm() const {
    return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

void ScenarioConfig::validate() const {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    expect(inter_site_distance_m > 0, "inter_site_distance_m must be > 0");
    expect(num_sites == 1 || num_sites == 7, "num_sites must be 1 or 7");
    expect(num_ues >= 1, "num_ues must be >= 1");
    expect(run_scale > 0, "run_scale must be > 0");
    expect(sim_time_s >= 0, "sim_time_s must be >= 0");
    expect(time_step_ms > 0, "time_step_ms must be > 0");
    expect(ssb_period_ms > 0 && ssb_period_ms % time_step_ms == 0,
           "ssb_period_ms must be a positive multiple of time_step_ms");
    expect(scheduled_beams_per_cell >= 1 && scheduled_beams_per_cell <= 12,
           "scheduled_beams_per_cell must be in [1, 12]");
    expect(gamma_in_db > gamma_out_db, "gamma_in_db must be > gamma_out_db");
    expect(l3_filter_coeff > 0 && l3_filter_coeff <= 1.0,
           "l3_filter_coeff must be in (0, 1]");
    for (auto [t, name] : {std::pair{t_prep_ms, "t_prep_ms"}, {t_exec_ms, "t_exec_ms"},
                           {t_rel_ms, "t_rel_ms"}, {t_rep_ms, "t_rep_ms"}}) {
        expect(t > 0 && t % ssb_period_ms == 0,
               std::string(name) + " must be a positive multiple of ssb_period_ms");
    }
    expect(max_prepared_cells >= 1 && max_prepared_cells <= 8,
           "max_prepared_cells must be in [1, 8]");
    expect(prep_latency_ms >= 0, "prep_latency_ms must be >= 0");
    expect(t_hof_ms > 0, "t_hof_ms must be > 0");
    expect(t_rlf_ms > 0, "t_rlf_ms must be > 0");
    expect(rach_period_ms > 0 && rach_period_ms % time_step_ms == 0,
           "rach_period_ms must be a positive multiple of time_step_ms");
    expect(bfr_window_ms > 0, "bfr_window_ms must be > 0");
    expect(rlm_window_ms >= time_step_ms, "rlm_window_ms must be >= time_step_ms");
    expect(fast_ho_window_s > 0, "fast_ho_window_s must be > 0");
    expect(shadow.sigma_db >= 0, "shadow.sigma_db must be >= 0");
    expect(shadow.corr_dist_m > 0, "shadow.corr_dist_m must be > 0");
    expect(shadow.grid_res_m > 0, "shadow.grid_res_m must be > 0");
    expect(fading.num_oscillators >= 1, "fading.num_oscillators must be >= 1");
    expect(stochastic_region.azimuth_span_deg > 0 && stochastic_region.azimuth_span_deg <= 360,
           "stochastic_region.azimuth_span_deg must be in (0, 360]");
    expect(stochastic_region.zenith_span_deg > 0 && stochastic_region.zenith_span_deg <= 180,
           "stochastic_region.zenith_span_deg must be in (0, 180]");
    expect(workers >= 1, "workers must be >= 1");
    expect(std::fabs(p1_lobe_offset_deg) < overlay_half_width_deg,
           "p1_lobe_offset_deg magnitude must stay below overlay_half_width_deg");
    expect(std::fabs(p3_lobe_offset_deg) < overlay_half_width_deg,
           "p3_lobe_offset_deg magnitude must stay below overlay_half_width_deg");
    expect(overlay_csv.size() == 3, "overlay_csv must list exactly 3 entries");
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid scenario config:";
        for (const auto& m : bad) os << "\n  - " << m;
        throw std::invalid_argument(os.str());
    }
}

namespace {

json to_json_obj(const ScenarioConfig& c) {
    json j;
    j["scenario_id"] = c.scenario_id;
    j["carrier_ghz"] = c.carrier_ghz;
    j["bandwidth_mhz"] = c.bandwidth_mhz;
    j["tx_power_dbm"] = c.tx_power_dbm;
    j["bs_height_m"] = c.bs_height_m;
    j["ue_height_m"] = c.ue_height_m;
    j["inter_site_distance_m"] = c.inter_site_distance_m;
    j["num_sites"] = c.num_sites;
    j["num_ues"] = c.num_ues;
    j["ue_speed_kmh"] = c.ue_speed_kmh;
    j["sim_time_s"] = c.sim_time_s;
    j["time_step_ms"] = c.time_step_ms;
    j["ssb_period_ms"] = c.ssb_period_ms;
    j["run_scale"] = c.run_scale;
    j["scheduled_beams_per_cell"] = c.scheduled_beams_per_cell;
    j["sinr_mode"] = c.sinr_mode == SinrMode::kExpectation ? "expectation" : "sampled";
    j["noise_figure_db"] = c.noise_figure_db;
    j["mode"] = to_string(c.mode);
    j["o_prep_db"] = c.o_prep_db;
    j["o_exec_db"] = c.o_exec_db;
    j["o_rel_db"] = c.o_rel_db;
    j["o_rep_db"] = c.o_rep_db;
    j["t_prep_ms"] = c.t_prep_ms;
    j["t_exec_ms"] = c.t_exec_ms;
    j["t_rel_ms"] = c.t_rel_ms;
    j["t_rep_ms"] = c.t_rep_ms;
    j["max_prepared_cells"] = c.max_prepared_cells;
    j["prep_latency_ms"] = c.prep_latency_ms;
    j["gamma_out_db"] = c.gamma_out_db;
    j["gamma_in_db"] = c.gamma_in_db;
    j["t_hof_ms"] = c.t_hof_ms;
    j["t_rlf_ms"] = c.t_rlf_ms;
    j["rach_period_ms"] = c.rach_period_ms;
    j["bfr_window_ms"] = c.bfr_window_ms;
    j["rlm_window_ms"] = c.rlm_window_ms;
    j["ho_outage_ms"] = c.ho_outage_ms;
    j["reest_outage_ms"] = c.reest_outage_ms;
    j["l3_filter_coeff"] = c.l3_filter_coeff;
    j["panel_hysteresis_db"] = c.panel_hysteresis_db;
    j["fast_ho_window_s"] = c.fast_ho_window_s;
    j["blockage_case"] = to_string(c.blockage_case);
    j["blockage_model"] =
        c.blockage_model == BlockageModel::kParametric ? "parametric" : "stochastic3gpp";
    j["p1_boresight_loss_db"] = c.p1_boresight_loss_db;
    j["p3_boresight_loss_db"] = c.p3_boresight_loss_db;
    j["overlay_half_width_deg"] = c.overlay_half_width_deg;
    j["p1_lobe_offset_deg"] = c.p1_lobe_offset_deg;
    j["p3_lobe_offset_deg"] = c.p3_lobe_offset_deg;
    j["case1_penalty_db"] = c.case1_penalty_db;
    j["stochastic_region"] = {{"azimuth_deg", c.stochastic_region.azimuth_deg},
                              {"azimuth_span_deg", c.stochastic_region.azimuth_span_deg},
                              {"zenith_deg", c.stochastic_region.zenith_deg},
                              {"zenith_span_deg", c.stochastic_region.zenith_span_deg},
                              {"loss_db", c.stochastic_region.loss_db}};
    j["overlay_csv"] = c.overlay_csv;
    j["shadow"] = {{"enabled", c.shadow.enabled},
                   {"sigma_db", c.shadow.sigma_db},
                   {"corr_dist_m", c.shadow.corr_dist_m},
                   {"grid_res_m", c.shadow.grid_res_m}};
    j["fading"] = {{"enabled", c.fading.enabled},
                   {"num_oscillators", c.fading.num_oscillators}};
    j["policy_file"] = c.policy_file;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["check_invariants"] = c.check_invariants;
    return j;
}

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string ScenarioConfig::to_json() const { return to_json_obj(*this).dump(2) + "\n"; }

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ScenarioConfig c;
    get_if_present(j, "scenario_id", c.scenario_id);
    get_if_present(j, "carrier_ghz", c.carrier_ghz);
    get_if_present(j, "bandwidth_mhz", c.bandwidth_mhz);
    get_if_present(j, "tx_power_dbm", c.tx_power_dbm);
    get_if_present(j, "bs_height_m", c.bs_height_m);
    get_if_present(j, "ue_height_m", c.ue_height_m);
    get_if_present(j, "inter_site_distance_m", c.inter_site_distance_m);
    get_if_present(j, "num_sites", c.num_sites);
    get_if_present(j, "num_ues", c.num_ues);
    get_if_present(j, "ue_speed_kmh", c.ue_speed_kmh);
    get_if_present(j, "sim_time_s", c.sim_time_s);
    get_if_present(j, "time_step_ms", c.time_step_ms);
    get_if_present(j, "ssb_period_ms", c.ssb_period_ms);
    get_if_present(j, "run_scale", c.run_scale);
    get_if_present(j, "scheduled_beams_per_cell", c.scheduled_beams_per_cell);
    if (j.contains("sinr_mode")) {
        std::string s = j.at("sinr_mode").get<std::string>();
        if (s == "expectation") c.sinr_mode = SinrMode::kExpectation;
        else if (s == "sampled") c.sinr_mode = SinrMode::kSampled;
        else throw std::invalid_argument("unknown sinr_mode: " + s);
    }
    get_if_present(j, "noise_figure_db", c.noise_figure_db);
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    get_if_present(j, "o_prep_db", c.o_prep_db);
    get_if_present(j, "o_exec_db", c.o_exec_db);
    get_if_present(j, "o_rel_db", c.o_rel_db);
    get_if_present(j, "o_rep_db", c.o_rep_db);
    get_if_present(j, "t_prep_ms", c.t_prep_ms);
    get_if_present(j, "t_exec_ms", c.t_exec_ms);
    get_if_present(j, "t_rel_ms", c.t_rel_ms);
    get_if_present(j, "t_rep_ms", c.t_rep_ms);
    get_if_present(j, "max_prepared_cells", c.max_prepared_cells);
    get_if_present(j, "prep_latency_ms", c.prep_latency_ms);
    get_if_present(j, "gamma_out_db", c.gamma_out_db);
    get_if_present(j, "gamma_in_db", c.gamma_in_db);
    get_if_present(j, "t_hof_ms", c.t_hof_ms);
    get_if_present(j, "t_rlf_ms", c.t_rlf_ms);
    get_if_present(j, "rach_period_ms", c.rach_period_ms);
    get_if_present(j, "bfr_window_ms", c.bfr_window_ms);
    get_if_present(j, "rlm_window_ms", c.rlm_window_ms);
    get_if_present(j, "ho_outage_ms", c.ho_outage_ms);
    get_if_present(j, "reest_outage_ms", c.reest_outage_ms);
    get_if_present(j, "l3_filter_coeff", c.l3_filter_coeff);
    get_if_present(j, "panel_hysteresis_db", c.panel_hysteresis_db);
    get_if_present(j, "fast_ho_window_s", c.fast_ho_window_s);
    if (j.contains("blockage_case"))
        c.blockage_case = case_from_string(j.at("blockage_case").get<std::string>());
    if (j.contains("blockage_model")) {
        std::string s = j.at("blockage_model").get<std::string>();
        if (s == "parametric") c.blockage_model = BlockageModel::kParametric;
        else if (s == "stochastic3gpp") c.blockage_model = BlockageModel::kStochastic3gpp;
        else throw std::invalid_argument("unknown blockage_model: " + s);
    }
    get_if_present(j, "p1_boresight_loss_db", c.p1_boresight_loss_db);
    get_if_present(j, "p3_boresight_loss_db", c.p3_boresight_loss_db);
    get_if_present(j, "overlay_half_width_deg", c.overlay_half_width_deg);
    get_if_present(j, "p1_lobe_offset_deg", c.p1_lobe_offset_deg);
    get_if_present(j, "p3_lobe_offset_deg", c.p3_lobe_offset_deg);
    get_if_present(j, "case1_penalty_db", c.case1_penalty_db);
    if (j.contains("stochastic_region")) {
        const json& r = j.at("stochastic_region");
        get_if_present(r, "azimuth_deg", c.stochastic_region.azimuth_deg);
        get_if_present(r, "azimuth_span_deg", c.stochastic_region.azimuth_span_deg);
        get_if_present(r, "zenith_deg", c.stochastic_region.zenith_deg);
        get_if_present(r, "zenith_span_deg", c.stochastic_region.zenith_span_deg);
        get_if_present(r, "loss_db", c.stochastic_region.loss_db);
    }
    get_if_present(j, "overlay_csv", c.overlay_csv);
    if (j.contains("shadow")) {
        const json& s = j.at("shadow");
        get_if_present(s, "enabled", c.shadow.enabled);
        get_if_present(s, "sigma_db", c.shadow.sigma_db);
        get_if_present(s, "corr_dist_m", c.shadow.corr_dist_m);
        get_if_present(s, "grid_res_m", c.shadow.grid_res_m);
    }
    if (j.contains("fading")) {
        const json& f = j.at("fading");
        get_if_present(f, "enabled", c.fading.enabled);
        get_if_present(f, "num_oscillators", c.fading.num_oscillators);
    }
    get_if_present(j, "policy_file", c.policy_file);
    get_if_present(j, "seed", c.seed);
    get_if_present(j, "workers", c.workers);
    get_if_present(j, "check_invariants", c.check_invariants);
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void ScenarioConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write config file: " + path);
    out << to_json();
}

}  // namespace fchosim
