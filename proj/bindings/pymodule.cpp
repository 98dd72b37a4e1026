// pymodule.cpp - Python bindings for the main simulator operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fchosim/blockage.hpp"
#include "fchosim/campaign.hpp"
#include "fchosim/channel.hpp"
#include "fchosim/config.hpp"
#include "fchosim/deployment.hpp"
#include "fchosim/kpi.hpp"
#include "fchosim/link.hpp"
#include "fchosim/mro.hpp"
#include "fchosim/sim.hpp"

namespace py = pybind11;
using namespace fchosim;

namespace {

py::dict summary_to_dict(const KpiSummary& s) {
    py::dict d;
    d["scenario_id"] = s.scenario_id;
    d["mode"] = s.mode;
    d["case"] = s.blockage_case;
    d["speed_kmh"] = s.speed_kmh;
    d["seed"] = s.seed;
    d["num_ues"] = s.num_ues;
    d["t_sim_s"] = s.t_sim_s;
    d["ho_per_ue_min"] = s.ho_per_ue_min;
    d["ping_pong_per_ue_min"] = s.ping_pong_per_ue_min;
    d["short_stay_per_ue_min"] = s.short_stay_per_ue_min;
    d["fast_ho_per_ue_min"] = s.fast_ho_per_ue_min;
    d["hof_per_ue_min"] = s.hof_per_ue_min;
    d["rlf_per_ue_min"] = s.rlf_per_ue_min;
    d["failures_per_ue_min"] = s.failures_per_ue_min;
    d["outage_pct"] = s.outage_pct;
    d["prep_events"] = s.prep_events;
    d["rel_events"] = s.rel_events;
    d["rep_events"] = s.rep_events;
    d["total_signaling"] = s.total_signaling;
    d["signaling_per_ue_min"] = s.signaling_per_ue_min;
    d["report_lost"] = s.report_lost;
    d["res_median_s"] = s.res_median_s;
    d["res_p95_s"] = s.res_p95_s;
    d["res_norm"] = s.res_norm;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fchosim, m) {
    m.doc() = "FR2 mobility simulator: conditional handover with hand blockage";

    m.def("default_config_json", [] { return ScenarioConfig().to_json(); },
          "JSON text of a config with full defaults");

    m.def(
        "run_scenario",
        [](const std::string& config_json, const std::string& policy_csv_text) {
            ScenarioConfig config = ScenarioConfig::from_json(config_json);
            config.validate();
            SimResult result;
            if (!policy_csv_text.empty()) {
                MroPolicy policy = policy_from_csv_string(policy_csv_text);
                result = run_scenario(config, &policy);
            } else {
                result = run_scenario(config);
            }
            py::dict d;
            d["summary"] = summary_to_dict(result.summary);
            d["events"] = event_log_to_string(result.events);
            d["border_matrix"] = result.ledger.border_matrix;
            d["reservation_durations_s"] = result.ledger.reservation_durations_s;
            return d;
        },
        py::arg("config_json"), py::arg("policy_csv_text") = std::string(),
        "Run one scenario from JSON config text; returns summary, events and ledgers");

    m.def(
        "derive_policy_csv",
        [](const std::string& events_log_text, const std::string& approach, int num_cells,
           double p_block, double p_reduce, double base_offset_db,
           double reduced_offset_db) {
            std::istringstream is(events_log_text);
            auto events = read_event_log(is);
            auto h = build_h(events, num_cells);
            PolicyThresholds th{p_block, p_reduce, base_offset_db, reduced_offset_db};
            auto policy = derive_policy(h, approach_from_string(approach), th);
            return policy_to_csv_string(policy);
        },
        py::arg("events_log_text"), py::arg("approach"), py::arg("num_cells") = 21,
        py::arg("p_block") = 0.0, py::arg("p_reduce") = 0.12,
        py::arg("base_offset_db") = 10.0, py::arg("reduced_offset_db") = 7.0,
        "Derive an optimization policy (CSV text) from an event log");

    m.def("path_loss_db",
          [](double d3d, double d2d, double fc_ghz, double bs_h, double ue_h) {
              return path_loss_db(d3d, d2d, fc_ghz, bs_h, ue_h, soft_los_weight(d2d));
          },
          py::arg("d3d_m"), py::arg("d2d_m"), py::arg("fc_ghz") = 28.0,
          py::arg("bs_h") = 10.0, py::arg("ue_h") = 1.5,
          "Soft-LoS UMi path loss in dB");

    m.def("beam_gain_db",
          [](int beam, double az_deg, double zen_deg) {
              auto beams = make_beam_table();
              if (beam < 1 || beam > static_cast<int>(beams.size()))
                  throw std::invalid_argument("beam id must be 1..12");
              return beam_gain_db(beams[beam - 1], az_deg, zen_deg);
          },
          py::arg("beam"), py::arg("az_deg"), py::arg("zen_deg") = 90.0,
          "Tx beamforming gain of beam 1..12 toward a sector-local direction");

    m.def("panel_rx_gain_db",
          [](const std::string& blockage_case, int panel, double az_deg, double zen_deg) {
              ScenarioConfig config;
              config.blockage_case = case_from_string(blockage_case);
              PanelSet panels(config);
              return panels.rx_gain_db(panel, UeDirection{az_deg, zen_deg});
          },
          py::arg("blockage_case"), py::arg("panel"), py::arg("az_deg"),
          py::arg("zen_deg") = 90.0,
          "MPUE panel receive gain (dB) under a hand-blockage case; panel 0..2 = P1..P3");

    m.def("l3_filter", &l3_filter, py::arg("prev_dbm"), py::arg("meas_dbm"),
          py::arg("coeff"));

    m.def("run_campaign",
          [](int figure, int seeds, std::uint64_t seed_base, bool paper_scale,
             const std::string& out_dir) {
              CampaignOptions opts;
              opts.figure = figure;
              opts.seeds = seeds;
              opts.seed_base = seed_base;
              opts.paper_scale = paper_scale;
              opts.out_dir = out_dir;
              auto rows = run_campaign(opts);
              py::list out;
              for (const auto& r : rows) {
                  py::dict d;
                  d["series"] = r.series;
                  d["fail_mean"] = r.fail_mean;
                  d["fast_mean"] = r.fast_mean;
                  d["ho_mean"] = r.ho_mean;
                  d["outage_mean"] = r.outage_mean;
                  d["signaling_mean"] = r.signaling_mean;
                  d["res_norm_mean"] = r.res_norm_mean;
                  out.append(d);
              }
              return out;
          },
          py::arg("figure"), py::arg("seeds") = 5, py::arg("seed_base") = 1,
          py::arg("paper_scale") = false, py::arg("out_dir") = std::string("campaign_out"));
}
