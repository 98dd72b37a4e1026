// sim.cpp - Scenario runner. UEs are mutually independent in this model
// (expected-interference scheduler, admission always granted), so each UE's
// whole trajectory runs as one task; merging in UE order makes the output
// independent of the worker count.

#include "fchosim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fchosim/blockage.hpp"
#include "fchosim/channel.hpp"
#include "fchosim/cho.hpp"
#include "fchosim/deployment.hpp"
#include "fchosim/link.hpp"

namespace fchosim {

namespace {

struct UeResult {
    std::vector<EventRecord> events;
    std::int64_t outage_ms = 0;
    std::vector<std::vector<Interval>> reservations;  // per cell
    std::string trace_csv;
};

struct SharedWorld {
    const ScenarioConfig& config;
    NetworkLayout layout;
    std::vector<BeamConfig> beams;
    std::vector<ShadowField> shadow;
    PanelSet panels;
    const MroPolicy* policy;
    std::int64_t t_end_ms;
};

UeResult simulate_ue(const SharedWorld& w, int ue, bool trace) {
    const ScenarioConfig& cfg = w.config;
    const int ncells = w.layout.num_cells();

    RngStream drop_rng = RngStream::keyed(cfg.seed, 0xd209ULL, static_cast<std::uint64_t>(ue));
    UeKinematics kin;
    kin.position = random_drop(drop_rng, w.layout);
    kin.speed_mps = cfg.ue_speed_mps();
    kin.heading_rad = drop_rng.uniform(0.0, 2.0 * kPi);

    LinkMeasurer measurer(cfg, w.layout, w.beams, w.shadow, w.panels,
                          static_cast<std::uint64_t>(ue));
    ChoEngine engine(ChoParams::from_config(cfg, ncells, w.policy), ue);

    LinkScan scan;
    std::vector<double> l3(ncells, 0.0);
    std::vector<double> cell_sinr(ncells, 0.0);
    std::vector<int> panel_of_cell(ncells, 0);
    bool initialized = false;
    int panel = -1;
    std::string result_trace;
    if (trace) result_trace = "t_ms,cell,beam,panel,rsrp_dbm,sinr_db\n";

    for (std::int64_t t = 0; t < w.t_end_ms; t += cfg.time_step_ms) {
        const bool ssb = (t % cfg.ssb_period_ms) == 0;
        if (ssb) {
            measurer.measure(kin.position, kin.heading_rad, scan);
            if (!initialized) {
                int best = 0;
                for (int c = 1; c < ncells; ++c) {
                    if (scan.cell_quality_raw_dbm(c) > scan.cell_quality_raw_dbm(best))
                        best = c;
                }
                for (int c = 0; c < ncells; ++c) l3[c] = scan.cell_quality_raw_dbm(c);
                engine.attach(best, t);
                panel = select_serving_panel(scan.serving_panel_rsrp(best), -1,
                                             cfg.panel_hysteresis_db);
                initialized = true;
            } else {
                for (int c = 0; c < ncells; ++c) {
                    l3[c] = l3_filter(l3[c], scan.cell_quality_raw_dbm(c),
                                      cfg.l3_filter_coeff);
                }
                // Panel choice is frozen while random access or
                // re-establishment is in progress.
                if (engine.connected() && !engine.in_rach()) {
                    int next = select_serving_panel(
                        scan.serving_panel_rsrp(engine.serving_cell()), panel,
                        cfg.panel_hysteresis_db);
                    if (next != panel) {
                        engine.push_event(t, EventKind::kPanelSwitch, panel, next,
                                          EventCause::kNone);
                        panel = next;
                    }
                }
            }
            // Each candidate is evaluated on its own best panel (the panel the
            // UE would use toward it); the serving link uses the tracked panel.
            for (int c = 0; c < ncells; ++c) panel_of_cell[c] = best_panel_for_cell(scan, c);
            if (engine.serving_cell() >= 0) panel_of_cell[engine.serving_cell()] = panel;
            if (cfg.sinr_mode == SinrMode::kExpectation) {
                cell_sinr_expectation_db(scan, panel_of_cell, cfg.scheduled_beams_per_cell,
                                         cfg.noise_dbm(), cell_sinr);
            } else {
                cell_sinr_sampled_db(scan, panel_of_cell, cfg.scheduled_beams_per_cell,
                                     cfg.noise_dbm(), cfg.seed,
                                     static_cast<std::uint64_t>(ue), t, cell_sinr);
            }
        }

        ChoInputs in;
        in.t_ms = t;
        in.ssb = ssb;
        in.l3_dbm = &l3;
        in.cell_sinr_db = &cell_sinr;
        const int serving = engine.serving_cell();
        in.serving_sinr_db = serving >= 0 ? cell_sinr[serving] : 0.0;
        engine.step(in);

        if (trace && ssb && serving >= 0) {
            char row[160];
            for (int p = 0; p < kNumPanels; ++p) {
                std::snprintf(row, sizeof(row), "%lld,%d,%d,%d,%.4f,%.4f\n",
                              static_cast<long long>(t), serving,
                              scan.best_beam[serving] + 1, p + 1,
                              scan.rsrp_dbm(serving, p), in.serving_sinr_db);
                result_trace += row;
            }
        }

        kin = step_ue(kin, cfg.time_step_ms / 1000.0, w.layout);
    }
    engine.finalize(w.t_end_ms);

    UeResult result;
    result.events = std::move(engine.events());
    result.outage_ms = engine.outage().total_ms();
    result.reservations = engine.reservations().per_cell();
    result.trace_csv = std::move(result_trace);
    return result;
}

}  // namespace

SimResult run_scenario(const ScenarioConfig& config, const MroPolicy* policy,
                       const TraceOptions* trace) {
    config.validate();

    MroPolicy loaded;
    if (policy == nullptr && !config.policy_file.empty()) {
        loaded = load_policy_csv(config.policy_file);
        policy = &loaded;
    }

    SharedWorld w{config,
                  build_network(config),
                  make_beam_table(),
                  {},
                  PanelSet(config),
                  policy,
                  config.effective_sim_time_ms()};
    const int ncells = w.layout.num_cells();
    if (policy != nullptr && policy->num_cells != ncells)
        throw std::invalid_argument("policy file cell count does not match the layout");

    // Shadow fields cover every displacement the wrap can produce.
    const double extent = w.layout.replica_offsets.size() > 1
                              ? w.layout.replica_offsets[1].norm() / std::sqrt(3.0) + 10.0
                              : 4.0 * config.inter_site_distance_m;
    w.shadow.reserve(ncells);
    for (int c = 0; c < ncells; ++c) {
        w.shadow.emplace_back(config.seed, c,
                              config.shadow.enabled ? config.shadow.sigma_db : 0.0,
                              config.shadow.corr_dist_m, config.shadow.grid_res_m, extent);
    }

    const int num_ues = config.effective_num_ues();
    std::vector<UeResult> results(num_ues);
    std::vector<std::exception_ptr> errors(num_ues);
    const int workers = std::max(1, config.workers);
    const int trace_ue = trace != nullptr ? trace->trace_ue : -1;
    if (workers == 1) {
        for (int ue = 0; ue < num_ues; ++ue)
            results[ue] = simulate_ue(w, ue, ue == trace_ue);
    } else {
        std::atomic<int> next{0};
        auto body = [&] {
            for (;;) {
                int ue = next.fetch_add(1);
                if (ue >= num_ues) return;
                try {
                    results[ue] = simulate_ue(w, ue, ue == trace_ue);
                } catch (...) {
                    errors[ue] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(body);
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Deterministic reduction in UE order.
    SimResult out;
    KpiLedger& ledger = out.ledger;
    ledger.num_cells = ncells;
    ledger.num_ues = num_ues;
    ledger.t_sim_ms = w.t_end_ms;
    ledger.border_matrix.assign(static_cast<std::size_t>(ncells) * ncells, 0);

    FastHoCounts fast_total;
    std::vector<HoRecord> hos;
    for (int ue = 0; ue < num_ues; ++ue) {
        const UeResult& r = results[ue];
        hos.clear();
        for (const auto& e : r.events) {
            switch (e.kind) {
                case EventKind::kPrep: ++ledger.prep_events; break;
                case EventKind::kRel: ++ledger.rel_events; break;
                case EventKind::kRep: ++ledger.rep_events; break;
                case EventKind::kHoSuccess:
                    ++ledger.ho_success;
                    hos.push_back({e.t_ms, e.from_cell, e.to_cell});
                    break;
                case EventKind::kHof: ++ledger.hof; break;
                case EventKind::kRlf: ++ledger.rlf; break;
                case EventKind::kReestablish:
                    ++ledger.border(e.from_cell, e.to_cell);
                    break;
                case EventKind::kReportLost: ++ledger.report_lost; break;
                case EventKind::kPanelSwitch: ++ledger.panel_switches; break;
                default: break;
            }
        }
        FastHoCounts fh = classify_fast_handovers(hos, config.fast_ho_window_s);
        fast_total.ping_pongs += fh.ping_pongs;
        fast_total.short_stays += fh.short_stays;
        ledger.total_outage_ms += r.outage_ms;
        for (int c = 0; c < ncells; ++c) {
            double pair_sum = 0.0;
            for (const auto& iv : r.reservations[c]) {
                double s = iv.length_ms() / 1000.0;
                ledger.reservation_durations_s.push_back(s);
                pair_sum += s;
            }
            if (pair_sum > 0.0) {
                ledger.reservation_sum_per_pair_s.push_back(pair_sum);
                ledger.reservation_total_s += pair_sum;
            }
        }
        out.events.insert(out.events.end(), r.events.begin(), r.events.end());
    }
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const EventRecord& a, const EventRecord& b) {
                         return a.t_ms < b.t_ms || (a.t_ms == b.t_ms && a.ue < b.ue);
                     });

    out.summary = summarize(ledger, fast_total, num_ues, w.t_end_ms);
    out.summary.scenario_id = config.scenario_id;
    out.summary.mode = to_string(config.mode);
    out.summary.blockage_case = to_string(config.blockage_case);
    out.summary.speed_kmh = config.ue_speed_kmh;
    out.summary.seed = config.seed;
    if (trace_ue >= 0 && trace_ue < num_ues)
        out.trace_csv = std::move(results[trace_ue].trace_csv);
    return out;
}

std::string large_scale_map_csv(const ScenarioConfig& config) {
    config.validate();
    NetworkLayout layout = build_network(config);
    const int ncells = layout.num_cells();
    std::vector<ShadowField> shadow;
    const double extent = layout.replica_offsets.size() > 1
                              ? layout.replica_offsets[1].norm() / std::sqrt(3.0) + 10.0
                              : 4.0 * config.inter_site_distance_m;
    for (int c = 0; c < ncells; ++c) {
        shadow.emplace_back(config.seed, c,
                            config.shadow.enabled ? config.shadow.sigma_db : 0.0,
                            config.shadow.corr_dist_m, config.shadow.grid_res_m, extent);
    }
    std::string out = "ue,cell,x,y,pl_db,sf_db\n";
    char row[160];
    const double dh = layout.bs_height - layout.ue_height;
    for (int ue = 0; ue < config.effective_num_ues(); ++ue) {
        RngStream rng = RngStream::keyed(config.seed, 0xd209ULL, static_cast<std::uint64_t>(ue));
        Vec2 pos = random_drop(rng, layout);
        for (int c = 0; c < ncells; ++c) {
            Vec2 v = wrapped_displacement(layout.cell_site(c), pos, layout);
            double d2d = v.norm();
            double d3d = std::sqrt(d2d * d2d + dh * dh);
            double pl = path_loss_db(d3d, d2d, config.carrier_ghz, layout.bs_height,
                                     layout.ue_height, soft_los_weight(d2d));
            std::snprintf(row, sizeof(row), "%d,%d,%.3f,%.3f,%.4f,%.4f\n", ue, c, pos.x,
                          pos.y, pl, shadow[c].sample_db(v));
            out += row;
        }
    }
    return out;
}

void write_run_outputs(const SimResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream os(fs::path(out_dir) / "events.log");
        write_event_log(result.events, os);
    }
    {
        std::ofstream os(fs::path(out_dir) / "kpi_summary.csv");
        os << KpiSummary::csv_header() << '\n' << result.summary.csv_row() << '\n';
    }
    write_reservation_cdf_csv(result.ledger.reservation_durations_s,
                              (fs::path(out_dir) / "reservation_cdf.csv").string());
    write_border_matrix_csv(result.ledger, (fs::path(out_dir) / "border_matrix.csv").string());
}

}  // namespace fchosim
