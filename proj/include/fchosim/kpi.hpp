// kpi.hpp - Event counters, outage accounting, resource-reservation intervals
// and the derived mobility KPIs.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fchosim/events.hpp"

namespace fchosim {

struct Interval {
    std::int64_t begin_ms = 0;
    std::int64_t end_ms = 0;  // half-open [begin, end)
    std::int64_t length_ms() const { return end_ms - begin_ms; }
};

// Per-UE outage intervals; overlaps merged so nothing is double counted.
class OutageBook {
public:
    void add(std::int64_t begin_ms, std::int64_t end_ms);
    void clamp(std::int64_t t_end_ms);  // drop/clip anything beyond the run
    std::int64_t total_ms() const;      // merges internally
    std::vector<Interval> merged() const;

private:
    std::vector<Interval> raw_;
};

// Per-UE reservation intervals per target cell. Opened when a cell enters the
// prepared set, closed exactly once when it leaves; unclosed intervals are
// truncated at the end of the run.
class ReservationBook {
public:
    explicit ReservationBook(int num_cells = 0);
    void open(int cell, std::int64_t t_ms);
    void close(int cell, std::int64_t t_ms);
    bool is_open(int cell) const;
    void finalize(std::int64_t t_end_ms);  // closes any still-open interval

    const std::vector<std::vector<Interval>>& per_cell() const { return intervals_; }
    // Eq.-style indicator sum for one cell: total prepared time in seconds.
    double reservation_time_s(int cell) const;
    // Throws std::logic_error on double-open/double-close (internal consistency).

private:
    std::vector<std::vector<Interval>> intervals_;
    std::vector<std::int64_t> open_since_;  // -1 if closed
};

struct HoRecord {
    std::int64_t t_ms = 0;
    int from_cell = -1;
    int to_cell = -1;
};

// Aggregated over all UEs after a run.
struct KpiLedger {
    int num_cells = 0;
    int num_ues = 0;
    std::int64_t t_sim_ms = 0;

    std::int64_t ho_success = 0;
    std::int64_t hof = 0;
    std::int64_t rlf = 0;
    std::int64_t prep_events = 0;
    std::int64_t rel_events = 0;  // any cause except handover-into-the-cell
    std::int64_t rep_events = 0;
    std::int64_t report_lost = 0;
    std::int64_t panel_switches = 0;

    std::int64_t total_outage_ms = 0;
    std::vector<std::int64_t> border_matrix;  // num_cells^2, failure counts
    std::vector<double> reservation_durations_s;        // one entry per interval
    std::vector<double> reservation_sum_per_pair_s;     // one entry per (cell, ue) pair with any reservation
    double reservation_total_s = 0.0;

    std::int64_t& border(int from, int to) { return border_matrix[from * num_cells + to]; }
    std::int64_t border(int from, int to) const { return border_matrix[from * num_cells + to]; }
    std::int64_t mobility_failures() const { return hof + rlf; }
    std::int64_t total_signaling() const { return prep_events + rel_events + rep_events; }
};

// Fast-handover classification: earliest-match, non-overlapping; each HO
// participates in at most one classification.
struct FastHoCounts {
    std::int64_t ping_pongs = 0;
    std::int64_t short_stays = 0;
};
FastHoCounts classify_fast_handovers(const std::vector<HoRecord>& hos_of_one_ue,
                                     double t_fh_s);

double outage_percent(std::int64_t total_outage_ms, int num_ues, std::int64_t t_sim_ms);
double normalize_per_ue_per_min(std::int64_t counter, int num_ues, std::int64_t t_sim_ms);
// Eq.-style normalized reservation time: sum of all per-pair reservation
// seconds over (num_cells * num_ues * t_sim).
double normalized_reservation_time(double reservation_total_s, int num_cells, int num_ues,
                                   std::int64_t t_sim_ms);

// Percentile over a sample vector (linear interpolation, p in [0,100]).
double percentile(std::vector<double> values, double p);

struct KpiSummary {
    std::string scenario_id;
    std::string mode;
    std::string blockage_case;
    double speed_kmh = 0;
    std::uint64_t seed = 0;
    int num_ues = 0;
    double t_sim_s = 0;

    double ho_per_ue_min = 0;
    double ping_pong_per_ue_min = 0;
    double short_stay_per_ue_min = 0;
    double fast_ho_per_ue_min = 0;
    double hof_per_ue_min = 0;
    double rlf_per_ue_min = 0;
    double failures_per_ue_min = 0;
    double outage_pct = 0;
    std::int64_t prep_events = 0;
    std::int64_t rel_events = 0;
    std::int64_t rep_events = 0;
    std::int64_t total_signaling = 0;
    double signaling_per_ue_min = 0;
    std::int64_t report_lost = 0;
    double res_median_s = 0;
    double res_p95_s = 0;
    double res_norm = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

KpiSummary summarize(const KpiLedger& ledger, const FastHoCounts& fast_ho, int num_ues,
                     std::int64_t t_sim_ms);

// Output files ---------------------------------------------------------------
void write_border_matrix_csv(const KpiLedger& ledger, const std::string& path);
void write_reservation_cdf_csv(const std::vector<double>& durations_s, const std::string& path);

}  // namespace fchosim
