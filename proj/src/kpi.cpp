// kpi.cpp - Outage/reservation bookkeeping and KPI aggregation.

#include "fchosim/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fchosim {

// ---------------------------------------------------------------------------
// OutageBook

void OutageBook::add(std::int64_t begin_ms, std::int64_t end_ms) {
    if (end_ms > begin_ms) raw_.push_back({begin_ms, end_ms});
}

void OutageBook::clamp(std::int64_t t_end_ms) {
    for (auto& iv : raw_) iv.end_ms = std::min(iv.end_ms, t_end_ms);
    raw_.erase(std::remove_if(raw_.begin(), raw_.end(),
                              [](const Interval& iv) { return iv.length_ms() <= 0; }),
               raw_.end());
}

std::vector<Interval> OutageBook::merged() const {
    std::vector<Interval> sorted = raw_;
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
        return a.begin_ms < b.begin_ms || (a.begin_ms == b.begin_ms && a.end_ms < b.end_ms);
    });
    std::vector<Interval> out;
    for (const auto& iv : sorted) {
        if (!out.empty() && iv.begin_ms <= out.back().end_ms)
            out.back().end_ms = std::max(out.back().end_ms, iv.end_ms);
        else
            out.push_back(iv);
    }
    return out;
}

std::int64_t OutageBook::total_ms() const {
    std::int64_t total = 0;
    for (const auto& iv : merged()) total += iv.length_ms();
    return total;
}

// ---------------------------------------------------------------------------
// ReservationBook

ReservationBook::ReservationBook(int num_cells)
    : intervals_(num_cells), open_since_(num_cells, -1) {}

void ReservationBook::open(int cell, std::int64_t t_ms) {
    if (open_since_[cell] >= 0)
        throw std::logic_error("reservation opened twice for the same cell");
    open_since_[cell] = t_ms;
}

void ReservationBook::close(int cell, std::int64_t t_ms) {
    if (open_since_[cell] < 0)
        throw std::logic_error("reservation closed while not open");
    if (t_ms > open_since_[cell]) intervals_[cell].push_back({open_since_[cell], t_ms});
    open_since_[cell] = -1;
}

bool ReservationBook::is_open(int cell) const { return open_since_[cell] >= 0; }

void ReservationBook::finalize(std::int64_t t_end_ms) {
    for (std::size_t c = 0; c < open_since_.size(); ++c) {
        if (open_since_[c] >= 0) close(static_cast<int>(c), t_end_ms);
    }
}

double ReservationBook::reservation_time_s(int cell) const {
    std::int64_t ms = 0;
    for (const auto& iv : intervals_[cell]) ms += iv.length_ms();
    if (open_since_[cell] >= 0)
        throw std::logic_error("reservation_time_s on an unfinalized book");
    return ms / 1000.0;
}

// ---------------------------------------------------------------------------
// KPI math

FastHoCounts classify_fast_handovers(const std::vector<HoRecord>& hos, double t_fh_s) {
    FastHoCounts counts;
    const auto window_ms = static_cast<std::int64_t>(std::llround(t_fh_s * 1000.0));
    std::size_t i = 0;
    while (i + 1 < hos.size()) {
        const HoRecord& a = hos[i];
        const HoRecord& b = hos[i + 1];
        if (b.from_cell == a.to_cell && b.t_ms - a.t_ms <= window_ms) {
            if (b.to_cell == a.from_cell)
                ++counts.ping_pongs;
            else
                ++counts.short_stays;
            i += 2;  // both handovers consumed: earliest match, no overlap
        } else {
            ++i;
        }
    }
    return counts;
}

double outage_percent(std::int64_t total_outage_ms, int num_ues, std::int64_t t_sim_ms) {
    if (num_ues <= 0 || t_sim_ms <= 0) return 0.0;
    return 100.0 * static_cast<double>(total_outage_ms) /
           (static_cast<double>(num_ues) * static_cast<double>(t_sim_ms));
}

double normalize_per_ue_per_min(std::int64_t counter, int num_ues, std::int64_t t_sim_ms) {
    if (num_ues <= 0 || t_sim_ms <= 0) return 0.0;
    double t_min = static_cast<double>(t_sim_ms) / 60000.0;
    return static_cast<double>(counter) / (static_cast<double>(num_ues) * t_min);
}

double normalized_reservation_time(double reservation_total_s, int num_cells, int num_ues,
                                   std::int64_t t_sim_ms) {
    if (num_cells <= 0 || num_ues <= 0 || t_sim_ms <= 0) return 0.0;
    double t_s = static_cast<double>(t_sim_ms) / 1000.0;
    return reservation_total_s / (static_cast<double>(num_cells) * num_ues * t_s);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    double rank = (p / 100.0) * (values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(rank);
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = rank - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

// ---------------------------------------------------------------------------
// Summary

namespace {
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace

std::string KpiSummary::csv_header() {
    return "scenario_id,mode,case,speed_kmh,seed,num_ues,t_sim_s,"
           "ho_per_ue_min,ping_pong_per_ue_min,short_stay_per_ue_min,fast_ho_per_ue_min,"
           "hof_per_ue_min,rlf_per_ue_min,failures_per_ue_min,outage_pct,"
           "prep_events,rel_events,rep_events,total_signaling,signaling_per_ue_min,"
           "report_lost,res_median_s,res_p95_s,res_norm";
}

std::string KpiSummary::csv_row() const {
    std::string row;
    row += scenario_id + ',' + mode + ',' + blockage_case + ',' + fmt(speed_kmh) + ',' +
           std::to_string(seed) + ',' + std::to_string(num_ues) + ',' + fmt(t_sim_s) + ',';
    row += fmt(ho_per_ue_min) + ',' + fmt(ping_pong_per_ue_min) + ',' +
           fmt(short_stay_per_ue_min) + ',' + fmt(fast_ho_per_ue_min) + ',';
    row += fmt(hof_per_ue_min) + ',' + fmt(rlf_per_ue_min) + ',' +
           fmt(failures_per_ue_min) + ',' + fmt(outage_pct) + ',';
    row += std::to_string(prep_events) + ',' + std::to_string(rel_events) + ',' +
           std::to_string(rep_events) + ',' + std::to_string(total_signaling) + ',' +
           fmt(signaling_per_ue_min) + ',';
    row += std::to_string(report_lost) + ',' + fmt(res_median_s) + ',' + fmt(res_p95_s) +
           ',' + fmt(res_norm);
    return row;
}

KpiSummary summarize(const KpiLedger& ledger, const FastHoCounts& fast_ho, int num_ues,
                     std::int64_t t_sim_ms) {
    KpiSummary s;
    s.num_ues = num_ues;
    s.t_sim_s = t_sim_ms / 1000.0;
    s.ho_per_ue_min = normalize_per_ue_per_min(ledger.ho_success, num_ues, t_sim_ms);
    s.ping_pong_per_ue_min = normalize_per_ue_per_min(fast_ho.ping_pongs, num_ues, t_sim_ms);
    s.short_stay_per_ue_min = normalize_per_ue_per_min(fast_ho.short_stays, num_ues, t_sim_ms);
    s.fast_ho_per_ue_min =
        normalize_per_ue_per_min(fast_ho.ping_pongs + fast_ho.short_stays, num_ues, t_sim_ms);
    s.hof_per_ue_min = normalize_per_ue_per_min(ledger.hof, num_ues, t_sim_ms);
    s.rlf_per_ue_min = normalize_per_ue_per_min(ledger.rlf, num_ues, t_sim_ms);
    s.failures_per_ue_min =
        normalize_per_ue_per_min(ledger.mobility_failures(), num_ues, t_sim_ms);
    s.outage_pct = outage_percent(ledger.total_outage_ms, num_ues, t_sim_ms);
    s.prep_events = ledger.prep_events;
    s.rel_events = ledger.rel_events;
    s.rep_events = ledger.rep_events;
    s.total_signaling = ledger.total_signaling();
    s.signaling_per_ue_min =
        normalize_per_ue_per_min(ledger.total_signaling(), num_ues, t_sim_ms);
    s.report_lost = ledger.report_lost;
    s.res_median_s = percentile(ledger.reservation_durations_s, 50.0);
    s.res_p95_s = percentile(ledger.reservation_durations_s, 95.0);
    s.res_norm = normalized_reservation_time(ledger.reservation_total_s, ledger.num_cells,
                                             num_ues, t_sim_ms);
    return s;
}

void write_border_matrix_csv(const KpiLedger& ledger, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "from\\to";
    for (int j = 0; j < ledger.num_cells; ++j) out << ',' << j;
    out << '\n';
    for (int i = 0; i < ledger.num_cells; ++i) {
        out << i;
        for (int j = 0; j < ledger.num_cells; ++j) out << ',' << ledger.border(i, j);
        out << '\n';
    }
}

void write_reservation_cdf_csv(const std::vector<double>& durations_s,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "percentile,reservation_time_s\n";
    for (int p = 1; p <= 100; ++p) {
        out << p << ',' << fmt(percentile(durations_s, p)) << '\n';
    }
}

}  // namespace fchosim
