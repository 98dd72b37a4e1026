// cho.hpp - The conditional-handover state machine: windowed signaling
// conditions (preparation / release / replace / execution), prepared-set
// bookkeeping, measurement-report delivery, random access with the HOF timer,
// the RLF model and connection re-establishment.
//
// The engine is channel-agnostic: each step consumes the current L3 cell
// qualities and SINRs, so tests can drive it with synthetic traces.

#pragma once

#include <cstdint>
#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/events.hpp"
#include "fchosim/kpi.hpp"
#include "fchosim/link.hpp"
#include "fchosim/mro.hpp"

namespace fchosim {

// Windowed signaling condition in the canonical form shared by preparation,
// release, replace and execution: fires at sample m iff x + offset < y
// (strict) held at every evaluation instant of the trailing window.
class ConditionMonitor {
public:
    explicit ConditionMonitor(int window_samples = 1) : window_(window_samples) {}

    bool update(double x_db, double offset_db, double y_db) {
        streak_ = (x_db + offset_db < y_db) ? streak_ + 1 : 0;
        return streak_ >= window_;
    }
    void reset() { streak_ = 0; }
    bool fired() const { return streak_ >= window_; }
    int streak() const { return streak_; }

private:
    int window_ = 1;
    int streak_ = 0;
};

struct ChoParams {
    int num_cells = 0;
    Mode mode = Mode::kFcho;
    double o_prep_db = 10.0;
    double o_exec_db = 3.0;
    double o_rel_db = 13.0;
    double o_rep_db = 3.0;
    int prep_window = 4;  // required consecutive SSB samples (T / ssb period)
    int exec_window = 4;
    int rel_window = 4;
    int rep_window = 4;
    int max_prepared = 4;
    double gamma_out_db = -8.0;
    double gamma_in_db = -6.0;
    std::int64_t t_hof_ms = 200;
    std::int64_t t_rlf_ms = 1000;
    std::int64_t rach_period_ms = 20;
    std::int64_t bfr_window_ms = 200;
    int rlm_samples = 20;
    std::int64_t prep_latency_ms = 50;
    std::int64_t step_ms = 10;
    std::int64_t ho_outage_ms = 55;
    std::int64_t reest_outage_ms = 180;
    const MroPolicy* policy = nullptr;  // optional, not owned
    bool check_invariants = true;

    static ChoParams from_config(const ScenarioConfig& config, int num_cells,
                                 const MroPolicy* policy);
};

struct ChoInputs {
    std::int64_t t_ms = 0;
    bool ssb = false;                            // measurement instant
    const std::vector<double>* l3_dbm = nullptr; // per-cell L3 quality
    double serving_sinr_db = 0.0;                // held between SSBs
    const std::vector<double>* cell_sinr_db = nullptr;  // per-cell target SINR
};

class ChoEngine {
public:
    ChoEngine(const ChoParams& params, int ue_id);

    // Initial attach; no signaling, no outage.
    void attach(int serving_cell, std::int64_t t_ms);

    void step(const ChoInputs& in);

    // Closes reservations and clips outage at the end of the run.
    void finalize(std::int64_t t_end_ms);

    int serving_cell() const { return serving_; }
    bool connected() const { return !reest_active_ && serving_ >= 0; }
    bool in_rach() const { return rach_active_; }
    bool rlf_timer_running() const { return rlf_running_; }
    const std::vector<int>& prepared_cells() const { return prepared_; }
    bool is_prepared(int cell) const { return member_[cell] != 0; }

    std::vector<EventRecord>& events() { return events_; }
    OutageBook& outage() { return outage_; }
    ReservationBook& reservations() { return reservations_; }

    // Driver hook (panel switches share the per-UE event stream).
    void push_event(std::int64_t t, EventKind kind, int from, int to, EventCause cause);

private:
    struct Inflight {
        int cell = -1;
        int from_cell = -1;  // serving at request time
        std::int64_t complete_at_ms = 0;
        bool is_replace = false;
    };

    void process_inflight(std::int64_t t);
    void process_rach(const ChoInputs& in);
    void start_rach(const ChoInputs& in, int target);
    void rach_attempt(const ChoInputs& in);
    void handover_success(const ChoInputs& in);
    void declare_failure(const ChoInputs& in, bool is_hof, EventCause cause);
    void update_streaks(const ChoInputs& in);
    void run_ssb_actions(const ChoInputs& in);
    void release_member(int cell, std::int64_t t, EventCause cause, bool log_release);
    void insert_member(int cell, std::int64_t t);
    void reset_monitors();
    bool report_delivered(const ChoInputs& in, EventCause lost_cause, int about_cell);
    int weakest_member(const std::vector<double>& l3) const;
    int strongest_cell(const std::vector<double>& l3) const;
    bool pair_blocked(int target) const;
    double pair_prep_offset(int target) const;
    void check_invariants(std::int64_t t) const;

    ChoParams p_;
    int ue_;

    int serving_ = -1;
    std::vector<int> prepared_;          // insertion order
    std::vector<std::uint8_t> member_;   // per-cell membership flag
    std::vector<Inflight> inflight_;

    std::vector<ConditionMonitor> prep_mon_;
    std::vector<ConditionMonitor> exec_mon_;
    std::vector<ConditionMonitor> rel_mon_;
    std::vector<ConditionMonitor> rep_mon_;

    bool rach_active_ = false;
    int rach_target_ = -1;
    std::int64_t rach_start_ms_ = 0;
    std::int64_t rach_next_attempt_ms_ = 0;

    bool rlf_running_ = false;
    std::int64_t rlf_expire_ms_ = 0;
    int bfr_below_steps_ = 0;
    RlmAverager rlm_;

    bool reest_active_ = false;
    std::int64_t reest_until_ms_ = 0;
    int reest_target_ = -1;

    std::vector<EventRecord> events_;
    OutageBook outage_;
    ReservationBook reservations_;
};

}  // namespace fchosim
