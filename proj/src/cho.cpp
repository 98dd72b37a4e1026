// cho.cpp - CHO/FCHO state machine.
//
// Step order (documented because it fixes the tie-breaking semantics):
//   1. re-establishment completion (attach to the target chosen at failure)
//   2. in-flight preparation completions (network side, runs even during RACH)
//   3. RACH progress: expiry check, then the attempt due at this step
//   4. connected housekeeping: RLM update, outage accrual, RLF timer, BFR
//   5. at SSB instants: condition streak updates, then execution, then
//      release / preparation-or-replace reports
// Failure declarations preempt same-instant condition actions.

#include "fchosim/cho.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fchosim {

ChoParams ChoParams::from_config(const ScenarioConfig& c, int num_cells,
                                 const MroPolicy* policy) {
    ChoParams p;
    p.num_cells = num_cells;
    p.mode = c.mode;
    p.o_prep_db = c.o_prep_db;
    p.o_exec_db = c.o_exec_db;
    p.o_rel_db = c.o_rel_db;
    p.o_rep_db = c.o_rep_db;
    p.prep_window = static_cast<int>(c.t_prep_ms / c.ssb_period_ms);
    p.exec_window = static_cast<int>(c.t_exec_ms / c.ssb_period_ms);
    p.rel_window = static_cast<int>(c.t_rel_ms / c.ssb_period_ms);
    p.rep_window = static_cast<int>(c.t_rep_ms / c.ssb_period_ms);
    p.max_prepared = c.max_prepared_cells;
    p.gamma_out_db = c.gamma_out_db;
    p.gamma_in_db = c.gamma_in_db;
    p.t_hof_ms = c.t_hof_ms;
    p.t_rlf_ms = c.t_rlf_ms;
    p.rach_period_ms = c.rach_period_ms;
    p.bfr_window_ms = c.bfr_window_ms;
    p.rlm_samples = static_cast<int>(std::max<std::int64_t>(1, c.rlm_window_ms / c.time_step_ms));
    p.prep_latency_ms = c.prep_latency_ms;
    p.step_ms = c.time_step_ms;
    p.ho_outage_ms = c.ho_outage_ms;
    p.reest_outage_ms = c.reest_outage_ms;
    p.policy = policy;
    p.check_invariants = c.check_invariants;
    return p;
}

ChoEngine::ChoEngine(const ChoParams& params, int ue_id)
    : p_(params),
      ue_(ue_id),
      member_(params.num_cells, 0),
      prep_mon_(params.num_cells, ConditionMonitor(params.prep_window)),
      exec_mon_(params.num_cells, ConditionMonitor(params.exec_window)),
      rel_mon_(params.num_cells, ConditionMonitor(params.rel_window)),
      rep_mon_(params.num_cells, ConditionMonitor(params.rep_window)),
      rlm_(params.rlm_samples),
      reservations_(params.num_cells) {}

void ChoEngine::attach(int serving_cell, std::int64_t) {
    serving_ = serving_cell;
}

void ChoEngine::push_event(std::int64_t t, EventKind kind, int from, int to,
                           EventCause cause) {
    events_.push_back({t, ue_, kind, from, to, cause});
}

bool ChoEngine::pair_blocked(int target) const {
    return p_.policy != nullptr && p_.policy->is_blocked(serving_, target);
}

double ChoEngine::pair_prep_offset(int target) const {
    if (p_.policy != nullptr)
        return p_.policy->prep_offset_db(serving_, target, p_.o_prep_db);
    return p_.o_prep_db;
}

int ChoEngine::weakest_member(const std::vector<double>& l3) const {
    int worst = -1;
    for (int c : prepared_) {
        if (worst < 0 || l3[c] < l3[worst] || (l3[c] == l3[worst] && c < worst)) worst = c;
    }
    return worst;
}

int ChoEngine::strongest_cell(const std::vector<double>& l3) const {
    int best = 0;
    for (int c = 1; c < p_.num_cells; ++c) {
        if (l3[c] > l3[best]) best = c;
    }
    return best;
}

void ChoEngine::insert_member(int cell, std::int64_t t) {
    prepared_.push_back(cell);
    member_[cell] = 1;
    reservations_.open(cell, t);
}

void ChoEngine::release_member(int cell, std::int64_t t, EventCause cause,
                               bool log_release) {
    auto it = std::find(prepared_.begin(), prepared_.end(), cell);
    if (it == prepared_.end())
        throw std::logic_error("release of a cell that is not prepared");
    prepared_.erase(it);
    member_[cell] = 0;
    reservations_.close(cell, t);
    if (log_release) push_event(t, EventKind::kRel, serving_, cell, cause);
}

void ChoEngine::reset_monitors() {
    for (auto& m : prep_mon_) m.reset();
    for (auto& m : exec_mon_) m.reset();
    for (auto& m : rel_mon_) m.reset();
    for (auto& m : rep_mon_) m.reset();
}

bool ChoEngine::report_delivered(const ChoInputs& in, EventCause lost_cause, int about_cell) {
    if (in.serving_sinr_db >= p_.gamma_out_db) return true;
    push_event(in.t_ms, EventKind::kReportLost, serving_, about_cell, lost_cause);
    return false;
}

void ChoEngine::process_inflight(std::int64_t t) {
    for (std::size_t i = 0; i < inflight_.size();) {
        if (inflight_[i].complete_at_ms > t) {
            ++i;
            continue;
        }
        Inflight f = inflight_[i];
        inflight_.erase(inflight_.begin() + i);
        // Dropped silently when the world moved on during the latency window
        // (the preparation request was already counted as signaling).
        if (f.cell == serving_ || member_[f.cell] ||
            static_cast<int>(prepared_.size()) >= p_.max_prepared) {
            continue;
        }
        insert_member(f.cell, t);
    }
}

void ChoEngine::start_rach(const ChoInputs& in, int target) {
    push_event(in.t_ms, EventKind::kExecStart, serving_, target, EventCause::kNone);
    rach_active_ = true;
    rach_target_ = target;
    rach_start_ms_ = in.t_ms;
    rach_next_attempt_ms_ = in.t_ms;
    rlf_running_ = false;  // at most one failure procedure at a time
    bfr_below_steps_ = 0;
    rach_attempt(in);
}

void ChoEngine::rach_attempt(const ChoInputs& in) {
    double gamma = (*in.cell_sinr_db)[rach_target_];
    if (gamma >= p_.gamma_out_db) {
        handover_success(in);
    } else {
        rach_next_attempt_ms_ = in.t_ms + p_.rach_period_ms;
    }
}

void ChoEngine::process_rach(const ChoInputs& in) {
    if (in.t_ms - rach_start_ms_ >= p_.t_hof_ms) {
        push_event(in.t_ms, EventKind::kHof, serving_, rach_target_, EventCause::kNone);
        declare_failure(in, true, EventCause::kHof);
        return;
    }
    if (in.t_ms >= rach_next_attempt_ms_) rach_attempt(in);
}

void ChoEngine::handover_success(const ChoInputs& in) {
    const std::int64_t t = in.t_ms;
    const int old_serving = serving_;
    const int target = rach_target_;
    push_event(t, EventKind::kHoSuccess, old_serving, target, EventCause::kNone);
    outage_.add(t, t + p_.ho_outage_ms);

    // The executed cell stops being a candidate: its reservation turns into
    // the serving-cell context (not counted as release signaling).
    release_member(target, t, EventCause::kNone, false);
    serving_ = target;

    if (p_.mode == Mode::kCho) {
        // Bulk release of the remaining candidates.
        while (!prepared_.empty()) {
            release_member(prepared_.front(), t, EventCause::kPostHoCho, true);
        }
        inflight_.clear();
    } else {
        // Retain candidates and add the previous serving cell.
        insert_member(old_serving, t);
        if (p_.policy != nullptr && p_.policy->has_blocklist()) {
            // Reactive block listing against the new serving cell's row.
            std::vector<int> prune;
            for (int c : prepared_) {
                if (p_.policy->is_blocked(serving_, c)) prune.push_back(c);
            }
            for (int c : prune)
                release_member(c, t, EventCause::kReactiveBlocklist, true);
        }
    }

    rach_active_ = false;
    rach_target_ = -1;
    rlf_running_ = false;
    bfr_below_steps_ = 0;
    rlm_.reset();
    reset_monitors();
}

void ChoEngine::declare_failure(const ChoInputs& in, bool is_hof, EventCause cause) {
    const std::int64_t t = in.t_ms;
    // Re-establishment target: strongest L3 cell, chosen at declaration.
    int target = strongest_cell(*in.l3_dbm);
    push_event(t, EventKind::kReestablish, serving_, target, cause);
    outage_.add(t, t + p_.reest_outage_ms);
    // Context reset: all preparations are torn down (counted as releases).
    while (!prepared_.empty()) {
        release_member(prepared_.front(), t, EventCause::kReestablish, true);
    }
    inflight_.clear();
    rach_active_ = false;
    rach_target_ = -1;
    rlf_running_ = false;
    bfr_below_steps_ = 0;
    rlm_.reset();
    reset_monitors();
    reest_active_ = true;
    reest_until_ms_ = t + p_.reest_outage_ms;
    reest_target_ = target;
    (void)is_hof;
}

void ChoEngine::update_streaks(const ChoInputs& in) {
    const std::vector<double>& l3 = *in.l3_dbm;
    const double serving_l3 = l3[serving_];
    const bool full = static_cast<int>(prepared_.size()) >= p_.max_prepared;
    const int weakest = full ? weakest_member(l3) : -1;
    for (int c = 0; c < p_.num_cells; ++c) {
        if (c == serving_) {
            prep_mon_[c].reset();
            exec_mon_[c].reset();
            rel_mon_[c].reset();
            rep_mon_[c].reset();
            continue;
        }
        // Preparation: P_serving < P_c + o_prep, i.e. P_serving - o_prep < P_c.
        prep_mon_[c].update(serving_l3, -pair_prep_offset(c), l3[c]);
        // Execution: P_serving + o_exec < P_c.
        exec_mon_[c].update(serving_l3, p_.o_exec_db, l3[c]);
        // Release: P_c + o_rel < P_serving.
        rel_mon_[c].update(l3[c], p_.o_rel_db, serving_l3);
        // Replace: P_weakest + o_rep < P_c, tracked only while the set is full.
        if (full && !member_[c] && c != weakest)
            rep_mon_[c].update(l3[weakest], p_.o_rep_db, l3[c]);
        else
            rep_mon_[c].reset();
    }
}

void ChoEngine::run_ssb_actions(const ChoInputs& in) {
    const std::vector<double>& l3 = *in.l3_dbm;
    const std::int64_t t = in.t_ms;

    // Execution first: UE-autonomous, no report needed.
    int exec_target = -1;
    for (int c : prepared_) {
        if (exec_mon_[c].fired()) {
            if (exec_target < 0 || l3[c] > l3[exec_target] ||
                (l3[c] == l3[exec_target] && c < exec_target))
                exec_target = c;
        }
    }
    if (exec_target >= 0) {
        start_rach(in, exec_target);
        return;  // monitors freeze once random access starts
    }

    // Releases (ascending cell id). The delivery gate is shared: one serving
    // SINR decides the fate of every report sent this instant.
    for (int c = 0; c < p_.num_cells; ++c) {
        if (member_[c] && rel_mon_[c].fired()) {
            if (!report_delivered(in, EventCause::kRelReport, c)) break;
            release_member(c, t, EventCause::kReleaseEvent, true);
        }
    }

    const bool full = static_cast<int>(prepared_.size()) >= p_.max_prepared;
    if (!full) {
        // Preparation: one request per measurement instant (reports and the
        // Xn preparation are serialized), strongest candidate first.
        int best = -1;
        for (int c = 0; c < p_.num_cells; ++c) {
            if (c == serving_ || member_[c] || pair_blocked(c)) continue;
            if (!prep_mon_[c].fired()) continue;
            bool inflight = false;
            for (const auto& f : inflight_) inflight |= (f.cell == c);
            if (inflight) continue;
            if (best < 0 || l3[c] > l3[best]) best = c;
        }
        if (best >= 0 &&
            static_cast<int>(prepared_.size() + inflight_.size()) < p_.max_prepared &&
            report_delivered(in, EventCause::kPrepReport, best)) {
            // The request is the signaling event; the cell enters the prepared
            // set once the Xn/RRC handshake completes.
            push_event(t, EventKind::kPrep, serving_, best, EventCause::kCondition);
            inflight_.push_back({best, serving_, t + p_.prep_latency_ms, false});
        }
    } else {
        // Replace path: one swap per instant, strongest challenger first.
        int weakest = weakest_member(l3);
        int challenger = -1;
        for (int c = 0; c < p_.num_cells; ++c) {
            if (c == serving_ || member_[c] || pair_blocked(c)) continue;
            if (!rep_mon_[c].fired()) continue;
            if (challenger < 0 || l3[c] > l3[challenger]) challenger = c;
        }
        if (challenger >= 0 && report_delivered(in, EventCause::kRepReport, challenger)) {
            push_event(t, EventKind::kRep, weakest, challenger, EventCause::kReplace);
            release_member(weakest, t, EventCause::kReplace, false);
            inflight_.push_back({challenger, serving_, t + p_.prep_latency_ms, true});
        }
    }
}

void ChoEngine::step(const ChoInputs& in) {
    const std::int64_t t = in.t_ms;

    if (reest_active_) {
        if (t >= reest_until_ms_) {
            serving_ = reest_target_;
            reest_active_ = false;
            reest_target_ = -1;
            rlm_.reset();
        } else {
            return;
        }
    }

    process_inflight(t);

    if (rach_active_) {
        process_rach(in);
        if (p_.check_invariants) check_invariants(t);
        return;
    }

    // Connected housekeeping at step granularity.
    rlm_.push(in.serving_sinr_db);
    if (in.serving_sinr_db < p_.gamma_out_db) {
        outage_.add(t, t + p_.step_ms);
        ++bfr_below_steps_;
    } else {
        bfr_below_steps_ = 0;
    }

    const double rlm_db = rlm_.average_db();
    if (rlf_running_) {
        if (rlm_db > p_.gamma_in_db) {
            rlf_running_ = false;
        } else if (t >= rlf_expire_ms_) {
            push_event(t, EventKind::kRlf, serving_, -1, EventCause::kTimer);
            declare_failure(in, false, EventCause::kRlf);
            if (p_.check_invariants) check_invariants(t);
            return;
        }
    } else if (rlm_db < p_.gamma_out_db) {
        rlf_running_ = true;
        rlf_expire_ms_ = t + p_.t_rlf_ms;
    }
    if (bfr_below_steps_ * p_.step_ms >= p_.bfr_window_ms) {
        // Beam failure recovery failed: no serving beam recovered in time.
        push_event(t, EventKind::kRlf, serving_, -1, EventCause::kBfr);
        declare_failure(in, false, EventCause::kRlf);
        if (p_.check_invariants) check_invariants(t);
        return;
    }

    if (in.ssb) {
        update_streaks(in);
        run_ssb_actions(in);
    }
    if (p_.check_invariants) check_invariants(t);
}

void ChoEngine::finalize(std::int64_t t_end_ms) {
    reservations_.finalize(t_end_ms);
    outage_.clamp(t_end_ms);
}

void ChoEngine::check_invariants(std::int64_t) const {
    if (static_cast<int>(prepared_.size()) > p_.max_prepared)
        throw std::logic_error("prepared set exceeds its cap");
    if (serving_ >= 0 && member_[serving_])
        throw std::logic_error("serving cell inside the prepared set");
    if (rach_active_ && rlf_running_)
        throw std::logic_error("HOF procedure and RLF timer active together");
    int open_count = 0;
    for (int c = 0; c < p_.num_cells; ++c) {
        if (reservations_.is_open(c)) ++open_count;
        if (static_cast<bool>(member_[c]) != reservations_.is_open(c))
            throw std::logic_error("reservation state out of sync with membership");
    }
    if (open_count != static_cast<int>(prepared_.size()))
        throw std::logic_error("open reservation count mismatch");
}

}  // namespace fchosim
