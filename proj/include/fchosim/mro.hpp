// mro.hpp - Handover-probability matrix and the resource-reservation
// optimization policies (block listing, preparation-offset reduction, both).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fchosim/events.hpp"

namespace fchosim {

enum class MroApproach { kNone, kBlocklist, kOffsetReduction, kCombined };

const char* to_string(MroApproach a);
MroApproach approach_from_string(const std::string& s);

// Row-stochastic-or-zero matrix of observed handover probabilities.
struct HandoverProbabilityMatrix {
    int num_cells = 0;
    std::vector<double> h;  // row-major

    double at(int i, int j) const { return h[i * num_cells + j]; }
    double& at(int i, int j) { return h[i * num_cells + j]; }
};

// H_ij = count(ho i->j) / count(ho from i); rows without handovers stay zero.
// Emits a warning on an event log without any handovers.
HandoverProbabilityMatrix build_h(const std::vector<EventRecord>& events, int num_cells);

void save_h_csv(const HandoverProbabilityMatrix& h, const std::string& path);
HandoverProbabilityMatrix load_h_csv(const std::string& path);

struct MroPolicy {
    MroApproach approach = MroApproach::kNone;
    int num_cells = 0;
    std::vector<std::uint8_t> blocked;  // row-major pair gate
    std::vector<double> o_prep_db;      // row-major per-pair preparation offset

    bool is_blocked(int serving, int target) const {
        return num_cells > 0 && blocked[serving * num_cells + target] != 0;
    }
    double prep_offset_db(int serving, int target, double default_db) const {
        return num_cells > 0 ? o_prep_db[serving * num_cells + target] : default_db;
    }
    bool has_blocklist() const;
};

struct PolicyThresholds {
    double p_block = 0.0;    // p_B
    double p_reduce = 0.12;  // p_R
    double base_offset_db = 10.0;
    double reduced_offset_db = 7.0;
};

// Pure and idempotent. touched_entries, when given, counts matrix cells read
// or written (the O(N_cells^2) bound is asserted in tests).
MroPolicy derive_policy(const HandoverProbabilityMatrix& h, MroApproach approach,
                        const PolicyThresholds& thresholds,
                        std::int64_t* touched_entries = nullptr);

void save_policy_csv(const MroPolicy& policy, const std::string& path);
MroPolicy load_policy_csv(const std::string& path);
std::string policy_to_csv_string(const MroPolicy& policy);
MroPolicy policy_from_csv_string(const std::string& text);

}  // namespace fchosim
