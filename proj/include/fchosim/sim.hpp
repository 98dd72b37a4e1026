// sim.hpp - Seeded scenario runner: builds the network, steps every UE
// through the run and aggregates events and KPIs deterministically.

#pragma once

#include <string>
#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/events.hpp"
#include "fchosim/kpi.hpp"
#include "fchosim/mro.hpp"

namespace fchosim {

struct SimResult {
    std::vector<EventRecord> events;  // sorted by (t, ue, emission order)
    KpiLedger ledger;
    KpiSummary summary;
    std::string trace_csv;  // filled when TraceOptions asked for a UE trace
};

// Debug taps, normally off.
struct TraceOptions {
    int trace_ue = -1;  // dump t,cell,beam,panel,rsrp_dbm,sinr_db rows for this UE
};

// Runs one scenario. Identical config + seed give a byte-identical event log
// regardless of the worker count. policy may be null (then config.policy_file
// is loaded if set).
SimResult run_scenario(const ScenarioConfig& config, const MroPolicy* policy = nullptr,
                       const TraceOptions* trace = nullptr);

// Writes events.log, kpi_summary.csv, reservation_cdf.csv, border_matrix.csv.
void write_run_outputs(const SimResult& result, const std::string& out_dir);

// Per-link large-scale map at the seeded drop positions:
// ue,cell,x,y,pl_db,sf_db rows for every (UE, cell) pair.
std::string large_scale_map_csv(const ScenarioConfig& config);

}  // namespace fchosim
