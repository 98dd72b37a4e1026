// events.hpp - Structured simulation event log. One record per line:
//   t_ms,ue,kind,from_cell,to_cell,cause
// This log is the contract consumed by the KPI and policy-derivation code.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fchosim {

enum class EventKind {
    kPrep,        // target cell entered the prepared set
    kRel,         // prepared cell released (cause says why)
    kRep,         // replace: weakest prepared swapped for a stronger neighbor
    kExecStart,   // execution condition met, random access started
    kHoSuccess,   // random access succeeded, serving cell switched
    kHof,         // handover failure (T_HOF expired)
    kRlf,         // radio link failure (timer expiry or beam failure recovery)
    kReestablish, // connection re-establishment target selected
    kReportLost,  // measurement report not delivered (serving SINR below threshold)
    kPanelSwitch, // serving panel changed (fields carry panel ids)
};

enum class EventCause {
    kNone,
    kCondition,        // plain condition-triggered action
    kReleaseEvent,     // Eq.-style release condition
    kReplace,
    kReactiveBlocklist,
    kPostHoCho,        // bulk release after a CHO handover
    kReestablish,      // set cleared on re-establishment
    kTimer,            // RLF timer expiry
    kBfr,              // beam failure recovery failure
    kHof,
    kRlf,
    kPrepReport,       // which report was lost
    kRelReport,
    kRepReport,
};

const char* to_string(EventKind k);
const char* to_string(EventCause c);
EventKind event_kind_from_string(const std::string& s);
EventCause event_cause_from_string(const std::string& s);

struct EventRecord {
    std::int64_t t_ms = 0;
    int ue = 0;
    EventKind kind = EventKind::kPrep;
    int from_cell = -1;
    int to_cell = -1;
    EventCause cause = EventCause::kNone;
};

std::string to_line(const EventRecord& e);
EventRecord parse_event_line(const std::string& line);

// Serializes with a header line; byte-stable for identical event sequences.
void write_event_log(const std::vector<EventRecord>& events, std::ostream& os);
std::string event_log_to_string(const std::vector<EventRecord>& events);
std::vector<EventRecord> read_event_log(std::istream& is);
std::vector<EventRecord> read_event_log_file(const std::string& path);

}  // namespace fchosim
