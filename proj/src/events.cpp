// events.cpp - Event log serialization.

#include "fchosim/events.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fchosim {

namespace {

struct KindName {
    EventKind kind;
    const char* name;
};
constexpr std::array<KindName, 10> kKinds{{{EventKind::kPrep, "prep"},
                                           {EventKind::kRel, "rel"},
                                           {EventKind::kRep, "rep"},
                                           {EventKind::kExecStart, "exec_start"},
                                           {EventKind::kHoSuccess, "ho_success"},
                                           {EventKind::kHof, "hof"},
                                           {EventKind::kRlf, "rlf"},
                                           {EventKind::kReestablish, "reestablish"},
                                           {EventKind::kReportLost, "report_lost"},
                                           {EventKind::kPanelSwitch, "panel_switch"}}};

struct CauseName {
    EventCause cause;
    const char* name;
};
constexpr std::array<CauseName, 14> kCauses{{{EventCause::kNone, "-"},
                                             {EventCause::kCondition, "cond"},
                                             {EventCause::kReleaseEvent, "release-event"},
                                             {EventCause::kReplace, "replace"},
                                             {EventCause::kReactiveBlocklist, "reactive-blocklist"},
                                             {EventCause::kPostHoCho, "post-ho-cho"},
                                             {EventCause::kReestablish, "reestablish"},
                                             {EventCause::kTimer, "timer"},
                                             {EventCause::kBfr, "bfr"},
                                             {EventCause::kHof, "hof"},
                                             {EventCause::kRlf, "rlf"},
                                             {EventCause::kPrepReport, "prep-report"},
                                             {EventCause::kRelReport, "rel-report"},
                                             {EventCause::kRepReport, "rep-report"}}};

}  // namespace

const char* to_string(EventKind k) {
    for (const auto& e : kKinds)
        if (e.kind == k) return e.name;
    return "?";
}

const char* to_string(EventCause c) {
    for (const auto& e : kCauses)
        if (e.cause == c) return e.name;
    return "?";
}

EventKind event_kind_from_string(const std::string& s) {
    for (const auto& e : kKinds)
        if (s == e.name) return e.kind;
    throw std::invalid_argument("unknown event kind: " + s);
}

EventCause event_cause_from_string(const std::string& s) {
    for (const auto& e : kCauses)
        if (s == e.name) return e.cause;
    throw std::invalid_argument("unknown event cause: " + s);
}

std::string to_line(const EventRecord& e) {
    std::ostringstream os;
    os << e.t_ms << ',' << e.ue << ',' << to_string(e.kind) << ',' << e.from_cell << ','
       << e.to_cell << ',' << to_string(e.cause);
    return os.str();
}

EventRecord parse_event_line(const std::string& line) {
    std::istringstream is(line);
    std::string field;
    std::array<std::string, 6> fields;
    for (auto& f : fields) {
        if (!std::getline(is, f, ','))
            throw std::invalid_argument("malformed event line: " + line);
    }
    EventRecord e;
    e.t_ms = std::stoll(fields[0]);
    e.ue = std::stoi(fields[1]);
    e.kind = event_kind_from_string(fields[2]);
    e.from_cell = std::stoi(fields[3]);
    e.to_cell = std::stoi(fields[4]);
    e.cause = event_cause_from_string(fields[5]);
    return e;
}

static const char* kHeader = "t_ms,ue,kind,from_cell,to_cell,cause";

void write_event_log(const std::vector<EventRecord>& events, std::ostream& os) {
    os << kHeader << '\n';
    for (const auto& e : events) os << to_line(e) << '\n';
}

std::string event_log_to_string(const std::vector<EventRecord>& events) {
    std::ostringstream os;
    write_event_log(events, os);
    return os.str();
}

std::vector<EventRecord> read_event_log(std::istream& is) {
    std::vector<EventRecord> events;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first && line == kHeader) {
            first = false;
            continue;
        }
        first = false;
        events.push_back(parse_event_line(line));
    }
    return events;
}

std::vector<EventRecord> read_event_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open event log: " + path);
    return read_event_log(in);
}

}  // namespace fchosim
