// mro.cpp - Handover statistics collection and policy derivation.

#include "fchosim/mro.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <stdexcept>

namespace fchosim {

const char* to_string(MroApproach a) {
    switch (a) {
        case MroApproach::kNone: return "none";
        case MroApproach::kBlocklist: return "blocklist";
        case MroApproach::kOffsetReduction: return "offset-reduction";
        case MroApproach::kCombined: return "combined";
    }
    return "?";
}

MroApproach approach_from_string(const std::string& s) {
    if (s == "none") return MroApproach::kNone;
    if (s == "blocklist") return MroApproach::kBlocklist;
    if (s == "offset-reduction") return MroApproach::kOffsetReduction;
    if (s == "combined") return MroApproach::kCombined;
    throw std::invalid_argument("unknown optimization approach: " + s);
}

bool MroPolicy::has_blocklist() const {
    for (auto b : blocked)
        if (b) return true;
    return false;
}

HandoverProbabilityMatrix build_h(const std::vector<EventRecord>& events, int num_cells) {
    HandoverProbabilityMatrix m;
    m.num_cells = num_cells;
    m.h.assign(static_cast<std::size_t>(num_cells) * num_cells, 0.0);
    std::vector<std::int64_t> row_total(num_cells, 0);
    std::vector<std::int64_t> counts(m.h.size(), 0);
    for (const auto& e : events) {
        if (e.kind != EventKind::kHoSuccess) continue;
        if (e.from_cell < 0 || e.from_cell >= num_cells || e.to_cell < 0 ||
            e.to_cell >= num_cells || e.from_cell == e.to_cell)
            continue;
        ++counts[static_cast<std::size_t>(e.from_cell) * num_cells + e.to_cell];
        ++row_total[e.from_cell];
    }
    std::int64_t grand_total = 0;
    for (auto t : row_total) grand_total += t;
    if (grand_total == 0)
        std::fprintf(stderr,
                     "fchosim: warning: no handovers in the training log, the derived "
                     "policy will block nothing and reduce nothing\n");
    for (int i = 0; i < num_cells; ++i) {
        if (row_total[i] == 0) continue;
        for (int j = 0; j < num_cells; ++j) {
            m.at(i, j) = static_cast<double>(counts[static_cast<std::size_t>(i) * num_cells + j]) /
                         static_cast<double>(row_total[i]);
        }
    }
    return m;
}

MroPolicy derive_policy(const HandoverProbabilityMatrix& h, MroApproach approach,
                        const PolicyThresholds& th, std::int64_t* touched_entries) {
    MroPolicy p;
    p.approach = approach;
    p.num_cells = h.num_cells;
    const std::size_t n2 = static_cast<std::size_t>(h.num_cells) * h.num_cells;
    p.blocked.assign(n2, 0);
    p.o_prep_db.assign(n2, th.base_offset_db);
    std::int64_t touched = 0;
    if (approach != MroApproach::kNone) {
        for (int i = 0; i < h.num_cells; ++i) {
            for (int j = 0; j < h.num_cells; ++j) {
                double hij = h.at(i, j);
                ++touched;
                std::size_t k = static_cast<std::size_t>(i) * h.num_cells + j;
                switch (approach) {
                    case MroApproach::kBlocklist:
                        if (hij <= th.p_block) p.blocked[k] = 1;
                        break;
                    case MroApproach::kOffsetReduction:
                        if (hij <= th.p_reduce) p.o_prep_db[k] = th.reduced_offset_db;
                        break;
                    case MroApproach::kCombined:
                        if (hij <= th.p_block)
                            p.blocked[k] = 1;
                        else if (hij <= th.p_reduce)
                            p.o_prep_db[k] = th.reduced_offset_db;
                        break;
                    case MroApproach::kNone:
                        break;
                }
            }
        }
    }
    if (touched_entries != nullptr) *touched_entries = touched;
    return p;
}

// ---------------------------------------------------------------------------
// CSV persistence

void save_h_csv(const HandoverProbabilityMatrix& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "from\\to";
    for (int j = 0; j < h.num_cells; ++j) out << ',' << j;
    out << '\n';
    char buf[32];
    for (int i = 0; i < h.num_cells; ++i) {
        out << i;
        for (int j = 0; j < h.num_cells; ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", h.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

HandoverProbabilityMatrix load_h_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty H matrix file");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');  // row label
        std::vector<double> row;
        while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
        rows.push_back(std::move(row));
    }
    HandoverProbabilityMatrix m;
    m.num_cells = static_cast<int>(rows.size());
    m.h.assign(static_cast<std::size_t>(m.num_cells) * m.num_cells, 0.0);
    for (int i = 0; i < m.num_cells; ++i) {
        if (static_cast<int>(rows[i].size()) != m.num_cells)
            throw std::invalid_argument("ragged H matrix row in " + path);
        for (int j = 0; j < m.num_cells; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

namespace {

void write_policy_csv(const MroPolicy& policy, std::ostream& out) {
    out << "# approach=" << to_string(policy.approach) << '\n';
    out << "i,j,blocked,o_prep_db\n";
    char buf[32];
    for (int i = 0; i < policy.num_cells; ++i) {
        for (int j = 0; j < policy.num_cells; ++j) {
            std::size_t k = static_cast<std::size_t>(i) * policy.num_cells + j;
            std::snprintf(buf, sizeof(buf), "%.9g", policy.o_prep_db[k]);
            out << i << ',' << j << ',' << int(policy.blocked[k]) << ',' << buf << '\n';
        }
    }
}

MroPolicy read_policy_csv(std::istream& in) {
    MroPolicy p;
    std::string line;
    std::vector<std::tuple<int, int, int, double>> rows;
    int max_cell = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("approach=");
            if (pos != std::string::npos)
                p.approach = approach_from_string(line.substr(pos + 9));
            continue;
        }
        if (line.rfind("i,j,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string f;
        std::getline(ls, f, ',');
        int i = std::stoi(f);
        std::getline(ls, f, ',');
        int j = std::stoi(f);
        std::getline(ls, f, ',');
        int blocked = std::stoi(f);
        std::getline(ls, f, ',');
        double off = std::stod(f);
        rows.emplace_back(i, j, blocked, off);
        max_cell = std::max({max_cell, i, j});
    }
    p.num_cells = max_cell + 1;
    const std::size_t n2 = static_cast<std::size_t>(p.num_cells) * p.num_cells;
    p.blocked.assign(n2, 0);
    p.o_prep_db.assign(n2, 10.0);
    for (auto& [i, j, blocked, off] : rows) {
        std::size_t k = static_cast<std::size_t>(i) * p.num_cells + j;
        p.blocked[k] = static_cast<std::uint8_t>(blocked != 0);
        p.o_prep_db[k] = off;
    }
    return p;
}

}  // namespace

void save_policy_csv(const MroPolicy& policy, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    write_policy_csv(policy, out);
}

MroPolicy load_policy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open policy file: " + path);
    return read_policy_csv(in);
}

std::string policy_to_csv_string(const MroPolicy& policy) {
    std::ostringstream os;
    write_policy_csv(policy, os);
    return os.str();
}

MroPolicy policy_from_csv_string(const std::string& text) {
    std::istringstream is(text);
    return read_policy_csv(is);
}

}  // namespace fchosim
