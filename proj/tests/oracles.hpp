// oracles.hpp - Independent brute-force reference implementations, used only
// by the test suite. Each one re-derives its result by literal scanning so it
// shares no code with the production path it checks.

#pragma once

#include <cstdint>
#include <vector>

#include "fchosim/kpi.hpp"

namespace fchosim::oracle {

// Windowed condition check: returns every sample index n (0-based) where
// x[i] + offset < y[i] held for ALL i in the window of k consecutive samples
// ending at n. O(n*k) by construction.
inline std::vector<int> condition_fires(const std::vector<double>& x,
                                        const std::vector<double>& y, double offset,
                                        int k) {
    std::vector<int> fires;
    const int n = static_cast<int>(x.size());
    for (int m = 0; m < n; ++m) {
        if (m - k + 1 < 0) continue;
        bool all = true;
        for (int i = m - k + 1; i <= m; ++i) {
            if (!(x[i] + offset < y[i])) {
                all = false;
                break;
            }
        }
        if (all) fires.push_back(m);
    }
    return fires;
}

// Literal indicator-sum of the reservation time: steps of dt_ms on [0, t_sim),
// counting every step whose start lies inside some [open, close) interval.
inline double reservation_seconds(const std::vector<Interval>& intervals,
                                  std::int64_t dt_ms, std::int64_t t_sim_ms) {
    std::int64_t total = 0;
    for (std::int64_t m = 0; m < t_sim_ms; m += dt_ms) {
        for (const auto& iv : intervals) {
            if (m >= iv.begin_ms && m < iv.end_ms) {
                total += dt_ms;
                break;
            }
        }
    }
    return total / 1000.0;
}

// Millisecond-resolution boolean accumulation of outage time.
inline std::int64_t outage_total_ms(const std::vector<Interval>& intervals,
                                    std::int64_t t_sim_ms) {
    std::vector<char> out(static_cast<std::size_t>(t_sim_ms), 0);
    for (const auto& iv : intervals) {
        for (std::int64_t t = std::max<std::int64_t>(0, iv.begin_ms);
             t < std::min(t_sim_ms, iv.end_ms); ++t)
            out[static_cast<std::size_t>(t)] = 1;
    }
    std::int64_t total = 0;
    for (char c : out) total += c;
    return total;
}

// Earliest-match non-overlapping fast-handover classification, re-derived
// with an explicit used[] array over handover pairs.
inline FastHoCounts fast_handovers(const std::vector<HoRecord>& hos, double t_fh_s) {
    FastHoCounts counts;
    std::vector<char> used(hos.size(), 0);
    const auto window = static_cast<std::int64_t>(t_fh_s * 1000.0 + 0.5);
    for (std::size_t i = 0; i < hos.size(); ++i) {
        if (used[i] || i + 1 >= hos.size() || used[i + 1]) continue;
        const auto& a = hos[i];
        const auto& b = hos[i + 1];
        if (b.from_cell != a.to_cell) continue;
        if (b.t_ms - a.t_ms > window) continue;
        used[i] = used[i + 1] = 1;
        if (b.to_cell == a.from_cell)
            ++counts.ping_pongs;
        else
            ++counts.short_stays;
    }
    return counts;
}

}  // namespace fchosim::oracle
