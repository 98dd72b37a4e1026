// link.hpp - Per-UE measurement pipeline: raw RSRP per (cell, beam, panel),
// L3 cell quality filtering, downlink SINR and the RLM average.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fchosim/blockage.hpp"
#include "fchosim/channel.hpp"
#include "fchosim/deployment.hpp"

namespace fchosim {

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

// Exponential L3 filter in the dB domain: (1-a)*prev + a*meas.
// Throws std::invalid_argument unless 0 < a <= 1.
double l3_filter(double prev_dbm, double meas_dbm, double a);

// Sliding linear-domain mean of the serving SINR over a fixed window.
class RlmAverager {
public:
    explicit RlmAverager(int capacity = 1);
    void reset();
    void push(double sinr_db);
    double average_db() const;  // mean over the samples seen so far (up to capacity)
    bool empty() const { return count_ == 0; }

private:
    std::vector<double> ring_;  // linear SINR values
    int head_ = 0;
    int count_ = 0;
};

// One SSB-instant scan of all (cell, beam, panel) links for a single UE.
struct LinkScan {
    int num_cells = 0;
    int num_sites = 0;
    // Per cell
    std::vector<double> common_dbm;         // tx - path loss - shadow fading
    std::vector<double> best_beam_term_db;  // max over beams of gain + fading
    std::vector<int> best_beam;
    std::vector<double> beam_sum_lin;       // sum over beams of lin(gain)*|h|^2
    std::vector<std::array<double, 12>> beam_term_lin;
    // Per site (arrival direction is shared by the site's three cells)
    std::vector<std::array<double, kNumPanels>> panel_gain_db;

    int site_of(int cell) const { return cell / 3; }
    // Best-beam L1 RSRP of a cell on one panel.
    double rsrp_dbm(int cell, int panel) const {
        return common_dbm[cell] + panel_gain_db[site_of(cell)][panel] + best_beam_term_db[cell];
    }
    // Beam-consolidated raw cell quality: max over panels, then max over beams.
    double cell_quality_raw_dbm(int cell) const;
    std::array<double, kNumPanels> serving_panel_rsrp(int cell) const {
        return {rsrp_dbm(cell, 0), rsrp_dbm(cell, 1), rsrp_dbm(cell, 2)};
    }
};

// Owns the fading banks of one UE and produces LinkScans.
class LinkMeasurer {
public:
    LinkMeasurer(const ScenarioConfig& config, const NetworkLayout& layout,
                 const std::vector<BeamConfig>& beams,
                 const std::vector<ShadowField>& shadow, const PanelSet& panels,
                 std::uint64_t ue_id);

    // Advances fading by one SSB period and scans all links.
    void measure(const Vec2& position, double heading_rad, LinkScan& out);

    // Budget composition for one link, without advancing fading (test hook).
    double raw_rsrp_dbm(const Vec2& position, double heading_rad, int cell, int beam,
                        int panel, double t_s) const;

private:
    const ScenarioConfig& config_;
    const NetworkLayout& layout_;
    const std::vector<BeamConfig>& beams_;
    const std::vector<ShadowField>& shadow_;
    const PanelSet& panels_;
    StochasticBlockageRegion stochastic_region_;
    bool use_stochastic_ = false;
    std::vector<FadingBank> fading_;  // cell-major, 12 beams per cell
    double tx_dbm_;
};

// Expected-interference SINR for every cell as the hypothetical serving cell:
// S_c / (N + sum_{c2 != c} (K_b/12) * P_c2). Cell c is received on
// panel_of_cell[c] (its own best panel for target evaluation); interference
// is received on that same panel.
void cell_sinr_expectation_db(const LinkScan& scan, const std::vector<int>& panel_of_cell,
                              int k_beams, double noise_dbm, std::vector<double>& out);

// Sampled-scheduler variant: per interfering cell draw k_beams beams without
// replacement, keyed by (seed, ue, cell, t) so results are schedule-free.
void cell_sinr_sampled_db(const LinkScan& scan, const std::vector<int>& panel_of_cell,
                          int k_beams, double noise_dbm, std::uint64_t seed,
                          std::uint64_t ue, std::int64_t t_ms, std::vector<double>& out);

// Panel with the highest receive gain toward a cell's site.
int best_panel_for_cell(const LinkScan& scan, int cell);

}  // namespace fchosim
