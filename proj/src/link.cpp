// link.cpp - Raw RSRP scans, L3 filtering, SINR and RLM averaging.

#include "fchosim/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fchosim {

double l3_filter(double prev_dbm, double meas_dbm, double a) {
    if (!(a > 0.0 && a <= 1.0))
        throw std::invalid_argument("l3 filter coefficient must be in (0, 1]");
    return (1.0 - a) * prev_dbm + a * meas_dbm;
}

RlmAverager::RlmAverager(int capacity) : ring_(std::max(1, capacity)) {}

void RlmAverager::reset() {
    head_ = 0;
    count_ = 0;
}

void RlmAverager::push(double sinr_db) {
    ring_[head_] = db_to_lin(sinr_db);
    head_ = (head_ + 1) % static_cast<int>(ring_.size());
    count_ = std::min(count_ + 1, static_cast<int>(ring_.size()));
}

double RlmAverager::average_db() const {
    double sum = 0;
    for (int i = 0; i < count_; ++i) sum += ring_[i];
    return lin_to_db(sum / std::max(1, count_));
}

double LinkScan::cell_quality_raw_dbm(int cell) const {
    const auto& pg = panel_gain_db[site_of(cell)];
    return common_dbm[cell] + *std::max_element(pg.begin(), pg.end()) +
           best_beam_term_db[cell];
}

LinkMeasurer::LinkMeasurer(const ScenarioConfig& config, const NetworkLayout& layout,
                           const std::vector<BeamConfig>& beams,
                           const std::vector<ShadowField>& shadow, const PanelSet& panels,
                           std::uint64_t ue_id)
    : config_(config),
      layout_(layout),
      beams_(beams),
      shadow_(shadow),
      panels_(panels),
      tx_dbm_(config.tx_power_dbm) {
    if (config.blockage_model == BlockageModel::kStochastic3gpp) {
        stochastic_region_ = StochasticBlockageRegion::from_config(config.stochastic_region);
        use_stochastic_ = true;
    }
    const int ncells = layout.num_cells();
    fading_.reserve(static_cast<std::size_t>(ncells) * beams_.size());
    for (int c = 0; c < ncells; ++c) {
        for (std::size_t b = 0; b < beams_.size(); ++b) {
            if (config.fading.enabled) {
                fading_.emplace_back(config.seed, ue_id, c, static_cast<int>(b),
                                     config.fading.num_oscillators, config.doppler_hz());
                fading_.back().prepare_step(config.ssb_period_ms / 1000.0);
            } else {
                fading_.emplace_back();
            }
        }
    }
}

void LinkMeasurer::measure(const Vec2& position, double heading_rad, LinkScan& out) {
    const int ncells = layout_.num_cells();
    const int nsites = static_cast<int>(layout_.sites.size());
    const int nbeams = static_cast<int>(beams_.size());
    out.num_cells = ncells;
    out.num_sites = nsites;
    out.common_dbm.resize(ncells);
    out.best_beam_term_db.resize(ncells);
    out.best_beam.resize(ncells);
    out.beam_sum_lin.resize(ncells);
    out.beam_term_lin.resize(ncells);
    out.panel_gain_db.resize(nsites);

    const double dh = layout_.bs_height - layout_.ue_height;
    const double heading_deg = rad2deg(heading_rad);

    for (int s = 0; s < nsites; ++s) {
        Vec2 v = wrapped_displacement(layout_.sites[s], position, layout_);
        double d2d = v.norm();
        double d3d = std::sqrt(d2d * d2d + dh * dh);
        double pl = path_loss_db(d3d, d2d, config_.carrier_ghz, layout_.bs_height,
                                 layout_.ue_height, soft_los_weight(d2d));
        double dep_az = azimuth_deg(v);
        double tilt = rad2deg(std::atan2(dh, d2d));
        double dep_zen = 90.0 + tilt;  // BS looks down toward the UE
        UeDirection arrival{wrap_deg(azimuth_deg(-v) - heading_deg), 90.0 - tilt};

        double region_loss =
            use_stochastic_ ? stochastic_region_.loss(arrival) : 0.0;
        for (int p = 0; p < kNumPanels; ++p) {
            out.panel_gain_db[s][p] = panels_.rx_gain_db(p, arrival) - region_loss;
        }

        for (int cell = 3 * s; cell < 3 * s + 3; ++cell) {
            double sf = shadow_[cell].sample_db(v);
            out.common_dbm[cell] = tx_dbm_ - pl - sf;
            double az_local = wrap_deg(dep_az - layout_.cells[cell].boresight_deg);
            FadingBank* banks = &fading_[static_cast<std::size_t>(cell) * nbeams];
            double sum = 0.0;
            double best = -1.0;
            int best_idx = 0;
            auto& terms = out.beam_term_lin[cell];
            for (int b = 0; b < nbeams; ++b) {
                double gain = beam_gain_db(beams_[b], az_local, dep_zen);
                double h2 = config_.fading.enabled ? banks[b].power_linear() : 1.0;
                double term = db_to_lin(gain) * h2;
                terms[b] = term;
                sum += term;
                if (term > best) {
                    best = term;
                    best_idx = b;
                }
            }
            out.beam_sum_lin[cell] = sum;
            out.best_beam[cell] = best_idx;
            out.best_beam_term_db[cell] = lin_to_db(best);
        }
    }
    if (config_.fading.enabled) {
        for (auto& bank : fading_) bank.advance();
    }
}

double LinkMeasurer::raw_rsrp_dbm(const Vec2& position, double heading_rad, int cell,
                                  int beam, int panel, double t_s) const {
    const double dh = layout_.bs_height - layout_.ue_height;
    Vec2 v = wrapped_displacement(layout_.cell_site(cell), position, layout_);
    double d2d = v.norm();
    double d3d = std::sqrt(d2d * d2d + dh * dh);
    double pl = path_loss_db(d3d, d2d, config_.carrier_ghz, layout_.bs_height,
                             layout_.ue_height, soft_los_weight(d2d));
    double tilt = rad2deg(std::atan2(dh, d2d));
    UeDirection arrival{wrap_deg(azimuth_deg(-v) - rad2deg(heading_rad)), 90.0 - tilt};
    double pg = panels_.rx_gain_db(panel, arrival) -
                (use_stochastic_ ? stochastic_region_.loss(arrival) : 0.0);
    double az_local = wrap_deg(azimuth_deg(v) - layout_.cells[cell].boresight_deg);
    double gain = beam_gain_db(beams_[beam], az_local, 90.0 + tilt);
    double sf = shadow_[cell].sample_db(v);
    double fad = 0.0;
    if (config_.fading.enabled) {
        const auto& bank =
            fading_[static_cast<std::size_t>(cell) * beams_.size() + beam];
        fad = 10.0 * std::log10(bank.power_linear_at(t_s));
    }
    return tx_dbm_ - pl - sf + gain + pg + fad;
}

int best_panel_for_cell(const LinkScan& scan, int cell) {
    const auto& pg = scan.panel_gain_db[scan.site_of(cell)];
    int best = 0;
    for (int p = 1; p < kNumPanels; ++p) {
        if (pg[p] > pg[best]) best = p;
    }
    return best;
}

namespace {

// Per-cell SINR from per-cell full-beam-sum linear power terms (panel-free);
// the panel gain of the evaluated cell's panel applies to every link.
void finish_sinr(const LinkScan& scan, const std::vector<int>& panel_of_cell,
                 const std::vector<double>& beam_power_lin, double noise_dbm,
                 double frac, std::vector<double>& out) {
    const int n = scan.num_cells;
    out.resize(n);
    const double noise = db_to_lin(noise_dbm);
    // total interference per panel, so each cell's own-panel view is O(1)
    double total[kNumPanels] = {0, 0, 0};
    for (int p = 0; p < kNumPanels; ++p) {
        for (int c = 0; c < n; ++c) {
            total[p] += db_to_lin(scan.common_dbm[c] + scan.panel_gain_db[scan.site_of(c)][p]) *
                        beam_power_lin[c] * frac;
        }
    }
    for (int c = 0; c < n; ++c) {
        const int p = panel_of_cell[c];
        double pg = scan.panel_gain_db[scan.site_of(c)][p];
        double own = db_to_lin(scan.common_dbm[c] + pg) * beam_power_lin[c] * frac;
        double s = db_to_lin(scan.common_dbm[c] + pg + scan.best_beam_term_db[c]);
        out[c] = lin_to_db(s / (noise + (total[p] - own)));
    }
}

}  // namespace

void cell_sinr_expectation_db(const LinkScan& scan, const std::vector<int>& panel_of_cell,
                              int k_beams, double noise_dbm, std::vector<double>& out) {
    const double frac = static_cast<double>(k_beams) / 12.0;
    finish_sinr(scan, panel_of_cell, scan.beam_sum_lin, noise_dbm, frac, out);
}

void cell_sinr_sampled_db(const LinkScan& scan, const std::vector<int>& panel_of_cell,
                          int k_beams, double noise_dbm, std::uint64_t seed,
                          std::uint64_t ue, std::int64_t t_ms, std::vector<double>& out) {
    const int n = scan.num_cells;
    std::vector<double> sampled(n);
    for (int c = 0; c < n; ++c) {
        RngStream rng = RngStream::keyed(seed, 0x5c4edULL, ue,
                                         static_cast<std::uint64_t>(c),
                                         static_cast<std::uint64_t>(t_ms));
        // Partial Fisher-Yates: k distinct beams of the 12.
        int idx[12];
        for (int i = 0; i < 12; ++i) idx[i] = i;
        double sum = 0.0;
        for (int i = 0; i < k_beams; ++i) {
            int j = i + static_cast<int>(rng.next_below(12 - i));
            std::swap(idx[i], idx[j]);
            sum += scan.beam_term_lin[c][idx[i]];
        }
        sampled[c] = sum;
    }
    finish_sinr(scan, panel_of_cell, sampled, noise_dbm, 1.0, out);
}

}  // namespace fchosim
