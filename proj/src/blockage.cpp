// blockage.cpp - MPUE panel patterns, hand-blockage overlays, the 3GPP
// stochastic blockage region and serving-panel selection.

#include "fchosim/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fchosim {

namespace {

// Directional handset element: 5 dBi peak with a wide parabolic pattern so
// the three edge panels jointly cover the azimuth plane.
constexpr double kElementMaxGainDbi = 5.0;
constexpr double kElementBeamwidthDeg = 90.0;
constexpr double kElementFrontBackDb = 25.0;

// Great-circle angle between two (azimuth, zenith) directions, degrees.
double angular_distance_deg(double az1, double zen1, double az2, double zen2) {
    double a1 = deg2rad(az1), z1 = deg2rad(zen1);
    double a2 = deg2rad(az2), z2 = deg2rad(zen2);
    double dot = std::sin(z1) * std::sin(z2) * std::cos(a1 - a2) +
                 std::cos(z1) * std::cos(z2);
    dot = std::clamp(dot, -1.0, 1.0);
    return rad2deg(std::acos(dot));
}

}  // namespace

// ---------------------------------------------------------------------------
// TabulatedOverlay

TabulatedOverlay TabulatedOverlay::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open overlay csv: " + path);
    TabulatedOverlay ov;
    std::vector<std::tuple<double, double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
            continue;  // header / comments
        std::istringstream ls(line);
        double az, zen, att;
        char comma;
        if (ls >> az >> comma >> zen >> comma >> att) rows.emplace_back(az, zen, att);
    }
    if (rows.empty()) throw std::invalid_argument("overlay csv has no data rows: " + path);
    for (auto& [az, zen, att] : rows) {
        if (att < 0) throw std::invalid_argument("overlay attenuation must be >= 0");
        ov.az_.push_back(az);
        ov.zen_.push_back(zen);
    }
    std::sort(ov.az_.begin(), ov.az_.end());
    ov.az_.erase(std::unique(ov.az_.begin(), ov.az_.end()), ov.az_.end());
    std::sort(ov.zen_.begin(), ov.zen_.end());
    ov.zen_.erase(std::unique(ov.zen_.begin(), ov.zen_.end()), ov.zen_.end());
    ov.values_.assign(ov.az_.size() * ov.zen_.size(), 0.0);
    for (auto& [az, zen, att] : rows) {
        auto ai = std::lower_bound(ov.az_.begin(), ov.az_.end(), az) - ov.az_.begin();
        auto zi = std::lower_bound(ov.zen_.begin(), ov.zen_.end(), zen) - ov.zen_.begin();
        ov.values_[ai * ov.zen_.size() + zi] = att;
    }
    return ov;
}

double TabulatedOverlay::attenuation_db(const UeDirection& dir) const {
    if (values_.empty()) return 0.0;
    auto nearest = [](const std::vector<double>& grid, double v) {
        auto it = std::lower_bound(grid.begin(), grid.end(), v);
        if (it == grid.end()) return grid.size() - 1;
        if (it == grid.begin()) return std::size_t{0};
        std::size_t hi = it - grid.begin();
        return (v - grid[hi - 1] <= grid[hi] - v) ? hi - 1 : hi;
    };
    double az = wrap_deg(dir.azimuth_deg);
    if (az < 0) az += 360.0;  // tables use [0, 360)
    std::size_t ai = nearest(az_, az);
    std::size_t zi = nearest(zen_, dir.zenith_deg);
    return values_[ai * zen_.size() + zi];
}

// ---------------------------------------------------------------------------
// PanelSet

PanelSet::PanelSet(const ScenarioConfig& config)
    : case_(config.blockage_case), half_width_deg_(config.overlay_half_width_deg) {
    // Finger shadows wrap in from behind the handset, so each lobe core sits
    // rearward of its panel boresight; the peak is scaled so the boresight
    // keeps exactly the anchored attenuation.
    auto lobe = [&](double boresight, double anchor_db, double offset_deg,
                    double& peak, double& center) {
        double off = std::min(std::fabs(offset_deg), half_width_deg_ - 1e-6);
        double edge = std::cos(0.5 * kPi * off / half_width_deg_);
        peak = anchor_db / (edge * edge);
        // Positive azimuths run counter-clockwise; "rearward" for the right
        // panel (P1) is -offset toward 270-, for the left panel (P3) +offset.
        center = boresight + (boresight < 180.0 ? -offset_deg : offset_deg);
    };
    const bool p1 = case_ == BlockageCase::kIII || case_ == BlockageCase::kIV;
    const bool p3 = case_ == BlockageCase::kIII || case_ == BlockageCase::kV;
    if (case_ == BlockageCase::kI) case_penalty_db_ = config.case1_penalty_db;
    if (p1)
        lobe(kPanelBoresightDeg[0], config.p1_boresight_loss_db,
             config.p1_lobe_offset_deg, overlay_peak_db_[0], overlay_center_az_[0]);
    if (p3)
        lobe(kPanelBoresightDeg[2], config.p3_boresight_loss_db,
             config.p3_lobe_offset_deg, overlay_peak_db_[2], overlay_center_az_[2]);
    for (int p = 0; p < kNumPanels; ++p) {
        if (p < static_cast<int>(config.overlay_csv.size()) && !config.overlay_csv[p].empty())
            tabulated_[p] = TabulatedOverlay::load_csv(config.overlay_csv[p]);
    }
}

double PanelSet::element_gain_db(int panel, const UeDirection& dir) const {
    double daz = wrap_deg(dir.azimuth_deg - kPanelBoresightDeg[panel]) / kElementBeamwidthDeg;
    double dzen = (dir.zenith_deg - 90.0) / kElementBeamwidthDeg;
    double att = 12.0 * (daz * daz + dzen * dzen);
    return kElementMaxGainDbi - std::min(att, kElementFrontBackDb);
}

double PanelSet::overlay_db(int panel, const UeDirection& dir) const {
    if (!tabulated_[panel].empty()) return tabulated_[panel].attenuation_db(dir);
    double peak = overlay_peak_db_[panel];
    if (peak <= 0.0) return 0.0;
    double psi = angular_distance_deg(dir.azimuth_deg, dir.zenith_deg,
                                      overlay_center_az_[panel], 90.0);
    if (psi > half_width_deg_) return 0.0;
    double c = std::cos(0.5 * kPi * psi / half_width_deg_);
    return peak * c * c;
}

double PanelSet::rx_gain_db(int panel, const UeDirection& dir) const {
    return element_gain_db(panel, dir) - overlay_db(panel, dir) - case_penalty_db_;
}

// ---------------------------------------------------------------------------
// StochasticBlockageRegion

StochasticBlockageRegion StochasticBlockageRegion::from_config(
    const StochasticRegionConfig& c) {
    StochasticBlockageRegion r{c.azimuth_deg, c.azimuth_span_deg, c.zenith_deg,
                               c.zenith_span_deg, c.loss_db};
    r.validate();
    return r;
}

void StochasticBlockageRegion::validate() const {
    if (!(azimuth_span_deg > 0 && azimuth_span_deg <= 360))
        throw std::invalid_argument("blockage region azimuth span must be in (0, 360]");
    if (!(zenith_span_deg > 0 && zenith_span_deg <= 180))
        throw std::invalid_argument("blockage region zenith span must be in (0, 180]");
}

double StochasticBlockageRegion::loss(const UeDirection& dir) const {
    // Closed intervals on both angles; azimuth wraps.
    double da = std::fabs(wrap_deg(dir.azimuth_deg - azimuth_deg));
    double dz = std::fabs(dir.zenith_deg - zenith_deg);
    if (da <= azimuth_span_deg / 2.0 && dz <= zenith_span_deg / 2.0) return loss_db;
    return 0.0;
}

// ---------------------------------------------------------------------------

int select_serving_panel(const std::array<double, kNumPanels>& rsrp_dbm, int incumbent,
                         double hysteresis_db) {
    int best = 0;
    for (int p = 1; p < kNumPanels; ++p) {
        if (rsrp_dbm[p] > rsrp_dbm[best]) best = p;  // ties keep the lowest index
    }
    if (incumbent < 0 || incumbent >= kNumPanels) return best;
    if (rsrp_dbm[best] > rsrp_dbm[incumbent] + hysteresis_db) return best;
    return incumbent;
}

}  // namespace fchosim
