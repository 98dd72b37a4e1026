// blockage.hpp - Multi-panel UE receive gain with hand-blockage overlays,
// the 3GPP stochastic blockage region, and serving-panel selection.
//
// Panel frame: portrait, screen parallel to the ground, boresights in the UE
// frame at P1 = 270 deg (right edge), P2 = 0 deg (top edge), P3 = 90 deg
// (left edge), all horizontal (zenith 90 deg). The UE frame rotates with the
// travel heading.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/geometry.hpp"

namespace fchosim {

inline constexpr int kNumPanels = 3;
inline constexpr double kPanelBoresightDeg[kNumPanels] = {270.0, 0.0, 90.0};

// Direction of arrival in the UE local frame.
struct UeDirection {
    double azimuth_deg = 0.0;  // 0 = travel direction
    double zenith_deg = 90.0;  // 90 = horizon
};

// Tabulated overlay loaded from CSV (azimuth_deg, zenith_deg, attenuation_db)
// on a regular grid; nearest-neighbor lookup.
class TabulatedOverlay {
public:
    static TabulatedOverlay load_csv(const std::string& path);
    double attenuation_db(const UeDirection& dir) const;
    bool empty() const { return values_.empty(); }

private:
    std::vector<double> az_;   // sorted unique azimuth grid
    std::vector<double> zen_;  // sorted unique zenith grid
    std::vector<double> values_;
};

// The per-case receive side: unblocked element pattern plus blockage overlay.
class PanelSet {
public:
    explicit PanelSet(const ScenarioConfig& config);

    // Unblocked element gain (max 5 dBi, 38.901-style parabolic element).
    double element_gain_db(int panel, const UeDirection& dir) const;

    // Case overlay attenuation (>= 0) for the configured blockage case.
    double overlay_db(int panel, const UeDirection& dir) const;

    // element gain - overlay - case-wide penalty (Case I form-factor penalty).
    double rx_gain_db(int panel, const UeDirection& dir) const;

    BlockageCase blockage_case() const { return case_; }

private:
    BlockageCase case_;
    double half_width_deg_;
    double case_penalty_db_ = 0.0;
    std::array<double, kNumPanels> overlay_peak_db_ = {0.0, 0.0, 0.0};
    std::array<double, kNumPanels> overlay_center_az_ = {270.0, 0.0, 90.0};
    std::array<TabulatedOverlay, kNumPanels> tabulated_;
};

// 3GPP stochastic blockage region: flat loss inside the angular rectangle.
struct StochasticBlockageRegion {
    double azimuth_deg = 260.0;
    double azimuth_span_deg = 120.0;
    double zenith_deg = 100.0;
    double zenith_span_deg = 80.0;
    double loss_db = 30.0;

    static StochasticBlockageRegion from_config(const StochasticRegionConfig& c);
    void validate() const;  // throws std::invalid_argument on bad spans
    // loss_db if dir is inside both closed intervals, else 0.
    double loss(const UeDirection& dir) const;
};

// Argmax panel with hysteresis: the incumbent is retained unless a challenger
// beats it by more than hysteresis_db. Ties break to the lowest panel index.
// incumbent < 0 means no incumbent.
int select_serving_panel(const std::array<double, kNumPanels>& rsrp_dbm, int incumbent,
                         double hysteresis_db);

}  // namespace fchosim
