// channel.hpp - Large-scale propagation, Tx beamforming gain, shadow fading
// and the sum-of-sinusoids fast-fading generator.

#pragma once

#include <cstdint>
#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/geometry.hpp"
#include "fchosim/rng.hpp"

namespace fchosim {

// ---------------------------------------------------------------------------
// Grid of beams

struct BeamConfig {
    int id = 0;                 // 1..12
    double azimuth_deg = 0.0;   // relative to sector boresight
    double zenith_deg = 90.0;   // theta_b
    double peak_gain_dbi = 0.0;
    double az_3db_deg = 0.0;    // full 3 dB beamwidth
    double zen_3db_deg = 0.0;
    bool is_outer = true;       // 16x8 panel beams (1..8)
};

inline constexpr double kBeamFrontBackDb = 30.0;

// The 12-beam table: 8 outer beams (16x8 panel) and 4 inner beams (8x4 panel).
std::vector<BeamConfig> make_beam_table();

// Parabolic fit: peak - min(12*(daz/az3db)^2 + 12*(dzen/zen3db)^2, front/back).
double beam_gain_db(const BeamConfig& beam, double direction_az_deg, double direction_zen_deg);

// ---------------------------------------------------------------------------
// Path loss (UMi street canyon at carrier_ghz, soft LoS blend)

// TR 38.901 UMi LoS path loss with the two-slope breakpoint.
double umi_los_db(double d3d_m, double fc_ghz, double bs_h, double ue_h);
// TR 38.901 UMi NLoS (lower-bounded by the LoS curve).
double umi_nlos_db(double d3d_m, double fc_ghz, double bs_h, double ue_h);
// Distance-dependent LoS probability, used directly as the soft-LoS weight.
double soft_los_weight(double d2d_m);
// w*LoS + (1-w)*NLoS. Distances below 1 m clamp to 1 m (warned once).
double path_loss_db(double d3d_m, double d2d_m, double fc_ghz, double bs_h, double ue_h,
                    double los_weight);

// ---------------------------------------------------------------------------
// Shadow fading: one spatially correlated log-normal field per cell, indexed
// by the UE displacement from the cell site so wrap replicas are consistent.

class ShadowField {
public:
    // extent_m: the field covers displacements in [-extent, extent]^2.
    ShadowField(std::uint64_t seed, int cell, double sigma_db, double corr_dist_m,
                double grid_res_m, double extent_m);

    double sample_db(const Vec2& displacement_from_site) const;  // bilinear

    double sigma_db() const { return sigma_db_; }
    const std::vector<double>& raw_grid() const { return grid_; }

private:
    double sigma_db_;
    double res_;
    double extent_;
    int n_ = 0;  // points per axis
    std::vector<double> grid_;
};

// ---------------------------------------------------------------------------
// Fast fading: Jakes-style sum of sinusoids per (UE, cell, beam) link.
// The bank is a continuous-time process; the simulator advances it on the SSB
// grid via rotation recurrences, tests may evaluate it at arbitrary times.

class FadingBank {
public:
    FadingBank() = default;
    FadingBank(std::uint64_t seed, std::uint64_t ue, int cell, int beam,
               int num_oscillators, double doppler_hz);

    void prepare_step(double dt_s);  // precompute per-oscillator rotations
    void advance();                  // advance by the prepared dt
    double power_linear() const;     // |h|^2, mean 1
    double power_db() const;

    // Direct evaluation at absolute time t (test hook, matches advance() path).
    double power_linear_at(double t_s) const;

private:
    int k_ = 0;
    std::vector<double> omega_;  // angular Doppler per oscillator
    std::vector<double> cos_;    // oscillator state (cos/sin of phase)
    std::vector<double> sin_;
    std::vector<double> rot_c_;  // per-oscillator rotation for the prepared dt
    std::vector<double> rot_s_;
};

}  // namespace fchosim
