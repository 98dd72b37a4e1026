// channel.cpp - UMi path loss with soft LoS, beam gain fit, correlated shadow
// fading fields, Jakes-style sum-of-sinusoids fast fading.

#include "fchosim/channel.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fchosim {

// ---------------------------------------------------------------------------
// Grid of beams

std::vector<BeamConfig> make_beam_table() {
    std::vector<BeamConfig> beams;
    const double elem_gain = 8.0;  // dBi, TR 38.901 Table 7.3-1 element
    // 16x8 panel (horizontal x vertical), 0.5 / 0.7 wavelength spacing.
    const double outer_peak = elem_gain + 10.0 * std::log10(16.0 * 8.0);
    const double outer_az3 = 102.0 / (16.0 * 0.5);
    const double outer_zen3 = 102.0 / (8.0 * 0.7);
    // 8x4 panel for the inner beams.
    const double inner_peak = elem_gain + 10.0 * std::log10(8.0 * 4.0);
    const double inner_az3 = 102.0 / (8.0 * 0.5);
    const double inner_zen3 = 102.0 / (4.0 * 0.7);
    for (int b = 1; b <= 8; ++b) {
        beams.push_back({b, -52.5 + 15.0 * (b - 1), 90.0, outer_peak, outer_az3,
                         outer_zen3, true});
    }
    for (int b = 9; b <= 12; ++b) {
        beams.push_back({b, -45.0 + 30.0 * (b - 9), 97.0, inner_peak, inner_az3,
                         inner_zen3, false});
    }
    return beams;
}

double beam_gain_db(const BeamConfig& beam, double direction_az_deg,
                    double direction_zen_deg) {
    double daz = wrap_deg(direction_az_deg - beam.azimuth_deg) / beam.az_3db_deg;
    double dzen = (direction_zen_deg - beam.zenith_deg) / beam.zen_3db_deg;
    double att = 12.0 * (daz * daz + dzen * dzen);
    return beam.peak_gain_dbi - std::min(att, kBeamFrontBackDb);
}

// ---------------------------------------------------------------------------
// Path loss

double umi_los_db(double d3d_m, double fc_ghz, double bs_h, double ue_h) {
    double d = std::max(d3d_m, 1.0);
    // Breakpoint distance with effective antenna heights (h - 1 m).
    double dbp = 4.0 * (bs_h - 1.0) * (ue_h - 1.0) * fc_ghz * 1e9 / 299792458.0;
    double pl1 = 32.4 + 21.0 * std::log10(d) + 20.0 * std::log10(fc_ghz);
    if (d <= dbp || dbp <= 0) return pl1;
    double dh = bs_h - ue_h;
    return 32.4 + 40.0 * std::log10(d) + 20.0 * std::log10(fc_ghz) -
           9.5 * std::log10(dbp * dbp + dh * dh);
}

double umi_nlos_db(double d3d_m, double fc_ghz, double bs_h, double ue_h) {
    double d = std::max(d3d_m, 1.0);
    double nlos = 35.3 * std::log10(d) + 22.4 + 21.3 * std::log10(fc_ghz) -
                  0.3 * (ue_h - 1.5);
    return std::max(umi_los_db(d, fc_ghz, bs_h, ue_h), nlos);
}

double soft_los_weight(double d2d_m) {
    if (d2d_m <= 18.0) return 1.0;
    return 18.0 / d2d_m + std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
}

double path_loss_db(double d3d_m, double d2d_m, double fc_ghz, double bs_h, double ue_h,
                    double los_weight) {
    if (d3d_m < 1.0) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::fprintf(stderr, "fchosim: link distance below 1 m clamped\n");
        d3d_m = 1.0;
        d2d_m = std::max(d2d_m, 0.0);
    }
    double w = los_weight;
    return w * umi_los_db(d3d_m, fc_ghz, bs_h, ue_h) +
           (1.0 - w) * umi_nlos_db(d3d_m, fc_ghz, bs_h, ue_h);
}

// ---------------------------------------------------------------------------
// Shadow fading

ShadowField::ShadowField(std::uint64_t seed, int cell, double sigma_db,
                         double corr_dist_m, double grid_res_m, double extent_m)
    : sigma_db_(sigma_db), res_(grid_res_m), extent_(extent_m) {
    if (sigma_db_ <= 0) return;  // disabled: empty grid samples as 0 dB
    n_ = static_cast<int>(std::ceil(2.0 * extent_m / grid_res_m)) + 1;
    grid_.resize(static_cast<std::size_t>(n_) * n_);
    RngStream rng = RngStream::keyed(seed, 0x5adauLL, static_cast<std::uint64_t>(cell));
    for (auto& v : grid_) v = rng.normal();
    // Two AR(1) passes (rows then columns) give an exponentially decaying
    // correlation along each axis while keeping unit variance.
    double rho = std::exp(-grid_res_m / corr_dist_m);
    double s = std::sqrt(1.0 - rho * rho);
    for (int y = 0; y < n_; ++y) {
        double* row = &grid_[static_cast<std::size_t>(y) * n_];
        for (int x = 1; x < n_; ++x) row[x] = rho * row[x - 1] + s * row[x];
    }
    for (int x = 0; x < n_; ++x) {
        for (int y = 1; y < n_; ++y) {
            double& v = grid_[static_cast<std::size_t>(y) * n_ + x];
            v = rho * grid_[static_cast<std::size_t>(y - 1) * n_ + x] + s * v;
        }
    }
    for (auto& v : grid_) v *= sigma_db_;
}

double ShadowField::sample_db(const Vec2& d) const {
    if (grid_.empty()) return 0.0;
    double gx = (d.x + extent_) / res_;
    double gy = (d.y + extent_) / res_;
    gx = std::clamp(gx, 0.0, static_cast<double>(n_ - 1));
    gy = std::clamp(gy, 0.0, static_cast<double>(n_ - 1));
    int x0 = std::min(static_cast<int>(gx), n_ - 2);
    int y0 = std::min(static_cast<int>(gy), n_ - 2);
    if (n_ < 2) return grid_[0];
    double fx = gx - x0;
    double fy = gy - y0;
    auto at = [&](int x, int y) { return grid_[static_cast<std::size_t>(y) * n_ + x]; };
    return (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x0 + 1, y0) +
           (1 - fx) * fy * at(x0, y0 + 1) + fx * fy * at(x0 + 1, y0 + 1);
}

// ---------------------------------------------------------------------------
// Fast fading

FadingBank::FadingBank(std::uint64_t seed, std::uint64_t ue, int cell, int beam,
                       int num_oscillators, double doppler_hz)
    : k_(num_oscillators) {
    omega_.resize(k_);
    cos_.resize(k_);
    sin_.resize(k_);
    RngStream rng = RngStream::keyed(seed, 0xfadeu, ue, static_cast<std::uint64_t>(cell),
                                     static_cast<std::uint64_t>(beam));
    for (int i = 0; i < k_; ++i) {
        double alpha = rng.uniform(0.0, 2.0 * kPi);
        double phi = rng.uniform(0.0, 2.0 * kPi);
        omega_[i] = 2.0 * kPi * doppler_hz * std::cos(alpha);
        cos_[i] = std::cos(phi);
        sin_[i] = std::sin(phi);
    }
}

void FadingBank::prepare_step(double dt_s) {
    rot_c_.resize(k_);
    rot_s_.resize(k_);
    for (int i = 0; i < k_; ++i) {
        rot_c_[i] = std::cos(omega_[i] * dt_s);
        rot_s_[i] = std::sin(omega_[i] * dt_s);
    }
}

void FadingBank::advance() {
    for (int i = 0; i < k_; ++i) {
        double c = cos_[i] * rot_c_[i] - sin_[i] * rot_s_[i];
        double s = sin_[i] * rot_c_[i] + cos_[i] * rot_s_[i];
        cos_[i] = c;
        sin_[i] = s;
    }
}

double FadingBank::power_linear() const {
    double re = 0, im = 0;
    for (int i = 0; i < k_; ++i) {
        re += cos_[i];
        im += sin_[i];
    }
    return (re * re + im * im) / k_;
}

double FadingBank::power_db() const { return 10.0 * std::log10(power_linear()); }

double FadingBank::power_linear_at(double t_s) const {
    double re = 0, im = 0;
    for (int i = 0; i < k_; ++i) {
        // cos_/sin_ hold the initial phase when the bank has not been advanced
        double phase = omega_[i] * t_s + std::atan2(sin_[i], cos_[i]);
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return (re * re + im * im) / k_;
}

}  // namespace fchosim
