// deployment.hpp - Hexagonal site grid with wrap-around and UE kinematics.
//
// The seven-site cluster repeats on a hexagonal superlattice (basis length
// sqrt(7) * ISD). All distances between UEs and cells use the minimum-norm
// displacement over the zero offset plus the six replica translations, so
// border cells see the same interference environment as inner ones.

#pragma once

#include <vector>

#include "fchosim/config.hpp"
#include "fchosim/geometry.hpp"
#include "fchosim/rng.hpp"

namespace fchosim {

struct CellInfo {
    int site = 0;
    double boresight_deg = 0.0;  // sector azimuth
};

struct NetworkLayout {
    double inter_site_distance = 200.0;
    double bs_height = 10.0;
    double ue_height = 1.5;
    std::vector<Vec2> sites;            // 1 or 7 positions
    std::vector<CellInfo> cells;        // 3 per site, site-major order
    std::vector<Vec2> replica_offsets;  // [0] is the zero vector, then 6 translations

    int num_cells() const { return static_cast<int>(cells.size()); }
    Vec2 cell_site(int cell) const { return sites[cells[cell].site]; }
};

// Builds the layout. Throws std::invalid_argument on non-positive distance or
// unsupported site count (1 or 7).
NetworkLayout build_network(const ScenarioConfig& config);

// Minimum-norm displacement from a to the nearest replica of b.
// Ties broken by lowest replica index.
Vec2 wrapped_displacement(const Vec2& a, const Vec2& b, const NetworkLayout& layout);

// True iff p is its own wrap representative (inside the fundamental domain).
bool in_fundamental_domain(const Vec2& p, const NetworkLayout& layout);

// Maps p back into the fundamental domain.
Vec2 wrap_position(Vec2 p, const NetworkLayout& layout);

// Uniform draw over the fundamental domain (rejection sampling).
Vec2 random_drop(RngStream& rng, const NetworkLayout& layout);

struct UeKinematics {
    Vec2 position;
    double speed_mps = 0.0;
    double heading_rad = 0.0;
};

// Advances position by speed*dt along the heading, wrapping at the border.
UeKinematics step_ue(const UeKinematics& ue, double dt_s, const NetworkLayout& layout);

}  // namespace fchosim
