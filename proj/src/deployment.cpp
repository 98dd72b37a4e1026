// deployment.cpp - Hex grid construction, wrap-around arithmetic, UE motion.

#include "fchosim/deployment.hpp"

#include <cmath>
#include <stdexcept>

namespace fchosim {

namespace {

// Superlattice basis for the 7-site cluster: |u1| = |u2| = sqrt(7) * ISD.
// u1 = 2*a1 + a2, u2 = -a1 + 3*a2 with a1 = D(1,0), a2 = D(1/2, sqrt(3)/2).
std::vector<Vec2> make_replica_offsets(double isd) {
    const double s3 = std::sqrt(3.0);
    Vec2 u1{2.5 * isd, 0.5 * s3 * isd};
    Vec2 u2{0.5 * isd, 1.5 * s3 * isd};
    Vec2 u3 = u1 - u2;  // (2, -sqrt(3)) * isd
    return {Vec2{0, 0}, u1, u2, u3, -u1, -u2, -u3};
}

}  // namespace

NetworkLayout build_network(const ScenarioConfig& config) {
    if (config.inter_site_distance_m <= 0)
        throw std::invalid_argument("inter_site_distance_m must be > 0");
    if (config.num_sites != 1 && config.num_sites != 7)
        throw std::invalid_argument("num_sites must be 1 or 7");

    NetworkLayout layout;
    layout.inter_site_distance = config.inter_site_distance_m;
    layout.bs_height = config.bs_height_m;
    layout.ue_height = config.ue_height_m;
    layout.replica_offsets = make_replica_offsets(config.inter_site_distance_m);

    layout.sites.push_back({0, 0});
    if (config.num_sites == 7) {
        for (int k = 0; k < 6; ++k) {
            double a = deg2rad(60.0 * k);
            layout.sites.push_back(
                {config.inter_site_distance_m * std::cos(a),
                 config.inter_site_distance_m * std::sin(a)});
        }
    }
    for (std::size_t s = 0; s < layout.sites.size(); ++s) {
        for (int sector = 0; sector < 3; ++sector) {
            layout.cells.push_back({static_cast<int>(s), 120.0 * sector});
        }
    }
    return layout;
}

Vec2 wrapped_displacement(const Vec2& a, const Vec2& b, const NetworkLayout& layout) {
    Vec2 best = b - a;
    double best_n2 = best.norm2();
    for (std::size_t i = 1; i < layout.replica_offsets.size(); ++i) {
        Vec2 d = b + layout.replica_offsets[i] - a;
        double n2 = d.norm2();
        if (n2 < best_n2) {  // strict: ties keep the lowest replica index
            best_n2 = n2;
            best = d;
        }
    }
    return best;
}

bool in_fundamental_domain(const Vec2& p, const NetworkLayout& layout) {
    double n2 = p.norm2();
    for (std::size_t i = 1; i < layout.replica_offsets.size(); ++i) {
        if ((p - layout.replica_offsets[i]).norm2() < n2 - 1e-9) return false;
    }
    return true;
}

Vec2 wrap_position(Vec2 p, const NetworkLayout& layout) {
    // The per-step motion is tiny relative to the lattice, but iterate until
    // stable so the function is total.
    for (int iter = 0; iter < 4; ++iter) {
        bool moved = false;
        double n2 = p.norm2();
        for (std::size_t i = 1; i < layout.replica_offsets.size(); ++i) {
            Vec2 q = p - layout.replica_offsets[i];
            double qn2 = q.norm2();
            if (qn2 < n2 - 1e-9) {
                p = q;
                n2 = qn2;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return p;
}

Vec2 random_drop(RngStream& rng, const NetworkLayout& layout) {
    // Circumradius of the wrap fundamental domain (Voronoi cell of the
    // superlattice): |u| / sqrt(3).
    double r = layout.replica_offsets[1].norm() / std::sqrt(3.0) + 1.0;
    for (;;) {
        Vec2 p{rng.uniform(-r, r), rng.uniform(-r, r)};
        if (in_fundamental_domain(p, layout)) return p;
    }
}

UeKinematics step_ue(const UeKinematics& ue, double dt_s, const NetworkLayout& layout) {
    UeKinematics next = ue;
    next.position.x += ue.speed_mps * dt_s * std::cos(ue.heading_rad);
    next.position.y += ue.speed_mps * dt_s * std::sin(ue.heading_rad);
    next.position = wrap_position(next.position, layout);
    return next;
}

}  // namespace fchosim
