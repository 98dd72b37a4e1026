// test_link.cpp - Measurement pipeline: budgets, L3 filter, SINR, RLM.

#include <cmath>

#include <stdexcept>
#include "doctest.h"
#include "fchosim/link.hpp"

using namespace fchosim;

namespace {

ScenarioConfig quiet_config() {
    ScenarioConfig c;
    c.shadow.enabled = false;
    c.fading.enabled = false;
    return c;
}

struct World {
    ScenarioConfig config;
    NetworkLayout layout;
    std::vector<BeamConfig> beams;
    std::vector<ShadowField> shadow;
    PanelSet panels;

    explicit World(const ScenarioConfig& c)
        : config(c), layout(build_network(c)), beams(make_beam_table()), panels(c) {
        for (int cell = 0; cell < layout.num_cells(); ++cell) {
            shadow.emplace_back(c.seed, cell, c.shadow.enabled ? c.shadow.sigma_db : 0.0,
                                c.shadow.corr_dist_m, c.shadow.grid_res_m, 800.0);
        }
    }
};

}  // namespace

TEST_CASE("l3 filter: passthrough at a=1, halfway at a=0.5, rejects bad coefficients") {
    CHECK(l3_filter(-80.0, -70.0, 1.0) == doctest::Approx(-70.0));
    CHECK(l3_filter(-80.0, -70.0, 0.5) == doctest::Approx(-75.0));
    CHECK_THROWS_AS(l3_filter(-80.0, -70.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(l3_filter(-80.0, -70.0, 1.5), std::invalid_argument);
}

TEST_CASE("l3 filter converges to a constant input within 20 steps at a=0.5") {
    double v = -95.0;
    int steps = 0;
    while (std::fabs(v - (-70.0)) > 0.01) {
        v = l3_filter(v, -70.0, 0.5);
        REQUIRE(++steps <= 20);
    }
    CHECK(steps <= 20);
}

TEST_CASE("l3 filter output stays between the running min and max of its input") {
    RngStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        double v = rng.uniform(-120, -60);
        double lo = v, hi = v;
        for (int i = 0; i < 50; ++i) {
            double meas = rng.uniform(-120, -60);
            lo = std::min(lo, meas);
            hi = std::max(hi, meas);
            v = l3_filter(v, meas, 0.5);
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
}

TEST_CASE("raw rsrp is the additive link budget") {
    ScenarioConfig c = quiet_config();
    c.bs_height_m = 1.5;  // level geometry puts arrivals on the horizon
    World w(c);
    LinkMeasurer m(c, w.layout, w.beams, w.shadow, w.panels, 0);
    Vec2 pos{100.0, 0.0};
    double heading = deg2rad(-90.0);

    Vec2 v = wrapped_displacement(w.layout.cell_site(0), pos, w.layout);
    double d = v.norm();
    double pl = path_loss_db(d, d, c.carrier_ghz, 1.5, 1.5, soft_los_weight(d));
    double az_local = wrap_deg(azimuth_deg(v) - w.layout.cells[0].boresight_deg);
    for (int beam : {0, 5, 9}) {
        for (int panel : {0, 1, 2}) {
            double bg = beam_gain_db(w.beams[beam], az_local, 90.0);
            double pg = w.panels.rx_gain_db(panel, {wrap_deg(azimuth_deg(-v) - (-90.0)), 90.0});
            double expect = c.tx_power_dbm - pl + bg + pg;
            CHECK(m.raw_rsrp_dbm(pos, heading, 0, beam, panel, 0.0) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
    // Purity: identical calls, identical values.
    CHECK(m.raw_rsrp_dbm(pos, heading, 0, 3, 1, 0.0) ==
          m.raw_rsrp_dbm(pos, heading, 0, 3, 1, 0.0));
}

TEST_CASE("case IV sits exactly 18.66 dB below case II at the P1 boresight arrival") {
    ScenarioConfig c2 = quiet_config();
    c2.bs_height_m = 1.5;
    c2.blockage_case = BlockageCase::kII;
    ScenarioConfig c4 = c2;
    c4.blockage_case = BlockageCase::kIV;
    World w2(c2), w4(c4);
    LinkMeasurer m2(c2, w2.layout, w2.beams, w2.shadow, w2.panels, 0);
    LinkMeasurer m4(c4, w4.layout, w4.beams, w4.shadow, w4.panels, 0);
    // UE east of site 0, travelling south: the west arrival lands on P1's
    // boresight (the right edge of the handset).
    Vec2 pos{100.0, 0.0};
    double heading = deg2rad(-90.0);
    double a = m2.raw_rsrp_dbm(pos, heading, 0, 0, 0, 0.0);
    double b = m4.raw_rsrp_dbm(pos, heading, 0, 0, 0, 0.0);
    CHECK(a - b == doctest::Approx(18.66).epsilon(1e-12));
}

TEST_CASE("cell quality consolidates max over panels then max over beams") {
    LinkScan scan;
    scan.num_cells = 1;
    scan.num_sites = 1;
    scan.common_dbm = {-80.0};
    scan.best_beam_term_db = {6.0};  // strongest of the per-beam terms
    scan.best_beam = {4};
    scan.beam_sum_lin = {db_to_lin(6.0) + db_to_lin(1.0)};
    scan.beam_term_lin.resize(1);
    scan.panel_gain_db = {{-90.0 + 80.0, -74.0 + 80.0, -81.0 + 80.0}};  // P2 best
    // max over panels of the serving-cell best-beam RSRP
    auto rsrp = scan.serving_panel_rsrp(0);
    CHECK(rsrp[1] == doctest::Approx(-80.0 + 6.0 + 6.0));
    CHECK(scan.cell_quality_raw_dbm(0) == doctest::Approx(-80.0 + 6.0 + 6.0));
    // raising any panel gain never lowers the quality
    scan.panel_gain_db[0][0] += 30.0;
    CHECK(scan.cell_quality_raw_dbm(0) >= -80.0 + 6.0 + 6.0);
}

TEST_CASE("sinr: signal equal to noise with no interferers gives 0 dB") {
    LinkScan scan;
    scan.num_cells = 1;
    scan.num_sites = 1;
    double noise_dbm = -85.0;
    scan.common_dbm = {noise_dbm};
    scan.best_beam_term_db = {0.0};
    scan.best_beam = {0};
    scan.beam_sum_lin = {1.0};
    scan.beam_term_lin.resize(1);
    scan.beam_term_lin[0].fill(1.0 / 12.0);
    scan.panel_gain_db = {{0.0, 0.0, 0.0}};
    std::vector<double> sinr;
    cell_sinr_expectation_db(scan, {0}, 4, noise_dbm, sinr);
    CHECK(sinr[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("doubling a dominant interferer costs 3 dB") {
    LinkScan scan;
    scan.num_cells = 2;
    scan.num_sites = 1;
    scan.common_dbm = {-60.0, -65.0};
    scan.best_beam_term_db = {0.0, 0.0};
    scan.best_beam = {0, 0};
    scan.beam_sum_lin = {1.0, 1.0};
    scan.beam_term_lin.resize(2);
    scan.panel_gain_db = {{0.0, 0.0, 0.0}};
    std::vector<double> a, b;
    std::vector<int> panels{0, 0};
    cell_sinr_expectation_db(scan, panels, 4, -200.0, a);  // noise negligible
    scan.beam_sum_lin[1] *= 2.0;
    cell_sinr_expectation_db(scan, panels, 4, -200.0, b);
    CHECK(a[0] - b[0] == doctest::Approx(3.0103).epsilon(1e-4));
}

TEST_CASE("interference-limited sinr is invariant to a common power shift") {
    LinkScan scan;
    scan.num_cells = 3;
    scan.num_sites = 1;
    scan.common_dbm = {-60.0, -72.0, -81.0};
    scan.best_beam_term_db = {4.0, 2.0, 1.0};
    scan.best_beam = {0, 0, 0};
    scan.beam_sum_lin = {3.0, 2.0, 1.5};
    scan.beam_term_lin.resize(3);
    scan.panel_gain_db = {{1.0, 2.0, 3.0}};
    std::vector<double> a, b;
    std::vector<int> panels{1, 1, 1};
    cell_sinr_expectation_db(scan, panels, 4, -400.0, a);
    for (auto& v : scan.common_dbm) v += 10.0;
    cell_sinr_expectation_db(scan, panels, 4, -400.0, b);
    for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-9));
    // Expectation mode is a pure function: repeated calls agree exactly.
    std::vector<double> b2;
    cell_sinr_expectation_db(scan, panels, 4, -400.0, b2);
    for (int c = 0; c < 3; ++c) CHECK(b[c] == b2[c]);
}

TEST_CASE("sampled-scheduler interference averages to the analytic expectation") {
    LinkScan scan;
    scan.num_cells = 2;
    scan.num_sites = 1;
    scan.common_dbm = {-60.0, -63.0};
    scan.best_beam_term_db = {0.0, 0.0};
    scan.best_beam = {0, 0};
    scan.beam_term_lin.resize(2);
    double sum = 0;
    for (int b = 0; b < 12; ++b) {
        double term = 0.05 + 0.12 * b;
        scan.beam_term_lin[1][b] = term;
        sum += term;
    }
    scan.beam_term_lin[0].fill(0.5);
    scan.beam_sum_lin = {6.0, sum};
    scan.panel_gain_db = {{0.0, 0.0, 0.0}};

    const double noise_dbm = -90.0;
    const double noise = db_to_lin(noise_dbm);
    std::vector<double> expect, sampled;
    std::vector<int> panels{0, 0};
    cell_sinr_expectation_db(scan, panels, 4, noise_dbm, expect);
    const double s_lin = db_to_lin(scan.common_dbm[0] + scan.best_beam_term_db[0]);
    double i_expect = s_lin / db_to_lin(expect[0]) - noise;

    double i_acc = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        cell_sinr_sampled_db(scan, panels, 4, noise_dbm, 123, 7, t * 10, sampled);
        i_acc += s_lin / db_to_lin(sampled[0]) - noise;
    }
    double ratio_db = 10.0 * std::log10((i_acc / draws) / i_expect);
    CHECK(std::fabs(ratio_db) < 0.1);
}

TEST_CASE("rlm average: constants pass through, a window of one is instantaneous") {
    RlmAverager one(1);
    one.push(-3.0);
    CHECK(one.average_db() == doctest::Approx(-3.0));
    one.push(-9.0);
    CHECK(one.average_db() == doctest::Approx(-9.0));

    RlmAverager win(20);
    for (int i = 0; i < 40; ++i) win.push(-7.5);
    CHECK(win.average_db() == doctest::Approx(-7.5).epsilon(1e-9));
}

TEST_CASE("rlm average climbs monotonically after a step change") {
    RlmAverager win(20);
    for (int i = 0; i < 20; ++i) win.push(-60.0);
    double prev = win.average_db();
    for (int i = 0; i < 20; ++i) {
        win.push(-3.0);
        double next = win.average_db();
        CHECK(next >= prev - 1e-12);
        prev = next;
    }
    CHECK(prev == doctest::Approx(-3.0).epsilon(1e-6));
}
