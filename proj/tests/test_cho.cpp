// test_cho.cpp - State machine semantics on synthetic traces, plus the
// window-condition oracle equivalence.

#include <memory>

#include "doctest.h"
#include "fchosim/cho.hpp"
#include "fchosim/rng.hpp"
#include "oracles.hpp"

using namespace fchosim;

namespace {

ChoParams test_params(int ncells, Mode mode, int max_prepared = 4) {
    ChoParams p;
    p.num_cells = ncells;
    p.mode = mode;
    p.max_prepared = max_prepared;
    p.bfr_window_ms = 1000000000;  // individual tests re-enable BFR
    return p;
}

// Drives a ChoEngine with hand-set L3 / SINR vectors on the 10 ms grid.
struct Harness {
    ChoParams p;
    ChoEngine eng;
    std::vector<double> l3;
    std::vector<double> sinr;
    std::int64_t t = 0;

    Harness(const ChoParams& params, int serving)
        : p(params), eng(params, 0), l3(params.num_cells, -100.0),
          sinr(params.num_cells, 10.0) {
        eng.attach(serving, 0);
    }

    void step_once() {
        ChoInputs in;
        in.t_ms = t;
        in.ssb = (t % 20) == 0;
        in.l3_dbm = &l3;
        in.cell_sinr_db = &sinr;
        int s = eng.serving_cell();
        in.serving_sinr_db = s >= 0 ? sinr[s] : 0.0;
        eng.step(in);
        t += 10;
    }

    void run_until(std::int64_t t_end) {
        while (t < t_end) step_once();
    }

    int count(EventKind k) {
        int n = 0;
        for (const auto& e : eng.events())
            if (e.kind == k) ++n;
        return n;
    }
    const EventRecord* first(EventKind k) {
        for (const auto& e : eng.events())
            if (e.kind == k) return &e;
        return nullptr;
    }
};

}  // namespace

TEST_CASE("condition monitor matches the spec examples") {
    // Preparation: P_c0 < P_c' + o_prep held for the whole window.
    ConditionMonitor prep(4);
    for (int i = 0; i < 3; ++i) CHECK(!prep.update(-80.0, -10.0, -71.0));
    CHECK(prep.update(-80.0, -10.0, -71.0));  // fires on the 4th sample

    // One interior violation resets the window.
    ConditionMonitor reset(4);
    reset.update(-80.0, -10.0, -71.0);
    reset.update(-80.0, -10.0, -71.0);
    CHECK(!reset.update(-80.0, -10.0, -95.0));
    CHECK(!reset.update(-80.0, -10.0, -71.0));
    CHECK(!reset.update(-80.0, -10.0, -71.0));
    CHECK(!reset.update(-80.0, -10.0, -71.0));
    CHECK(reset.update(-80.0, -10.0, -71.0));

    // Execution boundary is strict: P_c' exactly at P_c0 + o never fires.
    ConditionMonitor exec(1);
    CHECK(!exec.update(-80.0, 3.0, -77.0));

    // 70 ms of satisfaction with an 80 ms window never fires (3 of 4 samples).
    ConditionMonitor shorter(4);
    CHECK(!shorter.update(-80, -10, -71));
    CHECK(!shorter.update(-80, -10, -71));
    CHECK(!shorter.update(-80, -10, -71));
}

TEST_CASE("condition monitor is exactly the brute-force window oracle") {
    RngStream rng(2024);
    // Interpret the trace per condition kind; all four share the canonical
    // x + offset < y form.
    struct Kind {
        double offset;
    };
    const Kind kinds[4] = {{-10.0}, {13.0}, {3.0}, {3.0}};
    for (const Kind& kind : kinds) {
        for (int trial = 0; trial < 25000; ++trial) {
            int k = 1 + static_cast<int>(rng.next_below(6));
            int n = 10 + static_cast<int>(rng.next_below(30));
            std::vector<double> x(n), y(n);
            double xv = rng.uniform(-100, -60), yv = rng.uniform(-100, -60);
            for (int i = 0; i < n; ++i) {
                xv += rng.uniform(-4, 4);
                yv += rng.uniform(-4, 4);
                x[i] = xv;
                y[i] = yv;
            }
            std::vector<int> expected = oracle::condition_fires(x, y, kind.offset, k);
            ConditionMonitor mon(k);
            std::vector<int> got;
            for (int i = 0; i < n; ++i) {
                if (mon.update(x[i], kind.offset, y[i])) got.push_back(i);
            }
            REQUIRE(got == expected);
        }
    }
}

TEST_CASE("preparation: report, latency, and the prepared-at time") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.run_until(110);
    // Condition fires on the 4th SSB sample (t=60): the request is signaled
    // there, the cell enters the set one preparation latency later.
    REQUIRE(h.count(EventKind::kPrep) == 1);
    const EventRecord* e = h.first(EventKind::kPrep);
    CHECK(e->t_ms == 60);
    CHECK(e->from_cell == 0);
    CHECK(e->to_cell == 1);
    CHECK(!h.eng.is_prepared(1));
    h.run_until(120);  // prepared at t = 60 + 50
    CHECK(h.eng.is_prepared(1));
    CHECK(!h.eng.is_prepared(2));
}

TEST_CASE("a lost report defers preparation until the link recovers") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.sinr = {-9.0, 10.0, 10.0};  // below gamma_out: reports undeliverable
    h.run_until(200);
    CHECK(h.count(EventKind::kPrep) == 0);
    CHECK(h.count(EventKind::kReportLost) > 0);
    h.sinr[0] = -2.0;  // recovers; the still-fired condition retries
    h.run_until(300);
    CHECK(h.count(EventKind::kPrep) == 1);
}

TEST_CASE("a condition that un-fires before delivery never prepares") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.sinr[0] = -9.0;
    h.run_until(70);                  // fired at t=60, report lost
    h.l3[1] = -95.0;                  // falls out of the preparation condition
    h.sinr[0] = -2.0;                 // link recovers, but nothing is fired
    h.run_until(400);
    CHECK(h.count(EventKind::kPrep) == 0);
}

TEST_CASE("duplicate preparation requests are a no-op while one is in flight") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0};
    h.run_until(400);
    CHECK(h.count(EventKind::kPrep) == 1);
}

TEST_CASE("a full set admits no direct preparation, only the replace path") {
    Harness h(test_params(3, Mode::kFcho, /*max_prepared=*/1), 0);
    h.l3 = {-80.0, -78.0, -78.5};
    h.run_until(400);
    CHECK(h.count(EventKind::kPrep) == 1);  // only the stronger one made it
    CHECK(h.eng.is_prepared(1));
    CHECK(!h.eng.is_prepared(2));
    // Replace does not fire: -78.5 is not 3 dB above the weakest (-78).
    CHECK(h.count(EventKind::kRep) == 0);
}

TEST_CASE("release condition: windowed, reported, and resets cleanly") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0};
    h.run_until(200);
    REQUIRE(h.eng.is_prepared(1));
    h.l3[1] = -95.0;  // -95 + 13 < -80 holds: release after 4 samples
    h.run_until(400);
    CHECK(h.count(EventKind::kRel) == 1);
    const EventRecord* e = h.first(EventKind::kRel);
    CHECK(e->cause == EventCause::kReleaseEvent);
    CHECK(!h.eng.is_prepared(1));
    // Too weak for preparation afterwards: -80 < -95 + 10 is false.
    h.run_until(600);
    CHECK(h.count(EventKind::kPrep) == 1);
}

TEST_CASE("release boundary: exactly o_rel below the serving cell never fires") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0};
    h.run_until(200);
    REQUIRE(h.eng.is_prepared(1));
    h.l3[1] = -93.0;  // -93 + 13 == -80: strict inequality is false
    h.run_until(500);
    CHECK(h.count(EventKind::kRel) == 0);
    CHECK(h.eng.is_prepared(1));
}

TEST_CASE("replace swaps the weakest prepared cell for a stronger neighbor") {
    Harness h(test_params(4, Mode::kFcho, /*max_prepared=*/2), 0);
    h.l3 = {-70.0, -78.0, -79.0, -100.0};  // serving strong: no execution fires
    h.run_until(140);  // serialized requests at t=60 and t=80 complete at 110/130
    REQUIRE(h.eng.is_prepared(1));
    REQUIRE(h.eng.is_prepared(2));
    h.l3[3] = -74.0;  // 3 dB above the weakest (-79): replace fires after 80 ms
    h.run_until(400);
    REQUIRE(h.count(EventKind::kRep) == 1);
    const EventRecord* e = h.first(EventKind::kRep);
    CHECK(e->t_ms == 200);
    CHECK(e->from_cell == 2);
    CHECK(e->to_cell == 3);
    CHECK(h.eng.is_prepared(1));
    CHECK(h.eng.is_prepared(3));
    CHECK(!h.eng.is_prepared(2));
    // Replace counts once: no separate prep/rel events for the swap.
    CHECK(h.count(EventKind::kPrep) == 2);
    CHECK(h.count(EventKind::kRel) == 0);
}

TEST_CASE("replace boundary: exactly o_rep above the weakest never swaps") {
    Harness h(test_params(4, Mode::kFcho, /*max_prepared=*/2), 0);
    h.l3 = {-70.0, -78.0, -79.0, -100.0};
    h.run_until(140);
    REQUIRE(h.eng.is_prepared(1));
    REQUIRE(h.eng.is_prepared(2));
    h.l3[3] = -76.0;  // -79 + 3 == -76: strict inequality is false
    h.run_until(500);
    CHECK(h.count(EventKind::kRep) == 0);
    CHECK(h.eng.is_prepared(1));
    CHECK(h.eng.is_prepared(2));
}

TEST_CASE("execution succeeds on the first good attempt and books 55 ms outage") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.run_until(200);
    REQUIRE(h.eng.is_prepared(1));
    h.l3[1] = -70.0;  // execution: -80 + 3 < -70
    h.run_until(400);
    REQUIRE(h.count(EventKind::kExecStart) == 1);
    REQUIRE(h.count(EventKind::kHoSuccess) == 1);
    const EventRecord* es = h.first(EventKind::kExecStart);
    const EventRecord* ho = h.first(EventKind::kHoSuccess);
    CHECK(es->t_ms == ho->t_ms);  // healthy target: success at the first attempt
    CHECK(h.eng.serving_cell() == 1);
    CHECK(h.eng.outage().total_ms() == 55);
}

TEST_CASE("execution toward a dead target expires into HOF and re-establishment") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.sinr = {10.0, -10.0, 10.0};
    h.run_until(200);
    REQUIRE(h.eng.is_prepared(1));
    h.l3[1] = -70.0;
    h.run_until(480);
    REQUIRE(h.count(EventKind::kExecStart) == 1);
    const EventRecord* es = h.first(EventKind::kExecStart);
    REQUIRE(h.count(EventKind::kHof) == 1);
    const EventRecord* hof = h.first(EventKind::kHof);
    CHECK(hof->t_ms == es->t_ms + 200);
    CHECK(h.count(EventKind::kHoSuccess) == 0);
    REQUIRE(h.count(EventKind::kReestablish) == 1);
    const EventRecord* re = h.first(EventKind::kReestablish);
    CHECK(re->from_cell == 0);
    CHECK(re->cause == EventCause::kHof);
    // 180 ms outage booked at declaration; prepared set cleared.
    CHECK(h.eng.prepared_cells().empty());
    CHECK(h.eng.outage().total_ms() == 180);
    CHECK(!h.eng.connected());
    h.run_until(700);  // re-establishment completes 180 ms after declaration
    CHECK(h.eng.connected());
}

TEST_CASE("a target recovering mid-RACH is caught before the timer expires") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -100.0};
    h.sinr = {10.0, -10.0, 10.0};
    h.run_until(200);
    h.l3[1] = -70.0;
    // Execution fires at t=260 (4 samples of the new level: 200..260).
    h.run_until(260 + 150);
    REQUIRE(h.count(EventKind::kExecStart) == 1);
    h.sinr[1] = -2.0;  // crosses above gamma_out 150 ms into the window
    h.run_until(700);
    REQUIRE(h.count(EventKind::kHoSuccess) == 1);
    CHECK(h.first(EventKind::kHoSuccess)->t_ms == 260 + 160);  // next attempt
    CHECK(h.count(EventKind::kHof) == 0);
}

TEST_CASE("post-handover: CHO clears the set, FCHO keeps it plus the old serving") {
    for (Mode mode : {Mode::kCho, Mode::kFcho}) {
        Harness h(test_params(4, mode), 0);
        h.l3 = {-80.0, -78.0, -79.0, -100.0};
        h.run_until(200);
        REQUIRE(h.eng.is_prepared(1));
        REQUIRE(h.eng.is_prepared(2));
        h.l3[1] = -70.0;
        h.run_until(270);  // right after the handover at t=260
        REQUIRE(h.count(EventKind::kHoSuccess) == 1);
        CHECK(h.eng.serving_cell() == 1);
        if (mode == Mode::kCho) {
            CHECK(h.eng.prepared_cells().empty());
            CHECK(h.count(EventKind::kRel) == 1);  // bulk release of cell 2
            CHECK(h.first(EventKind::kRel)->cause == EventCause::kPostHoCho);
        } else {
            CHECK(h.eng.is_prepared(0));  // previous serving retained
            CHECK(h.eng.is_prepared(2));
            CHECK(!h.eng.is_prepared(1));
            CHECK(h.count(EventKind::kRel) == 0);
        }
    }
}

TEST_CASE("post-handover keeps the set within its cap when it was full") {
    Harness h(test_params(5, Mode::kFcho, /*max_prepared=*/3), 0);
    h.l3 = {-80.0, -78.0, -79.0, -79.5, -100.0};
    h.run_until(300);
    REQUIRE(h.eng.prepared_cells().size() == 3);
    h.l3[1] = -70.0;
    h.run_until(500);
    REQUIRE(h.count(EventKind::kHoSuccess) == 1);
    CHECK(h.eng.prepared_cells().size() == 3);
    CHECK(h.eng.is_prepared(0));
}

TEST_CASE("rlf timer: a short dip with recovery above gamma_in does not fail") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -100.0};
    h.sinr = {-8.5, 10.0};
    h.run_until(300);  // timer runs
    h.sinr[0] = -5.0;  // recovers above gamma_in = -6
    h.run_until(2000);
    CHECK(h.count(EventKind::kRlf) == 0);
}

TEST_CASE("rlf timer expires after 1000 ms below gamma_out") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -100.0};
    h.sinr = {-8.5, 10.0};
    h.run_until(1500);
    REQUIRE(h.count(EventKind::kRlf) == 1);
    CHECK(h.first(EventKind::kRlf)->t_ms == 1000);
    CHECK(h.first(EventKind::kRlf)->cause == EventCause::kTimer);
    CHECK(h.count(EventKind::kReestablish) == 1);
}

TEST_CASE("oscillating between the thresholds keeps the rlf timer running") {
    Harness h(test_params(2, Mode::kFcho), 0);
    h.l3 = {-80.0, -100.0};
    h.sinr = {-9.0, 10.0};
    h.run_until(100);  // timer started
    h.sinr[0] = -7.0;  // between gamma_out and gamma_in: no cancel
    h.run_until(1500);
    REQUIRE(h.count(EventKind::kRlf) == 1);
    CHECK(h.first(EventKind::kRlf)->t_ms == 1000);
}

TEST_CASE("failed beam recovery declares an rlf after the configured window") {
    ChoParams p = test_params(2, Mode::kFcho);
    p.bfr_window_ms = 200;
    Harness h(p, 0);
    h.l3 = {-80.0, -100.0};
    h.sinr = {-9.0, 10.0};
    h.run_until(500);
    REQUIRE(h.count(EventKind::kRlf) == 1);
    CHECK(h.first(EventKind::kRlf)->t_ms == 190);  // 20 steps of 10 ms observed
    CHECK(h.first(EventKind::kRlf)->cause == EventCause::kBfr);
}

TEST_CASE("re-establishment attaches to the strongest cell and resets context") {
    Harness h(test_params(3, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -76.0};
    h.sinr = {-8.5, 10.0, 10.0};
    // Preparations happen (reports fail below -8? -8.5 < -8, so lost) -> none.
    h.run_until(1100);
    REQUIRE(h.count(EventKind::kRlf) == 1);
    const EventRecord* re = h.first(EventKind::kReestablish);
    REQUIRE(re != nullptr);
    CHECK(re->from_cell == 0);
    CHECK(re->to_cell == 2);  // strongest L3
    CHECK(re->cause == EventCause::kRlf);
    // Attach completes 180 ms later; the context starts out empty.
    h.run_until(1190);
    CHECK(h.eng.serving_cell() == 2);
    CHECK(h.eng.connected());
    CHECK(h.eng.prepared_cells().empty());
}

TEST_CASE("reservation intervals pair with set membership at every step") {
    Harness h(test_params(4, Mode::kFcho), 0);
    h.l3 = {-80.0, -78.0, -79.0, -100.0};
    h.run_until(300);
    h.l3[1] = -70.0;
    h.run_until(600);
    h.eng.finalize(600);
    // Cell 1 was prepared at 110 and left the set at handover; cell 2 and the
    // old serving keep reservations open until the end of the run.
    const auto& per_cell = h.eng.reservations().per_cell();
    REQUIRE(per_cell[1].size() == 1);
    CHECK(per_cell[1][0].begin_ms == 110);
    REQUIRE(per_cell[0].size() == 1);
    CHECK(per_cell[0][0].end_ms == 600);
    REQUIRE(per_cell[2].size() == 1);
    CHECK(per_cell[2][0].end_ms == 600);
}
