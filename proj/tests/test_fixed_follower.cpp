#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "swimfollow/csv.hpp"
#include "swimfollow/fixed_follower.hpp"

using namespace swimfollow;

namespace {

FixedFollowerConfig small_grid() {
    FixedFollowerConfig cfg;
    cfg.lateral = {0.0, 60.0};
    cfg.longitudinal = {0.0, 50.0};
    cfg.duration = 2.0;
    return cfg;
}

const FixedFollowerCell& cell_at(const FixedFollowerResult& r, double lat, double lon) {
    const auto it = std::find_if(r.cells.begin(), r.cells.end(), [&](const FixedFollowerCell& c) {
        return c.lateral == lat && c.longitudinal == lon;
    });
    REQUIRE(it != r.cells.end());
    return *it;
}

} // namespace

TEST_CASE("fixed follower grid study") {
    const FixedFollowerConfig cfg = small_grid();
    const FixedFollowerResult r = run_fixed_follower(cfg);

    REQUIRE(r.cells.size() == 4);
    CHECK(r.ticks == static_cast<std::size_t>(cfg.duration / cfg.protocol.tick_dt));

    SUBCASE("overlapping placement is skipped") {
        const FixedFollowerCell& c = cell_at(r, 0.0, 0.0);
        CHECK(!c.valid);
        CHECK(c.p_left.empty());
    }
    SUBCASE("valid cells record full traces") {
        const FixedFollowerCell& c = cell_at(r, 60.0, 0.0);
        CHECK(c.valid);
        CHECK(c.p_left.size() == r.ticks);
        CHECK(c.p_right.size() == r.ticks);
        CHECK(c.rms == std::max(c.rms_left, c.rms_right));
        CHECK(c.rms > 0.0);
        CHECK(c.onset_delay >= 0.0);
    }
    SUBCASE("a staggered follower sees more signal than an in-line one") {
        CHECK(cell_at(r, 60.0, 0.0).rms > cell_at(r, 0.0, 50.0).rms);
    }
    SUBCASE("the study is deterministic") {
        const FixedFollowerResult again = run_fixed_follower(cfg);
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            CHECK(again.cells[i].rms == r.cells[i].rms);
            CHECK(again.cells[i].p_left == r.cells[i].p_left);
        }
    }
    SUBCASE("summary and trace files") {
        const auto dir = std::filesystem::temp_directory_path() / "swf_ff";
        write_fixed_follower_summary_csv(r, dir / "summary.csv");
        write_fixed_follower_traces_csv(r, cfg.protocol.tick_dt, dir / "traces.csv");

        const CsvTable summary = read_csv(dir / "summary.csv");
        REQUIRE(summary.rows.size() == 4);
        const int valid_col = summary.column("valid");
        const int rms_col = summary.column("rms_pa");
        std::size_t n_valid = 0;
        for (std::size_t i = 0; i < summary.rows.size(); ++i) {
            if (summary.num(i, valid_col) != 0.0) {
                ++n_valid;
                CHECK(summary.num(i, rms_col) > 0.0);
            }
        }
        CHECK(n_valid == 3);

        const CsvTable traces = read_csv(dir / "traces.csv");
        CHECK(traces.rows.size() == 3 * r.ticks);
    }
}
