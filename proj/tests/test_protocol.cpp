#include <doctest.h>

#include <set>
#include <vector>

#include "swimfollow/errors.hpp"
#include "swimfollow/protocol.hpp"

using namespace swimfollow;

namespace {

ImitationConfig tiny_imitation() {
    ImitationConfig cfg;
    cfg.bc_rollouts = 2;
    cfg.dagger_iterations = 1;
    cfg.dagger_rollouts = 2;
    cfg.eval_rollouts = 2;
    cfg.net.hidden = 8;
    cfg.net.fc = 8;
    cfg.train.epochs = 3;
    cfg.protocol.max_ticks = 100;
    cfg.seed = 77;
    return cfg;
}

} // namespace

TEST_CASE("phase seeds are deterministic and phase separated") {
    const auto a = phase_seeds(1, "bc-episodes", 6);
    const auto b = phase_seeds(1, "bc-episodes", 6);
    CHECK(a == b);
    REQUIRE(a.size() == 6);

    std::set<std::uint64_t> all(a.begin(), a.end());
    CHECK(all.size() == 6);

    const auto other_phase = phase_seeds(1, "eval-episodes", 6);
    const auto other_index = phase_seeds(1, "bc-episodes", 6, 1);
    const auto other_master = phase_seeds(2, "bc-episodes", 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(a[i] != other_phase[i]);
        CHECK(a[i] != other_index[i]);
        CHECK(a[i] != other_master[i]);
    }

    // a longer draw extends the same stream
    const auto longer = phase_seeds(1, "bc-episodes", 8);
    for (std::size_t i = 0; i < 6; ++i) CHECK(longer[i] == a[i]);
}

TEST_CASE("episode sides alternate") {
    CHECK(phase_side(0) == Side::left);
    CHECK(phase_side(1) == Side::right);
    CHECK(phase_side(2) == Side::left);
    CHECK(phase_side(7) == Side::right);
}

TEST_CASE("sequences copy every tick of a rollout") {
    ProtocolConfig cfg;
    cfg.max_ticks = 60;
    const auto seeds = phase_seeds(9, "bc-episodes", 2);
    const auto rollouts = collect_phase(cfg, seeds, Pilot::expert, nullptr);
    REQUIRE(rollouts.size() == 2);
    CHECK(rollouts[0].side == Side::left);
    CHECK(rollouts[1].side == Side::right);
    CHECK(rollouts[0].seed == seeds[0]);
    CHECK(rollouts[1].seed == seeds[1]);

    const Sequence s = sequence_from_rollout(rollouts[0]);
    REQUIRE(s.steps == rollouts[0].ticks.size());
    REQUIRE(s.inputs.size() == s.steps * 8);
    REQUIRE(s.labels.size() == s.steps);
    for (std::size_t t = 0; t < s.steps; ++t) {
        const auto x = frame_to_input(rollouts[0].ticks[t].frame);
        for (std::size_t j = 0; j < 8; ++j) CHECK(s.inputs[t * 8 + j] == x[j]);
        CHECK(s.labels[t] == rollouts[0].ticks[t].expert_sigma);
    }

    Dataset data;
    append_rollouts(data, rollouts);
    CHECK(data.sequences.size() == 2);
    append_rollouts(data, rollouts);
    CHECK(data.sequences.size() == 4);
    CHECK(data.total_steps() == 2 * (rollouts[0].ticks.size() + rollouts[1].ticks.size()));
}

TEST_CASE("imitation aggregates demonstrations across rounds") {
    const ImitationConfig cfg = tiny_imitation();
    const ImitationResult r = run_imitation(cfg);

    CHECK(r.bc_rollouts.size() == cfg.bc_rollouts);
    REQUIRE(r.dagger.size() == cfg.dagger_iterations);
    REQUIRE(r.dagger_rollouts.size() == cfg.dagger_iterations);
    CHECK(r.dagger_rollouts[0].size() == cfg.dagger_rollouts);
    CHECK(r.dataset.sequences.size() == cfg.bc_rollouts + cfg.dagger_rollouts);
    CHECK(&r.final_policy() == &r.dagger.back().checkpoint);
    CHECK(r.final_policy().params.size() == cfg.net.param_count());

    SUBCASE("the whole pipeline is deterministic") {
        const ImitationResult again = run_imitation(cfg);
        CHECK(again.bc.checkpoint.params == r.bc.checkpoint.params);
        CHECK(again.final_policy().params == r.final_policy().params);
        CHECK(again.dataset.total_steps() == r.dataset.total_steps());
    }
    SUBCASE("dagger episodes differ from the bc episodes") {
        CHECK(r.dagger_rollouts[0][0].seed != r.bc_rollouts[0].seed);
    }
}

TEST_CASE("imitation rejects undersized phases") {
    ImitationConfig cfg = tiny_imitation();
    cfg.bc_rollouts = 1;
    CHECK_THROWS_AS(run_imitation(cfg), ConfigError);
}

TEST_CASE("evaluation pairs episodes across cases") {
    ImitationConfig cfg = tiny_imitation();
    std::vector<EvalCase> cases;
    cases.push_back({"expert", Pilot::expert, nullptr});
    cases.push_back({"none", Pilot::none, nullptr});
    const auto results = evaluate_policies(cfg, cases);
    REQUIRE(results.size() == 2);
    CHECK(results[0].name == "expert");
    REQUIRE(results[0].rollouts.size() == cfg.eval_rollouts);
    REQUIRE(results[1].rollouts.size() == cfg.eval_rollouts);
    for (std::size_t i = 0; i < cfg.eval_rollouts; ++i) {
        CHECK(results[0].rollouts[i].seed == results[1].rollouts[i].seed);
        CHECK(results[0].rollouts[i].side == results[1].rollouts[i].side);
    }
    CHECK(results[0].metrics.size() == cfg.eval_rollouts);
    for (const Metrics& m : results[0].metrics) CHECK(m.mae == 0.0);
    CHECK(results[0].summary.mae_all.count == cfg.eval_rollouts);

    SUBCASE("policy cases need checkpoints") {
        cases.push_back({"bc", Pilot::policy, nullptr});
        CHECK_THROWS_AS(evaluate_policies(cfg, cases), ConfigError);
    }
}
