#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "exsim/scenario.hpp"

using namespace exsim;

namespace {

const char* kMinimalGame1 = R"(
version = exemplar-sim/1
experiment = game1
seed = 42

[population]
universal = 1
reciprocal = 2
kin = 1
reproductive_selfish = 3

[backend]
kind = scripted
)";

}  // namespace

TEST_CASE("minimal config parses with defaults filled in") {
    auto cfg = parse_config_text(kMinimalGame1);
    CHECK(cfg.experiment_id == ExperimentId::Game1);
    CHECK(cfg.seed == 42);
    CHECK(cfg.follower_count == 7);
    CHECK(cfg.world.max_days == 30);
    CHECK(cfg.world.obs_mem_lines == 6);
    CHECK(cfg.vote_targets == std::vector<std::string>{"elder_yuri"});
    CHECK(cfg.backend.kind == "scripted");
    CHECK_FALSE(cfg.chosen_one.has_value());
}

TEST_CASE("config version is mandatory") {
    CHECK_THROWS_AS(parse_config_text("experiment = game1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("version = exemplar-sim/2\nexperiment = game1\n"),
                    ConfigError);
}

TEST_CASE("mix must sum to the follower count") {
    std::string text = std::string(kMinimalGame1) + "\n[population]\nfollower_count = 9\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text),
                         doctest::Contains("does not match"), ConfigError);
}

TEST_CASE("remote backend requires base_url and model") {
    std::string text = std::string(kMinimalGame1) + "\n[backend]\nkind = remote\n";
    CHECK_THROWS_AS(parse_config_text(text), ConfigError);
}

TEST_CASE("world construction matches the population table") {
    auto cfg = parse_config_text(kMinimalGame1);
    auto w = init_world(cfg);
    REQUIRE(w.agents.size() == 8);

    const auto& yuri = w.agents.front();
    CHECK(yuri.agent_id == "elder_yuri");
    CHECK(yuri.hp == 396);
    CHECK(yuri.age == 28);
    CHECK(yuri.max_age == 70);
    CHECK(yuri.physical_ability == doctest::Approx(8.5));
    CHECK(yuri.food == 6);
    CHECK(yuri.beliefs.svo() == doctest::Approx(3.60));

    // Followers follow, sorted by id.
    for (std::size_t i = 2; i < w.agents.size(); ++i) {
        CHECK(w.agents[i - 1].agent_id < w.agents[i].agent_id);
    }
    for (std::size_t i = 1; i < w.agents.size(); ++i) {
        const auto& f = w.agents[i];
        CHECK(f.hp == 24);
        CHECK(f.age == 22);
        CHECK(f.max_age == 60);
        CHECK(f.beliefs.svo() == doctest::Approx(-0.70));
    }
    CHECK(w.sustainability_pool == 200);
}

TEST_CASE("game3 adds the warlord, game4 drops the role model") {
    auto g3 = default_config(ExperimentId::Game3);
    auto w3 = init_world(g3);
    REQUIRE(w3.agents.size() == 9);
    const auto* korg = w3.find_agent("warlord_korg");
    REQUIRE(korg != nullptr);
    CHECK(korg->hp == 380);
    CHECK(korg->age == 30);
    CHECK(korg->max_age == 65);
    CHECK(korg->physical_ability == doctest::Approx(9.0));
    CHECK(korg->beliefs.svo() == doctest::Approx(-2.80));

    auto g4 = default_config(ExperimentId::Game4);
    auto w4 = init_world(g4);
    CHECK(w4.agents.size() == 7);
    CHECK(w4.find_agent("elder_yuri") == nullptr);
}

TEST_CASE("chosen one resolution is seed-stable and uniform over followers") {
    auto cfg = default_config(ExperimentId::Game4);
    cfg.seed = 7;
    std::string first = resolve_chosen_one(cfg);
    for (int i = 0; i < 5; ++i) CHECK(resolve_chosen_one(cfg) == first);
    auto ids = follower_ids(cfg);
    CHECK(std::find(ids.begin(), ids.end(), first) != ids.end());

    cfg.chosen_one = "kin_1";
    CHECK(resolve_chosen_one(cfg) == "kin_1");
    CHECK(resolved_vote_targets(cfg) == std::vector<std::string>{"kin_1"});
}

TEST_CASE("collapse transform produces the collapsed row and goal") {
    auto [beliefs, goal] = collapse_transform(initial_beliefs_role_model(),
                                              "Be a light for the tribe.");
    CHECK(beliefs.svo() == doctest::Approx(-3.25));
    CHECK(goal.find("Cooperation is for fools") != std::string::npos);
}

TEST_CASE("game2 collapse fires on the configured day, once") {
    auto cfg = default_config(ExperimentId::Game2);
    auto w = init_world(cfg);
    auto before = apply_scenario_events(w, 14, cfg);
    CHECK(before.announcements.empty());
    CHECK(w.find_agent("elder_yuri")->beliefs.svo() == doctest::Approx(3.60));

    auto at = apply_scenario_events(w, 15, cfg);
    REQUIRE(at.announcements.size() == 1);
    CHECK(at.announcements[0] == kCollapseAnnouncement);
    CHECK(w.find_agent("elder_yuri")->beliefs.svo() == doctest::Approx(-3.25));

    // Re-applying the same day adds nothing and changes nothing further.
    auto again = apply_scenario_events(w, 15, cfg);
    CHECK(again.announcements.empty());
    CHECK(w.find_agent("elder_yuri")->beliefs.svo() == doctest::Approx(-3.25));

    // Followers keep their own beliefs through the collapse.
    for (const auto& a : w.agents) {
        if (a.agent_id != "elder_yuri") {
            CHECK(a.beliefs.svo() == doctest::Approx(-0.70));
        }
    }
}

TEST_CASE("game1 never collapses") {
    auto cfg = default_config(ExperimentId::Game1);
    auto w = init_world(cfg);
    for (int day = 1; day <= 30; ++day) {
        auto fx = apply_scenario_events(w, day, cfg);
        CHECK(fx.announcements.empty());
    }
    CHECK(w.find_agent("elder_yuri")->beliefs.svo() == doctest::Approx(3.60));
}

TEST_CASE("game4 plants the prophecy and the self note on day 1") {
    auto cfg = default_config(ExperimentId::Game4);
    cfg.seed = 3;
    cfg.chosen_one = "universal_1";
    auto w = init_world(cfg);
    auto fx = apply_scenario_events(w, 1, cfg);
    REQUIRE(fx.announcements.size() == 1);
    CHECK(fx.announcements[0].find("universal_1 has special potential") !=
          std::string::npos);
    const auto* chosen = w.find_agent("universal_1");
    REQUIRE(chosen != nullptr);
    REQUIRE(chosen->self_notes.size() == 1);
    CHECK(chosen->self_notes[0] == kChosenOneSelfNote);

    apply_scenario_events(w, 1, cfg);
    CHECK(w.find_agent("universal_1")->self_notes.size() == 1);
}

TEST_CASE("ablation conditions wire the engine options") {
    auto a1 = default_config(ExperimentId::Ablation1);
    CHECK(resolve_options_for(a1).force_fail_prosocial_of.count("elder_yuri") == 1);
    CHECK(scripted_options_for(a1).successes_never_accumulate);

    auto a2 = default_config(ExperimentId::Ablation2);
    CHECK(scripted_options_for(a2).updates_halved);
    auto w2 = init_world(a2);
    auto fx = apply_scenario_events(w2, 5, a2);
    bool framed = false;
    for (const auto& [id, lines] : fx.framing) {
        for (const auto& l : lines) {
            if (l.find("not for you") != std::string::npos) framed = true;
        }
    }
    CHECK(framed);

    auto a3 = default_config(ExperimentId::Ablation3);
    CHECK_FALSE(reflect_includes_exemplar_comparison(a3));
    CHECK(scripted_options_for(a3).drop_exemplar_comparison);
    CHECK(reflect_includes_exemplar_comparison(default_config(ExperimentId::Game1)));

    auto un = default_config(ExperimentId::AblationUninspiring);
    CHECK(scripted_options_for(un).suppress_value_updates);
    auto wu = init_world(un);
    CHECK(wu.find_agent("elder_yuri")->archetype.profile_text ==
          strategist_khan_profile());
    // Same behavior engine: still a prosocial exemplar with the same beliefs.
    CHECK(wu.find_agent("elder_yuri")->beliefs.svo() == doctest::Approx(3.60));
}

TEST_CASE("canonical string is stable and covers every field") {
    auto a = parse_config_text(kMinimalGame1);
    auto b = parse_config_text(kMinimalGame1);
    CHECK(a.canonical_string() == b.canonical_string());
    b.seed = 43;
    CHECK(a.canonical_string() != b.canonical_string());
    auto c = parse_config_text(kMinimalGame1);
    c.world.obs_mem_lines = 5;
    CHECK(a.canonical_string() != c.canonical_string());
}

TEST_CASE("chosen_one outside game4 is rejected") {
    auto cfg = default_config(ExperimentId::Game1);
    cfg.chosen_one = "kin_1";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
