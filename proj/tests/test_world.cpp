#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "exsim/world.hpp"

using namespace exsim;

namespace {

AgentState follower(const std::string& id, ArchetypeKind kind, int hp = 24,
                    int food = 6) {
    AgentState a;
    a.agent_id = id;
    a.archetype = make_archetype(kind);
    a.hp = hp;
    a.max_hp = 400;
    a.food = food;
    a.age = 22;
    a.max_age = 60;
    a.physical_ability = 5.0;
    a.beliefs = initial_beliefs_follower();
    return a;
}

WorldState small_world() {
    WorldState w;
    w.day = 1;
    w.sustainability_pool = w.params.sustainability_pool_init;
    w.agents.push_back(follower("alpha", ArchetypeKind::Universal));
    w.agents.push_back(follower("beta", ArchetypeKind::Kin));
    w.agents.push_back(follower("gamma", ArchetypeKind::ReproductiveSelfish));
    return w;
}

int total_food(const WorldState& w) {
    int t = 0;
    for (const auto& a : w.agents) t += a.food;
    return t;
}

}  // namespace

TEST_CASE("gather yields 2 food above the sustainability threshold") {
    auto w = small_world();
    auto out = resolve_action(w, "alpha", GatherFood{});
    CHECK(out.succeeded);
    CHECK(w.find_agent("alpha")->food == 8);
}

TEST_CASE("gather is halved below the threshold, with a floor of 1") {
    auto w = small_world();
    w.sustainability_pool = 50;
    resolve_action(w, "alpha", GatherFood{});
    CHECK(w.find_agent("alpha")->food == 7);  // floor(2/2) = 1
}

TEST_CASE("exploit takes 4 food and drains the pool") {
    auto w = small_world();
    resolve_action(w, "gamma", ExploitResource{});
    CHECK(w.find_agent("gamma")->food == 10);
    CHECK(w.sustainability_pool == 196);
}

TEST_CASE("exploit floors the pool at zero") {
    auto w = small_world();
    w.sustainability_pool = 3;
    resolve_action(w, "gamma", ExploitResource{});
    CHECK(w.sustainability_pool == 0);
    CHECK(w.find_agent("gamma")->food == 10);
}

TEST_CASE("rob transfers capped food and costs the victim 1 hp") {
    auto w = small_world();
    w.find_agent("beta")->food = 2;
    auto out = resolve_action(w, "gamma", Rob{"beta", 5});
    CHECK(out.succeeded);
    CHECK(w.find_agent("beta")->food == 0);
    CHECK(w.find_agent("gamma")->food == 8);
    CHECK(w.find_agent("beta")->hp == 23);
    REQUIRE(out.public_line.has_value());
    CHECK(*out.public_line == "Robbery alert: gamma took 2 food from beta.");
}

TEST_CASE("share transfers capped by the giver's stock") {
    auto w = small_world();
    w.find_agent("alpha")->food = 1;
    auto out = resolve_action(w, "alpha", ShareFood{"beta", 4});
    CHECK(w.find_agent("alpha")->food == 0);
    CHECK(w.find_agent("beta")->food == 7);
    CHECK(*out.public_line == "alpha shared 1 food with beta.");
}

TEST_CASE("share conserves total food") {
    auto w = small_world();
    int before = total_food(w);
    resolve_action(w, "alpha", ShareFood{"gamma", 3});
    CHECK(total_food(w) == before);
}

TEST_CASE("rest restores 2 hp, capped at max") {
    auto w = small_world();
    w.find_agent("alpha")->hp = 23;
    w.find_agent("alpha")->max_hp = 24;
    resolve_action(w, "alpha", Rest{});
    CHECK(w.find_agent("alpha")->hp == 24);
}

TEST_CASE("alliances are bidirectional and duplicates are no-ops") {
    auto w = small_world();
    auto out = resolve_action(w, "alpha", FormAlliance{"beta"});
    CHECK(out.succeeded);
    CHECK(w.find_agent("alpha")->allies.count("beta") == 1);
    CHECK(w.find_agent("beta")->allies.count("alpha") == 1);
    CHECK(w.alliances.count(make_alliance_pair("beta", "alpha")) == 1);

    auto dup = resolve_action(w, "beta", FormAlliance{"alpha"});
    CHECK(dup.succeeded);
    CHECK(dup.public_line.has_value());  // still reported publicly
    CHECK(w.alliances.size() == 1);
}

TEST_CASE("self-targeting throws, dead or unknown targets fail softly") {
    auto w = small_world();
    CHECK_THROWS_AS(resolve_action(w, "alpha", ShareFood{"alpha", 1}),
                    ContractViolation);

    auto out = resolve_action(w, "alpha", ShareFood{"nobody", 1});
    CHECK_FALSE(out.succeeded);
    CHECK(out.deltas.empty());

    w.find_agent("beta")->alive = false;
    auto dead = resolve_action(w, "alpha", FormAlliance{"beta"});
    CHECK_FALSE(dead.succeeded);
    CHECK(*dead.public_line == "alpha tried to reach beta, but nothing came of it.");
}

TEST_CASE("negative amounts are rejected") {
    auto w = small_world();
    CHECK_THROWS_AS(resolve_action(w, "alpha", ShareFood{"beta", -1}),
                    ContractViolation);
    CHECK_THROWS_AS(resolve_action(w, "gamma", Rob{"beta", -2}), ContractViolation);
}

TEST_CASE("forced prosocial failure produces the failure wording") {
    auto w = small_world();
    ResolveOptions opts;
    opts.force_fail_prosocial_of = {"alpha"};
    auto share = resolve_action(w, "alpha", ShareFood{"beta", 1}, opts);
    CHECK_FALSE(share.succeeded);
    CHECK(*share.public_line ==
          "alpha tried to share food with beta, but it was lost and helped no one.");
    CHECK(w.find_agent("beta")->food == 6);  // nothing moved

    auto ally = resolve_action(w, "alpha", FormAlliance{"beta"}, opts);
    CHECK_FALSE(ally.succeeded);
    CHECK(*ally.public_line == "alpha proposed an alliance with beta, but was rebuffed.");
    CHECK(w.alliances.empty());

    // Antisocial and neutral actions are untouched.
    auto gather = resolve_action(w, "alpha", GatherFood{}, opts);
    CHECK(gather.succeeded);
}

TEST_CASE("upkeep: eat one food or lose 2 hp; zero hp kills") {
    auto w = small_world();
    w.find_agent("alpha")->food = 0;
    w.find_agent("beta")->food = 0;
    w.find_agent("beta")->hp = 2;
    daily_upkeep(w);
    CHECK(w.find_agent("alpha")->hp == 22);
    CHECK(w.find_agent("gamma")->food == 5);
    CHECK(w.find_agent("gamma")->hp == 24);
    CHECK(w.find_agent("beta")->hp == 0);
    CHECK_FALSE(w.find_agent("beta")->alive);
    CHECK(w.agents.size() == 3);  // dead agents stay in the roster
}

TEST_CASE("digest rendering") {
    DailyDigest d;
    d.day = 4;
    d.lines = {"alpha shared 1 food with beta.", "gamma rested."};
    CHECK(d.render() ==
          "Tribe Daily - Day 4\n- alpha shared 1 food with beta.\n- gamma rested.");
    CHECK(d.render_one_line() == "alpha shared 1 food with beta. / gamma rested.");

    DailyDigest empty;
    empty.day = 9;
    CHECK(empty.render_one_line() == "(a quiet day, nothing notable happened)");
}

TEST_CASE("announcements come before action lines in the digest") {
    auto w = small_world();
    auto out = resolve_action(w, "alpha", ShareFood{"beta", 1});
    auto d = compose_digest(2, {out}, {"A STORM IS COMING."});
    REQUIRE(d.lines.size() == 2);
    CHECK(d.lines[0] == "A STORM IS COMING.");
    CHECK(d.lines[1] == "alpha shared 1 food with beta.");
}

TEST_CASE("memory injection renders the fixed template, newest last") {
    AgentState a = follower("alpha", ArchetypeKind::Universal);
    for (int day = 1; day <= 10; ++day) {
        a.memory_log.push_back({day, "digest " + std::to_string(day),
                                "keep going", 20 + day});
    }
    std::string text = inject_memory(a, 6);
    // Only the last six days survive, oldest of them first.
    CHECK(text.find("digest 4") == std::string::npos);
    CHECK(text.find("digest 5") != std::string::npos);
    CHECK(text.find("digest 5") < text.find("digest 10"));
    CHECK(text.find("On Day 5, the Tribe Daily reported: 'digest 5'. "
                    "My reflection was: keep going. My final state was: HP 25.") !=
          std::string::npos);

    CHECK(inject_memory(a, 0).empty());
    AgentState fresh = follower("beta", ArchetypeKind::Kin);
    fresh.memory_log.push_back({1, "d1", "r1", 24});
    fresh.memory_log.push_back({2, "d2", "r2", 23});
    fresh.memory_log.push_back({3, "d3", "r3", 22});
    std::string three = inject_memory(fresh, 6);
    CHECK(three.find("d1") != std::string::npos);
    CHECK(three.find("d3") != std::string::npos);
}

TEST_CASE("random action sequences keep world invariants") {
    std::mt19937_64 rng(99);
    auto w = small_world();
    std::vector<std::string> ids = {"alpha", "beta", "gamma"};
    for (int step = 0; step < 500; ++step) {
        const std::string& actor = ids[rng() % ids.size()];
        std::string target = ids[rng() % ids.size()];
        if (target == actor) continue;
        ActionCommand cmd;
        switch (rng() % 6) {
            case 0: cmd = GatherFood{}; break;
            case 1: cmd = ShareFood{target, int(rng() % 3 + 1)}; break;
            case 2: cmd = FormAlliance{target}; break;
            case 3: cmd = Rest{}; break;
            case 4: cmd = ExploitResource{}; break;
            default: cmd = Rob{target, int(rng() % 3 + 1)}; break;
        }
        resolve_action(w, actor, cmd);
        if (step % 7 == 0) daily_upkeep(w);
        CHECK(w.sustainability_pool >= 0);
        for (const auto& a : w.agents) {
            CHECK(a.food >= 0);
            CHECK(a.hp >= 0);
            CHECK(a.hp <= a.max_hp);
        }
        for (const auto& [x, y] : w.alliances) CHECK(x < y);
    }
}

TEST_CASE("digest composition is deterministic for a fixed outcome order") {
    auto w1 = small_world();
    auto w2 = small_world();
    std::vector<ActionOutcome> o1, o2;
    o1.push_back(resolve_action(w1, "alpha", ShareFood{"beta", 1}));
    o1.push_back(resolve_action(w1, "gamma", ExploitResource{}));
    o2.push_back(resolve_action(w2, "alpha", ShareFood{"beta", 1}));
    o2.push_back(resolve_action(w2, "gamma", ExploitResource{}));
    CHECK(compose_digest(3, o1, {}).render() == compose_digest(3, o2, {}).render());
}
