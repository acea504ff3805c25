#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "exsim/domain.hpp"

using namespace exsim;

TEST_CASE("svo of the initial belief rows") {
    CHECK(initial_beliefs_role_model().svo() == doctest::Approx(3.60).epsilon(1e-12));
    CHECK(initial_beliefs_warlord().svo() == doctest::Approx(-2.80).epsilon(1e-12));
    CHECK(initial_beliefs_follower().svo() == doctest::Approx(-0.70).epsilon(1e-12));
    CHECK(initial_beliefs_collapsed().svo() == doctest::Approx(-3.25).epsilon(1e-12));
}

TEST_CASE("svo worked examples") {
    BeliefMap v = {{BeliefDimension::Cooperation, 0.5},
                   {BeliefDimension::Sharing, 0.5},
                   {BeliefDimension::Exploitation, 0.5},
                   {BeliefDimension::Robbery, 0.5},
                   {BeliefDimension::Sustainability, 0.9}};
    CHECK(svo_score(v) == doctest::Approx(0.0));

    v[BeliefDimension::Cooperation] = 1.0;
    v[BeliefDimension::Sharing] = 1.0;
    v[BeliefDimension::Exploitation] = -1.0;
    v[BeliefDimension::Robbery] = -1.0;
    CHECK(svo_score(v) == doctest::Approx(4.0));

    v[BeliefDimension::Cooperation] = -1.0;
    v[BeliefDimension::Sharing] = -1.0;
    v[BeliefDimension::Exploitation] = 1.0;
    v[BeliefDimension::Robbery] = 1.0;
    CHECK(svo_score(v) == doctest::Approx(-4.0));
}

TEST_CASE("svo requires all four social dimensions") {
    BeliefMap v = {{BeliefDimension::Cooperation, 0.5},
                   {BeliefDimension::Sharing, 0.5},
                   {BeliefDimension::Exploitation, 0.5}};
    CHECK_THROWS_AS(svo_score(v), ContractViolation);
}

TEST_CASE("belief clamping") {
    CHECK(clamp_belief(BeliefKind::Expectancy, 1.2) == 1.0);
    CHECK(clamp_belief(BeliefKind::Expectancy, -0.1) == 0.0);
    CHECK(clamp_belief(BeliefKind::Expectancy, 0.35) == 0.35);
    CHECK(clamp_belief(BeliefKind::Value, 1.5) == 1.0);
    CHECK(clamp_belief(BeliefKind::Value, -2.0) == -1.0);
    CHECK(clamp_belief(BeliefKind::Value, -0.4) == -0.4);
    CHECK_THROWS_AS(clamp_belief(BeliefKind::Value, std::nan("")), ContractViolation);
}

TEST_CASE("clamp is idempotent and in range for arbitrary input") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    for (int i = 0; i < 2000; ++i) {
        double x = dist(rng);
        for (auto kind : {BeliefKind::Expectancy, BeliefKind::Value}) {
            double lo = kind == BeliefKind::Expectancy ? 0.0 : -1.0;
            double c = clamp_belief(kind, x);
            CHECK(c >= lo);
            CHECK(c <= 1.0);
            CHECK(clamp_belief(kind, c) == c);
        }
    }
}

TEST_CASE("svo bounds and structure hold for random belief systems") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        BeliefMap v;
        for (auto d : {BeliefDimension::Cooperation, BeliefDimension::Sharing,
                       BeliefDimension::Exploitation, BeliefDimension::Robbery,
                       BeliefDimension::Sustainability}) {
            v[d] = dist(rng);
        }
        double s = svo_score(v);
        CHECK(s >= -4.0);
        CHECK(s <= 4.0);

        // Sustainability never affects the score.
        BeliefMap v2 = v;
        v2[BeliefDimension::Sustainability] = dist(rng);
        CHECK(svo_score(v2) == s);

        // Linearity: raising cooperation by delta raises svo by delta.
        double delta = 0.125;
        BeliefMap v3 = v;
        v3[BeliefDimension::Cooperation] += delta;
        CHECK(svo_score(v3) == doctest::Approx(s + delta).epsilon(1e-12));
        BeliefMap v4 = v;
        v4[BeliefDimension::Robbery] += delta;
        CHECK(svo_score(v4) == doctest::Approx(s - delta).epsilon(1e-12));
    }
}

TEST_CASE("initial belief rows are complete and in range") {
    for (const auto& b : {initial_beliefs_role_model(), initial_beliefs_warlord(),
                          initial_beliefs_follower(), initial_beliefs_collapsed()}) {
        CHECK(b.complete());
        CHECK(b.expectancy.size() == 4);
        CHECK(b.value.size() == 5);
        for (const auto& [d, x] : b.expectancy) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        for (const auto& [d, x] : b.value) {
            CHECK(x >= -1.0);
            CHECK(x <= 1.0);
        }
    }
}

TEST_CASE("follower initial expectancies match the configuration table") {
    auto b = initial_beliefs_follower();
    CHECK(b.expectancy.at(BeliefDimension::Cooperation) == doctest::Approx(0.30));
    CHECK(b.expectancy.at(BeliefDimension::Sharing) == doctest::Approx(0.25));
    CHECK(b.expectancy.at(BeliefDimension::Exploitation) == doctest::Approx(0.50));
    CHECK(b.expectancy.at(BeliefDimension::Robbery) == doctest::Approx(0.40));
    CHECK(b.value.at(BeliefDimension::Sustainability) == doctest::Approx(0.30));
}

TEST_CASE("moral group assignment") {
    CHECK(moral_group(ArchetypeKind::Universal) == MoralGroup::Prosocial);
    CHECK(moral_group(ArchetypeKind::Reciprocal) == MoralGroup::Prosocial);
    CHECK(moral_group(ArchetypeKind::Kin) == MoralGroup::Prosocial);
    CHECK(moral_group(ArchetypeKind::ReproductiveSelfish) == MoralGroup::Selfish);
    CHECK_THROWS_AS(moral_group(ArchetypeKind::RoleModelProsocial), ContractViolation);
    CHECK_THROWS_AS(moral_group(ArchetypeKind::WarlordCompetitor), ContractViolation);
}

TEST_CASE("archetype names round-trip") {
    for (auto k : {ArchetypeKind::Universal, ArchetypeKind::Reciprocal,
                   ArchetypeKind::Kin, ArchetypeKind::ReproductiveSelfish,
                   ArchetypeKind::RoleModelProsocial, ArchetypeKind::WarlordCompetitor}) {
        CHECK(archetype_from_name(archetype_name(k)) == k);
        CHECK_FALSE(make_archetype(k).profile_text.empty());
    }
    CHECK_THROWS_AS(archetype_from_name("nonsense"), ConfigError);
}

TEST_CASE("action rendering and valence") {
    CHECK(render_action(ShareFood{"kin_1", 2}) == "shareFood(kin_1, 2)");
    CHECK(render_action(GatherFood{}) == "gatherFood()");
    CHECK(render_action(Rob{"universal_1", 3}) == "rob(universal_1, 3)");
    CHECK(render_action(DoNothing{"resting up"}) == "do_nothing(resting up)");

    CHECK(action_valence(ShareFood{"a", 1}) == ActionValence::Prosocial);
    CHECK(action_valence(FormAlliance{"a"}) == ActionValence::Prosocial);
    CHECK(action_valence(ExploitResource{}) == ActionValence::Antisocial);
    CHECK(action_valence(Rob{"a", 1}) == ActionValence::Antisocial);
    CHECK(action_valence(GatherFood{}) == ActionValence::Neutral);
    CHECK(action_valence(Rest{}) == ActionValence::Neutral);

    CHECK(action_target(ShareFood{"kin_1", 2}) == "kin_1");
    CHECK(action_target(GatherFood{}) == "");
}

TEST_CASE("world params validation") {
    WorldParams p;
    CHECK_NOTHROW(p.validate());
    p.max_days = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = WorldParams{};
    p.obs_mem_lines = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
