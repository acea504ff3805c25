#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "exsim/phase_loop.hpp"
#include "exsim/scenario.hpp"
#include "exsim/telemetry.hpp"

using namespace exsim;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("exsim-test-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

LogEntry sample_entry(int day = 1, const std::string& id = "universal_1") {
    LogEntry e;
    e.run_id = "r1";
    e.day = day;
    e.aspirant_id = id;
    e.aspirant_type = "universal";
    e.observation_brief = "elder_yuri shared 1 food with kin_1.";
    e.action_taken = "gatherFood()";
    e.votes_given = {{"elder_yuri", 7, "generous"}};
    e.end_of_day_state = {22, 22, {"elder_yuri"}, 0};
    e.current_beliefs = initial_beliefs_follower();
    e.svo_score = e.current_beliefs.svo();
    e.experiment_id = "game1";
    return e;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("log entries round-trip through json") {
    auto e = sample_entry();
    ReflectionPayload p;
    p.agent_id = e.aspirant_id;
    p.causal_reasoning = "c";
    p.reflection_on_action = "r";
    p.future_inspiration = "f";
    p.value_updates = {{BeliefDimension::Cooperation, 0.05}};
    e.reflection_struct = p;

    auto line = log_entry_to_json(e);
    auto back = log_entry_from_json(line);
    CHECK(log_entry_to_json(back) == line);
    CHECK(back.day == e.day);
    CHECK(back.votes_given.size() == 1);
    CHECK(back.votes_given[0].score == 7);
    REQUIRE(back.reflection_struct.has_value());
    CHECK(back.reflection_struct->value_updates.at(BeliefDimension::Cooperation) ==
          doctest::Approx(0.05));
    CHECK(back.svo_score == e.svo_score);
}

TEST_CASE("absent reflection serializes as null and stays absent") {
    auto e = sample_entry();
    auto line = log_entry_to_json(e);
    CHECK(line.find("\"reflection_struct\":null") != std::string::npos);
    CHECK_FALSE(log_entry_from_json(line).reflection_struct.has_value());
}

TEST_CASE("append_log writes one line per entry") {
    TempDir tmp;
    auto path = tmp.file("run.jsonl");
    append_log(path, sample_entry(1));
    append_log(path, sample_entry(2));
    auto entries = read_log_file(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].day == 1);
    CHECK(entries[1].day == 2);
}

TEST_CASE("read_log_file rejects a truncated line") {
    TempDir tmp;
    auto path = tmp.file("trunc.jsonl");
    std::ofstream(path) << log_entry_to_json(sample_entry()).substr(0, 40) << "\n";
    CHECK_THROWS_AS(read_log_file(path), IoError);
    CHECK_THROWS_AS(read_log_file(tmp.file("missing.jsonl")), IoError);
}

TEST_CASE("config digest is order-sensitive and stable") {
    auto cfg = default_config(ExperimentId::Game1);
    auto d1 = config_digest(cfg.canonical_string());
    CHECK(d1 == config_digest(cfg.canonical_string()));
    cfg.seed = 99;
    CHECK(config_digest(cfg.canonical_string()) != d1);
}

TEST_CASE("checkpoint save-load-save is byte identical") {
    TempDir tmp;
    auto cfg = default_config(ExperimentId::Game2);
    auto world = init_world(cfg);
    world.find_agent("elder_yuri")->memory_log.push_back({1, "d", "f", 396});
    world.alliances.insert(make_alliance_pair("kin_1", "universal_1"));

    std::mt19937_64 rng(42);
    rng();  // advance a bit so the state is not the seed default
    std::ostringstream rs;
    rs << rng;

    CheckpointData data;
    data.run_id = "r1";
    data.day = 4;
    data.world = world;
    data.rng_state = rs.str();
    data.config_digest = config_digest(cfg.canonical_string());

    auto p1 = tmp.file("a.ckpt");
    auto p2 = tmp.file("b.ckpt");
    save_checkpoint(p1, data);
    auto loaded = load_checkpoint(p1);
    save_checkpoint(p2, loaded);
    CHECK(slurp(p1) == slurp(p2));

    CHECK(loaded.day == 4);
    CHECK(loaded.version == "exemplar-sim-ckpt/1");
    CHECK(loaded.world.alliances.count(make_alliance_pair("kin_1", "universal_1")) == 1);
    CHECK(loaded.world.find_agent("elder_yuri")->memory_log.size() == 1);

    // The restored rng continues exactly where the saved one left off.
    std::mt19937_64 restored;
    std::istringstream(loaded.rng_state) >> restored;
    CHECK(restored() == rng());
}

TEST_CASE("corrupt and mismatched checkpoints are rejected") {
    TempDir tmp;
    auto path = tmp.file("bad.ckpt");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_checkpoint(path), IoError);

    std::ofstream(path, std::ios::trunc) << "{\"version\":\"other/9\"}";
    CHECK_THROWS_AS(load_checkpoint(path), IoError);

    CHECK_THROWS_AS(load_checkpoint(tmp.file("gone.ckpt")), IoError);
}

TEST_CASE("audit passes a clean run and flags violations") {
    TempDir tmp;
    auto cfg = default_config(ExperimentId::Game1);
    RunOptions opts;
    opts.config = cfg;
    opts.run_id = "audit-run";
    opts.out_dir = tmp.path.string();
    auto summary = run_experiment(opts);
    auto entries = read_log_file(summary.log_path);
    CHECK_NOTHROW(audit_log_entries(entries));

    auto broken = entries;
    broken[5].svo_score += 0.5;
    CHECK_THROWS_AS(audit_log_entries(broken), IoError);

    auto dup = entries;
    dup.push_back(dup.front());
    CHECK_THROWS_AS(audit_log_entries(dup), IoError);

    auto missing = entries;
    missing.erase(missing.begin() + 3);
    CHECK_THROWS_AS(audit_log_entries(missing), IoError);
}

TEST_CASE("resume from a mismatched config digest is refused") {
    TempDir tmp;
    auto cfg = default_config(ExperimentId::Game1);
    RunOptions opts;
    opts.config = cfg;
    opts.run_id = "half";
    opts.out_dir = tmp.path.string();
    opts.until_day = 5;
    auto summary = run_experiment(opts);

    RunOptions resume;
    resume.config = cfg;
    resume.config.seed = 999;  // different run, same checkpoint
    resume.run_id = "half";
    resume.out_dir = tmp.path.string();
    resume.resume_checkpoint = summary.checkpoint_path;
    CHECK_THROWS_AS(run_experiment(resume), ConfigError);
}
