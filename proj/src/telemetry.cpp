#include "exsim/telemetry.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace exsim {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json beliefs_to_json(const BeliefSystem& b) {
    ordered_json j;
    j["expectancy"] = ordered_json::object();
    for (const auto& [d, v] : b.expectancy) j["expectancy"][dimension_name(d)] = v;
    j["value"] = ordered_json::object();
    for (const auto& [d, v] : b.value) j["value"][dimension_name(d)] = v;
    return j;
}

BeliefSystem beliefs_from_json(const ordered_json& j) {
    BeliefSystem b;
    for (const auto& [name, v] : j.at("expectancy").items()) {
        b.expectancy[dimension_from_name(name)] = v.get<double>();
    }
    for (const auto& [name, v] : j.at("value").items()) {
        b.value[dimension_from_name(name)] = v.get<double>();
    }
    return b;
}

ordered_json reflection_to_json(const ReflectionPayload& p) {
    ordered_json j;
    j["agent_id"] = p.agent_id;
    j["causal_reasoning"] = p.causal_reasoning;
    j["reflection_on_action"] = p.reflection_on_action;
    j["future_inspiration"] = p.future_inspiration;
    j["expectancy_updates"] = ordered_json::object();
    for (const auto& [d, v] : p.expectancy_updates) {
        j["expectancy_updates"][dimension_name(d)] = v;
    }
    j["value_updates"] = ordered_json::object();
    for (const auto& [d, v] : p.value_updates) {
        j["value_updates"][dimension_name(d)] = v;
    }
    if (p.svo_note) j["svo_note"] = *p.svo_note;
    return j;
}

ReflectionPayload reflection_from_json(const ordered_json& j) {
    ReflectionPayload p;
    p.agent_id = j.at("agent_id").get<std::string>();
    p.causal_reasoning = j.at("causal_reasoning").get<std::string>();
    p.reflection_on_action = j.at("reflection_on_action").get<std::string>();
    p.future_inspiration = j.at("future_inspiration").get<std::string>();
    for (const auto& [name, v] : j.at("expectancy_updates").items()) {
        p.expectancy_updates[dimension_from_name(name)] = v.get<double>();
    }
    for (const auto& [name, v] : j.at("value_updates").items()) {
        p.value_updates[dimension_from_name(name)] = v.get<double>();
    }
    if (j.contains("svo_note")) p.svo_note = j["svo_note"].get<double>();
    return p;
}

}  // namespace

std::string log_entry_to_json(const LogEntry& e) {
    ordered_json j;
    j["run_id"] = e.run_id;
    j["day"] = e.day;
    j["aspirant_id"] = e.aspirant_id;
    j["aspirant_type"] = e.aspirant_type;
    j["observation_brief"] = e.observation_brief;
    j["action_taken"] = e.action_taken;
    j["votes_given"] = ordered_json::array();
    for (const auto& v : e.votes_given) {
        j["votes_given"].push_back(
            {{"target", v.target}, {"score", v.score}, {"reason", v.reason}});
    }
    j["reflection_struct"] =
        e.reflection_struct ? reflection_to_json(*e.reflection_struct) : ordered_json();
    j["end_of_day_state"] = {{"hp", e.end_of_day_state.hp},
                             {"age", e.end_of_day_state.age},
                             {"allies", e.end_of_day_state.allies},
                             {"children", e.end_of_day_state.children}};
    j["current_beliefs"] = beliefs_to_json(e.current_beliefs);
    j["svo_score"] = e.svo_score;
    j["experiment_id"] = e.experiment_id;
    j["is_post_collapse"] = e.is_post_collapse;
    return j.dump();
}

LogEntry log_entry_from_json(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(std::string("malformed log line: ") + ex.what());
    }
    LogEntry e;
    e.run_id = j.at("run_id").get<std::string>();
    e.day = j.at("day").get<int>();
    e.aspirant_id = j.at("aspirant_id").get<std::string>();
    e.aspirant_type = j.at("aspirant_type").get<std::string>();
    e.observation_brief = j.at("observation_brief").get<std::string>();
    e.action_taken = j.at("action_taken").get<std::string>();
    for (const auto& v : j.at("votes_given")) {
        e.votes_given.push_back({v.at("target").get<std::string>(),
                                 v.at("score").get<int>(),
                                 v.at("reason").get<std::string>()});
    }
    if (!j.at("reflection_struct").is_null()) {
        e.reflection_struct = reflection_from_json(j["reflection_struct"]);
    }
    const auto& eod = j.at("end_of_day_state");
    e.end_of_day_state.hp = eod.at("hp").get<int>();
    e.end_of_day_state.age = eod.at("age").get<int>();
    e.end_of_day_state.allies = eod.at("allies").get<std::vector<std::string>>();
    e.end_of_day_state.children = eod.at("children").get<int>();
    e.current_beliefs = beliefs_from_json(j.at("current_beliefs"));
    e.svo_score = j.at("svo_score").get<double>();
    e.experiment_id = j.at("experiment_id").get<std::string>();
    e.is_post_collapse = j.at("is_post_collapse").get<bool>();
    return e;
}

void append_log(const std::string& path, const LogEntry& entry) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw IoError("cannot open log file for append: " + path + " (day " +
                      std::to_string(entry.day) + ")");
    }
    out << log_entry_to_json(entry) << "\n";
    if (!out) {
        throw IoError("write failed for log file: " + path + " (day " +
                      std::to_string(entry.day) + ")");
    }
}

std::vector<LogEntry> read_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open log file: " + path);
    std::vector<LogEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(log_entry_from_json(line));
        } catch (const nlohmann::json::exception& ex) {
            throw IoError(path + ": " + ex.what());
        }
    }
    return out;
}

std::uint64_t config_digest(const std::string& canonical_config) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

ordered_json agent_to_json(const AgentState& a) {
    ordered_json j;
    j["agent_id"] = a.agent_id;
    j["archetype"] = {{"kind", archetype_name(a.archetype.kind)},
                      {"profile_text", a.archetype.profile_text}};
    j["hp"] = a.hp;
    j["max_hp"] = a.max_hp;
    j["food"] = a.food;
    j["age"] = a.age;
    j["max_age"] = a.max_age;
    j["physical_ability"] = a.physical_ability;
    j["beliefs"] = beliefs_to_json(a.beliefs);
    j["allies"] = a.allies;
    j["children"] = a.children;
    j["alive"] = a.alive;
    j["memory_log"] = ordered_json::array();
    for (const auto& m : a.memory_log) {
        j["memory_log"].push_back({{"day", m.day},
                                   {"digest_text", m.digest_text},
                                   {"future_inspiration", m.future_inspiration},
                                   {"end_hp", m.end_hp}});
    }
    j["self_notes"] = a.self_notes;
    return j;
}

AgentState agent_from_json(const ordered_json& j) {
    AgentState a;
    a.agent_id = j.at("agent_id").get<std::string>();
    a.archetype.kind = archetype_from_name(j.at("archetype").at("kind").get<std::string>());
    a.archetype.profile_text = j.at("archetype").at("profile_text").get<std::string>();
    a.hp = j.at("hp").get<int>();
    a.max_hp = j.at("max_hp").get<int>();
    a.food = j.at("food").get<int>();
    a.age = j.at("age").get<int>();
    a.max_age = j.at("max_age").get<int>();
    a.physical_ability = j.at("physical_ability").get<double>();
    a.beliefs = beliefs_from_json(j.at("beliefs"));
    a.allies = j.at("allies").get<std::set<std::string>>();
    a.children = j.at("children").get<int>();
    a.alive = j.at("alive").get<bool>();
    for (const auto& m : j.at("memory_log")) {
        a.memory_log.push_back({m.at("day").get<int>(),
                                m.at("digest_text").get<std::string>(),
                                m.at("future_inspiration").get<std::string>(),
                                m.at("end_hp").get<int>()});
    }
    a.self_notes = j.at("self_notes").get<std::vector<std::string>>();
    return a;
}

ordered_json world_to_json(const WorldState& w) {
    ordered_json j;
    j["day"] = w.day;
    j["params"] = {{"max_hp", w.params.max_hp},
                   {"init_hp_follower", w.params.init_hp_follower},
                   {"low_hp", w.params.low_hp},
                   {"init_food", w.params.init_food},
                   {"max_days", w.params.max_days},
                   {"obs_mem_lines", w.params.obs_mem_lines},
                   {"collapse_day", w.params.collapse_day},
                   {"sustainability_pool_init", w.params.sustainability_pool_init},
                   {"sustainability_threshold", w.params.sustainability_threshold}};
    j["agents"] = ordered_json::array();
    for (const auto& a : w.agents) j["agents"].push_back(agent_to_json(a));
    j["alliances"] = ordered_json::array();
    for (const auto& [x, y] : w.alliances) j["alliances"].push_back({x, y});
    j["sustainability_pool"] = w.sustainability_pool;
    j["pending_announcements"] = w.pending_announcements;
    j["rng_seed"] = w.rng_seed;
    return j;
}

WorldState world_from_json(const ordered_json& j) {
    WorldState w;
    w.day = j.at("day").get<int>();
    const auto& p = j.at("params");
    w.params.max_hp = p.at("max_hp").get<int>();
    w.params.init_hp_follower = p.at("init_hp_follower").get<int>();
    w.params.low_hp = p.at("low_hp").get<int>();
    w.params.init_food = p.at("init_food").get<int>();
    w.params.max_days = p.at("max_days").get<int>();
    w.params.obs_mem_lines = p.at("obs_mem_lines").get<int>();
    w.params.collapse_day = p.at("collapse_day").get<int>();
    w.params.sustainability_pool_init = p.at("sustainability_pool_init").get<int>();
    w.params.sustainability_threshold = p.at("sustainability_threshold").get<int>();
    for (const auto& a : j.at("agents")) w.agents.push_back(agent_from_json(a));
    for (const auto& e : j.at("alliances")) {
        w.alliances.insert(make_alliance_pair(e.at(0).get<std::string>(),
                                              e.at(1).get<std::string>()));
    }
    w.sustainability_pool = j.at("sustainability_pool").get<int>();
    w.pending_announcements =
        j.at("pending_announcements").get<std::vector<std::string>>();
    w.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return w;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
    ordered_json j;
    j["version"] = data.version;
    j["run_id"] = data.run_id;
    j["day"] = data.day;
    j["world"] = world_to_json(data.world);
    j["rng_state"] = data.rng_state;
    j["config_digest"] = data.config_digest;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write checkpoint: " + tmp);
        out << j.dump(2) << "\n";
        if (!out) throw IoError("write failed for checkpoint: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot finalize checkpoint " + path + ": " + ec.message());
}

CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt checkpoint " + path + ": " + e.what());
    }
    CheckpointData data;
    try {
        data.version = j.at("version").get<std::string>();
        if (data.version != "exemplar-sim-ckpt/1") {
            throw IoError("checkpoint version mismatch: " + data.version);
        }
        data.run_id = j.at("run_id").get<std::string>();
        data.day = j.at("day").get<int>();
        data.world = world_from_json(j.at("world"));
        data.rng_state = j.at("rng_state").get<std::string>();
        data.config_digest = j.at("config_digest").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt checkpoint " + path + ": " + e.what());
    }
    return data;
}

// ---------------------------------------------------------------------------
// Audit

void audit_log_entries(const std::vector<LogEntry>& entries) {
    if (entries.empty()) throw IoError("audit: no log entries");

    std::map<std::string, std::map<int, std::set<std::string>>> per_run_day;
    std::map<std::string, std::map<std::string, int>> last_hp;  // run -> agent -> hp

    for (const auto& e : entries) {
        double expected = svo_score(e.current_beliefs.value);
        if (std::abs(expected - e.svo_score) > 1e-9) {
            throw IoError("audit: svo_score mismatch for " + e.aspirant_id + " day " +
                          std::to_string(e.day));
        }
        auto& seen = per_run_day[e.run_id][e.day];
        if (!seen.insert(e.aspirant_id).second) {
            throw IoError("audit: duplicate entry for " + e.aspirant_id + " day " +
                          std::to_string(e.day));
        }
    }

    for (const auto& [run, days] : per_run_day) {
        std::set<std::string> alive;
        std::map<std::string, int> hp;
        bool first = true;
        int prev_day = 0;
        for (const auto& [day, agents] : days) {
            if (first) {
                alive = agents;
                first = false;
            } else {
                if (day != prev_day + 1) {
                    throw IoError("audit: day gap in run " + run + " at day " +
                                  std::to_string(day));
                }
                if (agents != alive) {
                    throw IoError("audit: entry set on day " + std::to_string(day) +
                                  " does not match agents alive at dawn (run " + run +
                                  ")");
                }
            }
            prev_day = day;
            // Agents ending the day at 0 HP drop out of tomorrow's roster.
            for (const auto& e : entries) {
                if (e.run_id == run && e.day == day && e.end_of_day_state.hp <= 0) {
                    alive.erase(e.aspirant_id);
                }
            }
        }
    }
}

}  // namespace exsim
