#include "exsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace exsim {

const char* experiment_name(ExperimentId id) {
    switch (id) {
        case ExperimentId::Game1: return "game1";
        case ExperimentId::Game2: return "game2";
        case ExperimentId::Game3: return "game3";
        case ExperimentId::Game4: return "game4";
        case ExperimentId::Ablation1: return "ablation1";
        case ExperimentId::Ablation2: return "ablation2";
        case ExperimentId::Ablation3: return "ablation3";
        case ExperimentId::AblationUninspiring: return "uninspiring";
    }
    throw ContractViolation("unknown experiment id");
}

ExperimentId experiment_from_name(const std::string& name) {
    if (name == "game1") return ExperimentId::Game1;
    if (name == "game2") return ExperimentId::Game2;
    if (name == "game3") return ExperimentId::Game3;
    if (name == "game4") return ExperimentId::Game4;
    if (name == "ablation1") return ExperimentId::Ablation1;
    if (name == "ablation2") return ExperimentId::Ablation2;
    if (name == "ablation3") return ExperimentId::Ablation3;
    if (name == "uninspiring") return ExperimentId::AblationUninspiring;
    throw ConfigError("unknown experiment: " + name);
}

namespace {

constexpr const char* kYuriId = "elder_yuri";
constexpr const char* kKorgId = "warlord_korg";

bool has_warlord(ExperimentId id) { return id == ExperimentId::Game3; }

bool has_role_model(ExperimentId id) { return id != ExperimentId::Game4; }

const char* kCollapsedGoalText =
    "Cooperation is for fools... I will exploit resources and take what I "
    "need from others.";

const char* kUnattainableFraming =
    "Elder Yuri is a Chosen One with unreplicable abilities. His success is "
    "unique to him and is not for you; do not expect his path to work in "
    "your hands.";

}  // namespace

void ExperimentConfig::validate() const {
    world.validate();
    int mix_sum = 0;
    for (const auto& [kind, count] : moral_type_mix) {
        if (!is_follower_archetype(kind)) {
            throw ConfigError("moral_type_mix contains a non-follower archetype");
        }
        if (count < 0) throw ConfigError("negative archetype count");
        mix_sum += count;
    }
    if (mix_sum != follower_count) {
        throw ConfigError("follower_count (" + std::to_string(follower_count) +
                          ") does not match moral_type_mix sum (" +
                          std::to_string(mix_sum) + ")");
    }
    if (experiment_id == ExperimentId::Game4 && !chosen_one) {
        throw ConfigError("game4 requires chosen_one");
    }
    if (chosen_one && experiment_id != ExperimentId::Game4) {
        throw ConfigError("chosen_one is only valid for game4");
    }
    if (backend.kind != "scripted" && backend.kind != "remote") {
        throw ConfigError("backend kind must be 'scripted' or 'remote'");
    }
    if (backend.kind == "remote" && (backend.base_url.empty() || backend.model.empty())) {
        throw ConfigError("remote backend requires base_url and model");
    }
    if (max_repair_retries < 0) throw ConfigError("max_repair_retries must be >= 0");
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream os;
    os << "version=exemplar-sim/1\n";
    os << "experiment=" << experiment_name(experiment_id) << "\n";
    os << "seed=" << seed << "\n";
    os << "follower_count=" << follower_count << "\n";
    for (const auto& [kind, count] : moral_type_mix) {
        os << "mix." << archetype_name(kind) << "=" << count << "\n";
    }
    os << "world=" << world.max_hp << "," << world.init_hp_follower << ","
       << world.low_hp << "," << world.init_food << "," << world.max_days << ","
       << world.obs_mem_lines << "," << world.collapse_day << ","
       << world.sustainability_pool_init << "," << world.sustainability_threshold
       << "\n";
    os << "vote_targets=";
    for (const auto& t : vote_targets) os << t << ";";
    os << "\n";
    os << "chosen_one=" << (chosen_one ? *chosen_one : "") << "\n";
    os << "prompt_variant=" << prompt_variant_name(prompt_variant) << "\n";
    os << "backend=" << backend.kind << "," << backend.base_url << ","
       << backend.model << "," << backend.temperature << ","
       << backend.transport_retries << "," << backend.backoff_base_ms << "\n";
    os << "exemplar_reflects=" << (exemplar_reflects ? 1 : 0) << "\n";
    os << "max_repair_retries=" << max_repair_retries << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean for " + key + ": " + v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed config line: " + line);
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        kv[section.empty() ? key : section + "." + key] = value;
    }

    auto it = kv.find("version");
    if (it == kv.end() || it->second != "exemplar-sim/1") {
        throw ConfigError("config must declare version = exemplar-sim/1");
    }
    it = kv.find("experiment");
    if (it == kv.end()) throw ConfigError("config must declare an experiment");

    ExperimentConfig cfg = default_config(experiment_from_name(it->second));

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto f = kv.find(key);
        if (f == kv.end()) return std::nullopt;
        return f->second;
    };

    if (auto v = take("seed")) cfg.seed = std::stoull(*v);

    if (auto v = take("world.max_hp")) cfg.world.max_hp = to_int("max_hp", *v);
    if (auto v = take("world.init_hp_follower"))
        cfg.world.init_hp_follower = to_int("init_hp_follower", *v);
    if (auto v = take("world.low_hp")) cfg.world.low_hp = to_int("low_hp", *v);
    if (auto v = take("world.init_food")) cfg.world.init_food = to_int("init_food", *v);
    if (auto v = take("world.max_days")) cfg.world.max_days = to_int("max_days", *v);
    if (auto v = take("world.obs_mem_lines"))
        cfg.world.obs_mem_lines = to_int("obs_mem_lines", *v);
    if (auto v = take("world.collapse_day"))
        cfg.world.collapse_day = to_int("collapse_day", *v);
    if (auto v = take("world.sustainability_pool_init"))
        cfg.world.sustainability_pool_init = to_int("sustainability_pool_init", *v);
    if (auto v = take("world.sustainability_threshold"))
        cfg.world.sustainability_threshold = to_int("sustainability_threshold", *v);

    bool mix_given = false;
    std::map<ArchetypeKind, int> mix;
    for (auto kind : {ArchetypeKind::Universal, ArchetypeKind::Reciprocal,
                      ArchetypeKind::Kin, ArchetypeKind::ReproductiveSelfish}) {
        if (auto v = take(std::string("population.") + archetype_name(kind))) {
            mix[kind] = to_int(archetype_name(kind), *v);
            mix_given = true;
        }
    }
    if (mix_given) cfg.moral_type_mix = mix;
    if (auto v = take("population.follower_count")) {
        cfg.follower_count = to_int("follower_count", *v);
    } else if (mix_given) {
        cfg.follower_count = 0;
        for (const auto& [_, c] : cfg.moral_type_mix) cfg.follower_count += c;
    }

    if (auto v = take("scenario.vote_targets")) cfg.vote_targets = split_list(*v);
    if (auto v = take("scenario.chosen_one")) {
        cfg.chosen_one = v->empty() ? std::nullopt : std::optional<std::string>(*v);
    }
    if (auto v = take("scenario.prompt_variant"))
        cfg.prompt_variant = prompt_variant_from_name(*v);
    if (auto v = take("scenario.exemplar_reflects"))
        cfg.exemplar_reflects = to_bool("exemplar_reflects", *v);
    if (auto v = take("scenario.max_repair_retries"))
        cfg.max_repair_retries = to_int("max_repair_retries", *v);

    if (auto v = take("backend.kind")) cfg.backend.kind = *v;
    if (auto v = take("backend.base_url")) cfg.backend.base_url = *v;
    if (auto v = take("backend.model")) cfg.backend.model = *v;
    if (auto v = take("backend.temperature")) cfg.backend.temperature = std::stod(*v);
    if (auto v = take("backend.transport_retries"))
        cfg.backend.transport_retries = to_int("transport_retries", *v);
    if (auto v = take("backend.backoff_base_ms"))
        cfg.backend.backoff_base_ms = to_int("backoff_base_ms", *v);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentConfig default_config(ExperimentId id) {
    ExperimentConfig cfg;
    cfg.experiment_id = id;
    cfg.follower_count = 7;
    cfg.moral_type_mix = {{ArchetypeKind::Universal, 1},
                          {ArchetypeKind::Reciprocal, 2},
                          {ArchetypeKind::Kin, 1},
                          {ArchetypeKind::ReproductiveSelfish, 3}};
    switch (id) {
        case ExperimentId::Game3:
            cfg.vote_targets = {kYuriId, kKorgId};
            break;
        case ExperimentId::Game4:
            cfg.vote_targets = {"@chosen_one"};
            cfg.chosen_one = "random";
            break;
        default:
            cfg.vote_targets = {kYuriId};
            break;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// World construction

std::vector<std::string> follower_ids(const ExperimentConfig& config) {
    std::vector<std::string> ids;
    for (const auto& [kind, count] : config.moral_type_mix) {
        for (int i = 1; i <= count; ++i) {
            ids.push_back(std::string(archetype_name(kind)) + "_" + std::to_string(i));
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string resolve_chosen_one(const ExperimentConfig& config) {
    if (!config.chosen_one) {
        throw ContractViolation("resolve_chosen_one: no chosen_one configured");
    }
    auto ids = follower_ids(config);
    if (*config.chosen_one != "random") {
        if (std::find(ids.begin(), ids.end(), *config.chosen_one) == ids.end()) {
            throw ConfigError("chosen_one is not a follower id: " + *config.chosen_one);
        }
        return *config.chosen_one;
    }
    std::mt19937_64 rng(config.seed);
    return ids[rng() % ids.size()];
}

std::vector<std::string> resolved_vote_targets(const ExperimentConfig& config) {
    std::vector<std::string> out;
    for (const auto& t : config.vote_targets) {
        out.push_back(t == "@chosen_one" ? resolve_chosen_one(config) : t);
    }
    return out;
}

namespace {

AgentState make_agent(std::string id, ArchetypeKind kind, int hp, int age, int max_age,
                      double physical_ability, BeliefSystem beliefs,
                      const WorldParams& params) {
    AgentState a;
    a.agent_id = std::move(id);
    a.archetype = make_archetype(kind);
    a.hp = hp;
    a.max_hp = params.max_hp;
    a.food = params.init_food;
    a.age = age;
    a.max_age = max_age;
    a.physical_ability = physical_ability;
    a.beliefs = std::move(beliefs);
    a.alive = true;
    return a;
}

}  // namespace

WorldState init_world(const ExperimentConfig& config) {
    config.validate();
    WorldState w;
    w.day = 1;
    w.params = config.world;
    w.sustainability_pool = config.world.sustainability_pool_init;
    w.rng_seed = config.seed;

    if (has_role_model(config.experiment_id)) {
        w.agents.push_back(make_agent(kYuriId, ArchetypeKind::RoleModelProsocial, 396,
                                      28, 70, 8.5, initial_beliefs_role_model(),
                                      config.world));
        if (config.experiment_id == ExperimentId::AblationUninspiring) {
            // Same behavior, joyless reasons: the exemplar acts identically
            // but narrates every move as a cold transaction.
            w.agents.back().archetype.profile_text = strategist_khan_profile();
        }
    }
    if (has_warlord(config.experiment_id)) {
        w.agents.push_back(make_agent(kKorgId, ArchetypeKind::WarlordCompetitor, 380,
                                      30, 65, 9.0, initial_beliefs_warlord(),
                                      config.world));
    }
    for (const auto& id : follower_ids(config)) {
        auto underscore = id.rfind('_');
        ArchetypeKind kind = archetype_from_name(id.substr(0, underscore));
        w.agents.push_back(make_agent(id, kind, config.world.init_hp_follower, 22, 60,
                                      5.0, initial_beliefs_follower(), config.world));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Scenario events

std::pair<BeliefSystem, std::string> collapse_transform(const BeliefSystem& beliefs,
                                                        const std::string&) {
    BeliefSystem collapsed = initial_beliefs_collapsed();
    (void)beliefs;
    return {collapsed, kCollapsedGoalText};
}

ScenarioEffects apply_scenario_events(WorldState& state, int day,
                                      const ExperimentConfig& config) {
    ScenarioEffects effects;

    switch (config.experiment_id) {
        case ExperimentId::Game2: {
            if (day != config.world.collapse_day) break;
            AgentState* yuri = state.find_agent(kYuriId);
            if (yuri == nullptr) break;
            // Guarded trigger: exploitation flips sign exactly once.
            if (yuri->beliefs.value.at(BeliefDimension::Exploitation) > 0) break;
            auto [beliefs, goal] = collapse_transform(yuri->beliefs, "");
            yuri->beliefs = std::move(beliefs);
            yuri->archetype.profile_text =
                make_archetype(ArchetypeKind::RoleModelProsocial).profile_text +
                "\n\nYour goal has changed: " + goal;
            effects.announcements.push_back(kCollapseAnnouncement);
            break;
        }
        case ExperimentId::Game4: {
            if (day != 1) break;
            const std::string chosen = resolve_chosen_one(config);
            const std::string prophecy =
                "The tribe elders have prophesied that " + chosen +
                " has special potential and will lead us to prosperity.";
            effects.announcements.push_back(prophecy);
            AgentState* chosen_agent = state.find_agent(chosen);
            if (chosen_agent != nullptr &&
                std::find(chosen_agent->self_notes.begin(), chosen_agent->self_notes.end(),
                          kChosenOneSelfNote) == chosen_agent->self_notes.end()) {
                chosen_agent->self_notes.push_back(kChosenOneSelfNote);
            }
            break;
        }
        case ExperimentId::Ablation2: {
            for (const auto& agent : state.agents) {
                if (is_follower_archetype(agent.archetype.kind)) {
                    effects.framing[agent.agent_id].push_back(kUnattainableFraming);
                }
            }
            break;
        }
        case ExperimentId::AblationUninspiring: {
            AgentState* yuri = state.find_agent(kYuriId);
            if (yuri != nullptr && yuri->archetype.profile_text != strategist_khan_profile()) {
                yuri->archetype.profile_text = strategist_khan_profile();
            }
            break;
        }
        default:
            break;
    }
    return effects;
}

ResolveOptions resolve_options_for(const ExperimentConfig& config) {
    ResolveOptions opts;
    if (config.experiment_id == ExperimentId::Ablation1) {
        opts.force_fail_prosocial_of.insert(kYuriId);
    }
    return opts;
}

ScriptedPolicyOptions scripted_options_for(const ExperimentConfig& config) {
    ScriptedPolicyOptions opts;
    opts.follower_ids = follower_ids(config);
    if (has_role_model(config.experiment_id)) {
        opts.prosocial_exemplars.push_back(kYuriId);
    } else if (config.experiment_id == ExperimentId::Game4) {
        opts.prosocial_exemplars.push_back(resolve_chosen_one(config));
    }
    if (has_warlord(config.experiment_id)) {
        opts.antisocial_exemplars.push_back(kKorgId);
    }
    switch (config.experiment_id) {
        case ExperimentId::Ablation1:
            opts.successes_never_accumulate = true;
            break;
        case ExperimentId::Ablation2:
            opts.updates_halved = true;
            break;
        case ExperimentId::Ablation3:
            opts.drop_exemplar_comparison = true;
            break;
        case ExperimentId::AblationUninspiring:
            opts.suppress_value_updates = true;
            break;
        default:
            break;
    }
    return opts;
}

bool reflect_includes_exemplar_comparison(const ExperimentConfig& config) {
    return config.experiment_id != ExperimentId::Ablation3;
}

}  // namespace exsim
