#include "exsim/phase_loop.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <random>
#include <sstream>

namespace exsim {

std::string generate_run_id() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &tm);
    std::random_device rd;
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "%04x", rd() & 0xffff);
    return std::string(stamp) + "-" + suffix;
}

std::shared_ptr<CognitionBackend> make_backend(const ExperimentConfig& config) {
    if (config.backend.kind == "scripted") {
        return std::make_shared<ScriptedBackend>(scripted_options_for(config));
    }
    RemoteBackendConfig rc;
    rc.base_url = config.backend.base_url;
    rc.model = config.backend.model;
    rc.temperature = config.backend.temperature;
    rc.transport_retries = config.backend.transport_retries;
    rc.backoff_base_ms = config.backend.backoff_base_ms;
    if (const char* key = std::getenv("EXEMPLAR_SIM_API_KEY")) {
        rc.api_key = key;
    }
    return std::make_shared<RemoteBackend>(std::move(rc));
}

namespace {

std::vector<std::string> framing_for(const ScenarioEffects& effects,
                                     const std::string& agent_id) {
    auto it = effects.framing.find(agent_id);
    return it == effects.framing.end() ? std::vector<std::string>{} : it->second;
}

void apply_reflection(AgentState& agent, const ReflectionPayload& p) {
    for (const auto& [d, delta] : p.expectancy_updates) {
        auto& slot = agent.beliefs.expectancy.at(d);
        slot = clamp_belief(BeliefKind::Expectancy, slot + delta);
    }
    for (const auto& [d, delta] : p.value_updates) {
        auto& slot = agent.beliefs.value.at(d);
        slot = clamp_belief(BeliefKind::Value, slot + delta);
    }
}

}  // namespace

std::vector<LogEntry> run_day(WorldState& state, RunContext& ctx,
                              const ScenarioEffects& effects) {
    const int day = state.day;
    const auto& config = ctx.config;
    const bool participates_in_social_phases = config.exemplar_reflects;
    const ResolveOptions resolve_opts = resolve_options_for(config);
    const std::vector<std::string> vote_targets = resolved_vote_targets(config);

    std::vector<std::string> dawn_roster;
    for (const auto& a : state.agents) {
        if (a.alive) dawn_roster.push_back(a.agent_id);
    }

    auto base_context = [&](const AgentState& agent) {
        PromptContext pc;
        pc.day = day;
        pc.memory_context = inject_memory(agent, state.params.obs_mem_lines);
        pc.scenario_framing = framing_for(effects, agent.agent_id);
        pc.variant = config.prompt_variant;
        pc.include_exemplar_comparison = reflect_includes_exemplar_comparison(config);
        return pc;
    };

    auto decide = [&](PhaseKind phase, const AgentState& agent, PromptContext pc) {
        DecisionRequest req = make_request(phase, agent, std::move(pc));
        return decide_validated(*ctx.backend, req, config.max_repair_retries);
    };

    // Plan: deliberation only, no state effect.
    for (const auto& id : dawn_roster) {
        AgentState* agent = state.find_agent(id);
        if (!agent->alive) continue;
        decide(PhaseKind::Plan, *agent, base_context(*agent));
    }

    // Act: resolved immediately in roster order.
    std::vector<ActionOutcome> outcomes;
    std::map<std::string, std::string> act_rendered;
    for (const auto& id : dawn_roster) {
        AgentState* agent = state.find_agent(id);
        if (!agent->alive) {
            act_rendered[id] = render_action(DoNothing{"incapacitated"});
            continue;
        }
        auto validated = decide(PhaseKind::Act, *agent, base_context(*agent));
        ActionCommand action = std::get<DecisionResponse>(validated).action;
        ActionOutcome outcome = resolve_action(state, id, action, resolve_opts);
        act_rendered[id] = render_action(action);
        outcomes.push_back(std::move(outcome));
    }

    // Observe: the digest is composed once and distributed to everyone.
    DailyDigest digest = compose_digest(day, outcomes, effects.announcements);
    const std::string digest_full = digest.render();
    const std::string digest_brief = digest.render_one_line();
    for (const auto& id : dawn_roster) {
        AgentState* agent = state.find_agent(id);
        if (!agent->alive) continue;
        PromptContext pc = base_context(*agent);
        pc.todays_digest = digest_full;
        decide(PhaseKind::Observe, *agent, std::move(pc));
    }

    // Vote: gated on configured targets; one request per (voter, target).
    std::map<std::string, std::vector<VoteRecord>> votes;
    if (!vote_targets.empty()) {
        for (const auto& id : dawn_roster) {
            AgentState* agent = state.find_agent(id);
            if (!agent->alive) continue;
            if (agent->is_exemplar() && !participates_in_social_phases) continue;
            for (const auto& target : vote_targets) {
                if (target == id) continue;
                PromptContext pc = base_context(*agent);
                pc.todays_digest = digest_full;
                pc.vote_targets = {target};
                auto validated = decide(PhaseKind::Vote, *agent, std::move(pc));
                const auto& resp = std::get<DecisionResponse>(validated);
                if (const auto* score = std::get_if<Score>(&resp.action)) {
                    votes[id].push_back({score->target, score->score, score->reason});
                }
            }
        }
    }

    // Reflect: belief updates applied through clamping.
    std::map<std::string, ReflectionPayload> reflections;
    for (const auto& id : dawn_roster) {
        AgentState* agent = state.find_agent(id);
        if (!agent->alive) continue;
        if (agent->is_exemplar() && !participates_in_social_phases) continue;
        PromptContext pc = base_context(*agent);
        pc.todays_digest = digest_full;
        auto validated = decide(PhaseKind::Reflect, *agent, std::move(pc));
        auto payload = std::get<ReflectionPayload>(validated);
        apply_reflection(*agent, payload);
        reflections[id] = std::move(payload);
    }

    daily_upkeep(state);

    // Memory injection material and the day's log entries.
    std::vector<LogEntry> entries;
    for (const auto& id : dawn_roster) {
        AgentState* agent = state.find_agent(id);

        MemoryEntry mem;
        mem.day = day;
        mem.digest_text = digest_brief;
        auto rit = reflections.find(id);
        mem.future_inspiration =
            rit != reflections.end() ? rit->second.future_inspiration : "";
        mem.end_hp = agent->hp;
        agent->memory_log.push_back(std::move(mem));

        LogEntry e;
        e.run_id = ctx.run_id;
        e.day = day;
        e.aspirant_id = id;
        e.aspirant_type = archetype_name(agent->archetype.kind);
        e.observation_brief = digest_brief;
        e.action_taken = act_rendered[id];
        auto vit = votes.find(id);
        if (vit != votes.end()) e.votes_given = vit->second;
        if (rit != reflections.end()) e.reflection_struct = rit->second;
        e.end_of_day_state.hp = agent->hp;
        e.end_of_day_state.age = agent->age;
        e.end_of_day_state.allies.assign(agent->allies.begin(), agent->allies.end());
        e.end_of_day_state.children = agent->children;
        e.current_beliefs = agent->beliefs;
        e.svo_score = agent->beliefs.svo();
        e.experiment_id = experiment_name(config.experiment_id);
        e.is_post_collapse = config.experiment_id == ExperimentId::Game2 &&
                             day > config.world.collapse_day;
        entries.push_back(std::move(e));
    }
    return entries;
}

RunSummary run_experiment(const RunOptions& options) {
    const ExperimentConfig& config = options.config;
    config.validate();

    RunContext ctx;
    ctx.config = config;
    ctx.seed = config.seed;
    ctx.out_dir = options.out_dir;
    ctx.backend = options.backend ? options.backend : make_backend(config);

    std::filesystem::create_directories(options.out_dir);
    const std::uint64_t digest = config_digest(config.canonical_string());

    WorldState state;
    int start_day = 1;
    if (options.resume_checkpoint) {
        CheckpointData ckpt = load_checkpoint(*options.resume_checkpoint);
        if (ckpt.config_digest != digest) {
            throw ConfigError("checkpoint config digest mismatch; refusing to resume");
        }
        ctx.run_id = ckpt.run_id;
        state = std::move(ckpt.world);
        std::istringstream is(ckpt.rng_state);
        is >> ctx.rng;
        start_day = ckpt.day + 1;
    } else {
        ctx.run_id = options.run_id.empty() ? generate_run_id() : options.run_id;
        ctx.rng.seed(config.seed);
        state = init_world(config);
    }

    const std::string log_path = options.out_dir + "/" + ctx.run_id + ".jsonl";
    const std::string ckpt_path = options.out_dir + "/" + ctx.run_id + ".ckpt";

    auto checkpoint = [&](int completed_day) {
        CheckpointData data;
        data.run_id = ctx.run_id;
        data.day = completed_day;
        data.world = state;
        std::ostringstream os;
        os << ctx.rng;
        data.rng_state = os.str();
        data.config_digest = digest;
        save_checkpoint(ckpt_path, data);
    };

    if (!options.resume_checkpoint) {
        checkpoint(0);
    }

    const int last_day = options.until_day > 0
                             ? std::min(options.until_day, config.world.max_days)
                             : config.world.max_days;

    RunSummary summary;
    summary.run_id = ctx.run_id;
    summary.log_path = log_path;
    summary.checkpoint_path = ckpt_path;
    summary.days_completed = start_day - 1;

    for (int day = start_day; day <= last_day; ++day) {
        state.day = day;
        ScenarioEffects effects = apply_scenario_events(state, day, config);
        std::vector<LogEntry> entries = run_day(state, ctx, effects);
        for (const auto& e : entries) {
            append_log(log_path, e);
        }
        checkpoint(day);
        summary.days_completed = day;
    }
    return summary;
}

}  // namespace exsim
