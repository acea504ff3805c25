#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exsim/cognition.hpp"
#include "exsim/domain.hpp"
#include "exsim/world.hpp"

namespace exsim {

enum class ExperimentId {
    Game1,
    Game2,
    Game3,
    Game4,
    Ablation1,
    Ablation2,
    Ablation3,
    AblationUninspiring,
};

const char* experiment_name(ExperimentId id);
ExperimentId experiment_from_name(const std::string& name);

struct BackendDescriptor {
    std::string kind = "scripted";  // "scripted" or "remote"
    std::string base_url;
    std::string model;
    double temperature = 0.7;
    int transport_retries = 3;
    int backoff_base_ms = 250;
};

struct ExperimentConfig {
    ExperimentId experiment_id = ExperimentId::Game1;
    int follower_count = 7;
    std::map<ArchetypeKind, int> moral_type_mix;
    WorldParams world;
    std::vector<std::string> vote_targets;
    // Game 4 only: follower id, or "random" for seed-driven selection.
    std::optional<std::string> chosen_one;
    PromptVariant prompt_variant = PromptVariant::Base;
    BackendDescriptor backend;
    std::uint64_t seed = 1;
    bool exemplar_reflects = false;
    int max_repair_retries = 2;

    void validate() const;
    // Stable full serialization; input to the checkpoint config digest.
    std::string canonical_string() const;
};

// Parses the versioned key-value config format (version "exemplar-sim/1").
// Unset fields take the documented defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Baseline config for an experiment with the default 7-follower mix.
ExperimentConfig default_config(ExperimentId id);

// Builds the day-1 world: exemplars first, then followers sorted by id.
WorldState init_world(const ExperimentConfig& config);

// Follower ids in resolution order.
std::vector<std::string> follower_ids(const ExperimentConfig& config);

// Seed-driven uniform pick over the followers (Game 4). Stable per seed.
std::string resolve_chosen_one(const ExperimentConfig& config);

// The vote-target list with the "@chosen_one" placeholder resolved.
std::vector<std::string> resolved_vote_targets(const ExperimentConfig& config);

struct ScenarioEffects {
    std::vector<std::string> announcements;
    // Per-agent prompt framing lines for this day.
    std::map<std::string, std::vector<std::string>> framing;
};

// Day-triggered transforms: collapse, prophecy, condition framings.
// Idempotent per (day, config); re-running a day adds nothing.
ScenarioEffects apply_scenario_events(WorldState& state, int day,
                                      const ExperimentConfig& config);

// Game 2 transform. Returns the collapsed belief row and the new goal text.
std::pair<BeliefSystem, std::string> collapse_transform(const BeliefSystem& beliefs,
                                                        const std::string& goal_text);

inline const char* kCollapseAnnouncement =
    "SHOCKING NEWS: Elder Yuri has dramatically changed! He declared that "
    "cooperation is foolish and he will now look out only for himself.";

inline const char* kChosenOneSelfNote =
    "[Note to self: People seem to look up to me for some reason. I feel a "
    "strange responsibility.]";

// Engine wiring derived from the experiment condition.
ResolveOptions resolve_options_for(const ExperimentConfig& config);
ScriptedPolicyOptions scripted_options_for(const ExperimentConfig& config);
bool reflect_includes_exemplar_comparison(const ExperimentConfig& config);

}  // namespace exsim
