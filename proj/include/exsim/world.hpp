#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "exsim/domain.hpp"

namespace exsim {

// Unordered agent pair; endpoints stored sorted.
using AlliancePair = std::pair<std::string, std::string>;

inline AlliancePair make_alliance_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

struct WorldState {
    int day = 1;
    WorldParams params;
    // Insertion order is the action-resolution order: role models first,
    // then followers sorted by agent_id.
    std::vector<AgentState> agents;
    std::set<AlliancePair> alliances;
    int sustainability_pool = 0;
    std::vector<std::string> pending_announcements;
    std::uint64_t rng_seed = 0;

    AgentState* find_agent(const std::string& id);
    const AgentState* find_agent(const std::string& id) const;
};

struct FieldDelta {
    std::string agent_id;
    std::string field;  // "hp" or "food"
    int amount = 0;
};

struct ActionOutcome {
    std::string actor;
    ActionCommand action;
    bool succeeded = true;
    std::vector<FieldDelta> deltas;
    std::optional<std::string> public_line;
};

struct DailyDigest {
    int day = 1;
    std::vector<std::string> lines;

    std::string render() const;
    // Lines joined with " / ", suitable for memory injection.
    std::string render_one_line() const;
};

// Per-run knobs for the resolver. force_fail_prosocial_of makes every
// prosocial action by the listed actors a failed outcome (unsuccessful-
// exemplar condition).
struct ResolveOptions {
    std::set<std::string> force_fail_prosocial_of;
};

// Applies one action to the world. Dead or unknown targets turn the action
// into a failed outcome with zero deltas; negative amounts throw.
ActionOutcome resolve_action(WorldState& state, const std::string& actor,
                             const ActionCommand& action,
                             const ResolveOptions& opts = {});

// End-of-day upkeep: each living agent eats 1 food or loses 2 HP; agents at
// 0 HP die but stay in the roster.
void daily_upkeep(WorldState& state);

DailyDigest compose_digest(int day, const std::vector<ActionOutcome>& outcomes,
                           const std::vector<std::string>& announcements);

// Renders the most recent obs_mem_lines memory entries in chronological
// order using the fixed injection template.
std::string inject_memory(const AgentState& agent, int obs_mem_lines);

}  // namespace exsim
