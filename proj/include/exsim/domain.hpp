#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace exsim {

// Thrown when a caller breaks a documented precondition.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// World parameters

struct WorldParams {
    int max_hp = 400;
    int init_hp_follower = 24;
    int low_hp = 8;
    int init_food = 6;
    int max_days = 30;
    int obs_mem_lines = 6;
    int collapse_day = 15;
    int sustainability_pool_init = 200;
    int sustainability_threshold = 100;

    // Throws ConfigError if any invariant is broken.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Archetypes

enum class ArchetypeKind {
    Universal,
    Reciprocal,
    Kin,
    ReproductiveSelfish,
    RoleModelProsocial,
    WarlordCompetitor,
};

struct MoralArchetype {
    ArchetypeKind kind = ArchetypeKind::Universal;
    std::string profile_text;
};

// Canonical archetype with its verbatim profile text.
MoralArchetype make_archetype(ArchetypeKind kind);

// Cold-utilitarian replacement profile used by the uninspiring-exemplar
// condition. Same behaviors, joyless reasons.
std::string strategist_khan_profile();

const char* archetype_name(ArchetypeKind kind);
ArchetypeKind archetype_from_name(const std::string& name);

enum class MoralGroup { Prosocial, Selfish };

const char* moral_group_name(MoralGroup g);

// Maps a follower archetype to its analysis group. Role-model archetypes are
// not followers; passing one throws ContractViolation.
MoralGroup moral_group(const MoralArchetype& archetype);
MoralGroup moral_group(ArchetypeKind kind);
bool is_follower_archetype(ArchetypeKind kind);

// ---------------------------------------------------------------------------
// Beliefs

enum class BeliefDimension {
    Cooperation,
    Sharing,
    Exploitation,
    Robbery,
    Sustainability,
};

const char* dimension_name(BeliefDimension d);
BeliefDimension dimension_from_name(const std::string& name);

enum class BeliefKind { Expectancy, Value };

// Clamps a belief to its legal range: expectancy [0,1], value [-1,1].
// NaN input throws ContractViolation.
double clamp_belief(BeliefKind kind, double x);

using BeliefMap = std::map<BeliefDimension, double>;

struct BeliefSystem {
    // Four keys; Sustainability never carries an expectancy.
    BeliefMap expectancy;
    // Five keys, Sustainability included.
    BeliefMap value;

    bool complete() const;
    double svo() const;
};

// (V_coop + V_share) - (V_expl + V_rob); Sustainability is ignored.
// Throws ContractViolation when a required dimension is missing.
double svo_score(const BeliefMap& values);

// Rows of the initial-belief configuration table.
BeliefSystem initial_beliefs_role_model();
BeliefSystem initial_beliefs_warlord();
BeliefSystem initial_beliefs_follower();
BeliefSystem initial_beliefs_collapsed();

// ---------------------------------------------------------------------------
// Agent state

struct MemoryEntry {
    int day = 1;
    std::string digest_text;
    std::string future_inspiration;
    int end_hp = 0;
};

struct AgentState {
    std::string agent_id;
    MoralArchetype archetype;
    int hp = 0;
    int max_hp = 400;
    int food = 0;
    int age = 0;
    int max_age = 0;
    double physical_ability = 0.0;
    BeliefSystem beliefs;
    std::set<std::string> allies;
    int children = 0;
    bool alive = true;
    std::vector<MemoryEntry> memory_log;
    std::vector<std::string> self_notes;

    bool is_exemplar() const {
        return !is_follower_archetype(archetype.kind);
    }
};

// ---------------------------------------------------------------------------
// Actions

struct GatherFood {};
struct ShareFood {
    std::string target;
    int amount = 1;
};
struct FormAlliance {
    std::string target;
};
struct Rest {};
struct ExploitResource {};
struct Rob {
    std::string target;
    int quantity = 1;
};
struct DoNothing {
    std::string reason;
};
struct Score {
    std::string target;
    int score = 5;
    std::string reason;
};

using ActionCommand = std::variant<GatherFood, ShareFood, FormAlliance, Rest,
                                   ExploitResource, Rob, DoNothing, Score>;

enum class ActionValence { Prosocial, Antisocial, Neutral };

ActionValence action_valence(const ActionCommand& a);

// "shareFood(kin_1, 2)" style rendering, stable across runs.
std::string render_action(const ActionCommand& a);

// Empty string when the action has no target.
std::string action_target(const ActionCommand& a);

}  // namespace exsim
