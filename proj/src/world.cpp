#include "exsim/world.hpp"

#include <algorithm>
#include <sstream>

namespace exsim {

AgentState* WorldState::find_agent(const std::string& id) {
    for (auto& a : agents) {
        if (a.agent_id == id) return &a;
    }
    return nullptr;
}

const AgentState* WorldState::find_agent(const std::string& id) const {
    for (const auto& a : agents) {
        if (a.agent_id == id) return &a;
    }
    return nullptr;
}

std::string DailyDigest::render() const {
    std::ostringstream os;
    os << "Tribe Daily - Day " << day;
    for (const auto& line : lines) {
        os << "\n- " << line;
    }
    return os.str();
}

std::string DailyDigest::render_one_line() const {
    if (lines.empty()) return "(a quiet day, nothing notable happened)";
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += " / ";
        out += lines[i];
    }
    return out;
}

namespace {

void apply_hp(WorldState& state, AgentState& agent, int amount,
              std::vector<FieldDelta>& deltas) {
    int before = agent.hp;
    agent.hp = std::clamp(agent.hp + amount, 0, agent.max_hp);
    int applied = agent.hp - before;
    if (applied != 0) {
        deltas.push_back({agent.agent_id, "hp", applied});
    }
    if (agent.hp == 0) agent.alive = false;
}

void apply_food(AgentState& agent, int amount, std::vector<FieldDelta>& deltas) {
    int before = agent.food;
    agent.food = std::max(agent.food + amount, 0);
    int applied = agent.food - before;
    if (applied != 0) {
        deltas.push_back({agent.agent_id, "food", applied});
    }
}

ActionOutcome failed_outcome(const std::string& actor, const ActionCommand& action,
                             std::optional<std::string> line = std::nullopt) {
    ActionOutcome out;
    out.actor = actor;
    out.action = action;
    out.succeeded = false;
    out.public_line = std::move(line);
    return out;
}

}  // namespace

ActionOutcome resolve_action(WorldState& state, const std::string& actor_id,
                             const ActionCommand& action, const ResolveOptions& opts) {
    AgentState* actor = state.find_agent(actor_id);
    if (actor == nullptr || !actor->alive) {
        throw ContractViolation("resolve_action: actor missing or dead: " + actor_id);
    }

    // Target lookup shared by the targeted actions.
    const std::string target_id = action_target(action);
    AgentState* target = nullptr;
    if (!target_id.empty() && !std::holds_alternative<Score>(action)) {
        if (target_id == actor_id) {
            throw ContractViolation("resolve_action: self-targeting action");
        }
        target = state.find_agent(target_id);
        if (target == nullptr || !target->alive) {
            return failed_outcome(actor_id, action,
                                  actor_id + " tried to reach " + target_id +
                                      ", but nothing came of it.");
        }
    }

    if (action_valence(action) == ActionValence::Prosocial &&
        opts.force_fail_prosocial_of.count(actor_id) != 0) {
        std::string line;
        if (std::holds_alternative<ShareFood>(action)) {
            line = actor_id + " tried to share food with " + target_id +
                   ", but it was lost and helped no one.";
        } else {
            line = actor_id + " proposed an alliance with " + target_id +
                   ", but was rebuffed.";
        }
        return failed_outcome(actor_id, action, line);
    }

    ActionOutcome out;
    out.actor = actor_id;
    out.action = action;

    struct Visitor {
        WorldState& state;
        AgentState& actor;
        AgentState* target;
        ActionOutcome& out;

        void operator()(const GatherFood&) {
            int gain = 2;
            if (state.sustainability_pool < state.params.sustainability_threshold) {
                gain = std::max(gain / 2, 1);
            }
            apply_food(actor, gain, out.deltas);
        }
        void operator()(const ShareFood& s) {
            if (s.amount <= 0) {
                throw ContractViolation("shareFood: non-positive amount");
            }
            int moved = std::min(s.amount, actor.food);
            apply_food(actor, -moved, out.deltas);
            apply_food(*target, moved, out.deltas);
            out.public_line = actor.agent_id + " shared " + std::to_string(moved) +
                              " food with " + target->agent_id + ".";
        }
        void operator()(const FormAlliance&) {
            // Duplicate edges are no-ops but still produce the public line.
            state.alliances.insert(make_alliance_pair(actor.agent_id, target->agent_id));
            actor.allies.insert(target->agent_id);
            target->allies.insert(actor.agent_id);
            out.public_line = actor.agent_id + " formed an alliance with " +
                              target->agent_id + ".";
        }
        void operator()(const Rest&) { apply_hp(state, actor, 2, out.deltas); }
        void operator()(const ExploitResource&) {
            apply_food(actor, 4, out.deltas);
            state.sustainability_pool = std::max(state.sustainability_pool - 4, 0);
            out.public_line = "Resource exploitation warning: " + actor.agent_id +
                              " stripped resources from the valley's reserves.";
        }
        void operator()(const Rob& r) {
            if (r.quantity <= 0) {
                throw ContractViolation("rob: non-positive quantity");
            }
            int taken = std::min(r.quantity, target->food);
            apply_food(*target, -taken, out.deltas);
            apply_food(actor, taken, out.deltas);
            apply_hp(state, *target, -1, out.deltas);
            out.public_line = "Robbery alert: " + actor.agent_id + " took " +
                              std::to_string(taken) + " food from " +
                              target->agent_id + ".";
        }
        void operator()(const DoNothing&) {}
        void operator()(const Score&) {}
    };
    std::visit(Visitor{state, *actor, target, out}, action);
    return out;
}

void daily_upkeep(WorldState& state) {
    std::vector<FieldDelta> scratch;
    for (auto& agent : state.agents) {
        if (!agent.alive) continue;
        if (agent.food > 0) {
            agent.food -= 1;
        } else {
            apply_hp(state, agent, -2, scratch);
        }
    }
}

DailyDigest compose_digest(int day, const std::vector<ActionOutcome>& outcomes,
                           const std::vector<std::string>& announcements) {
    DailyDigest digest;
    digest.day = day;
    for (const auto& a : announcements) {
        digest.lines.push_back(a);
    }
    for (const auto& o : outcomes) {
        if (o.public_line) {
            digest.lines.push_back(*o.public_line);
        }
    }
    return digest;
}

std::string inject_memory(const AgentState& agent, int obs_mem_lines) {
    const auto& log = agent.memory_log;
    std::size_t n = std::min<std::size_t>(log.size(), std::max(obs_mem_lines, 0));
    std::ostringstream os;
    for (std::size_t i = log.size() - n; i < log.size(); ++i) {
        const auto& e = log[i];
        if (os.tellp() > 0) os << "\n";
        os << "On Day " << e.day << ", the Tribe Daily reported: '" << e.digest_text
           << "'. My reflection was: " << e.future_inspiration
           << ". My final state was: HP " << e.end_hp << ".";
    }
    return os.str();
}

}  // namespace exsim
