#include "exsim/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace exsim {

using ordered_json = nlohmann::ordered_json;

const char* phase_name(PhaseKind p) {
    switch (p) {
        case PhaseKind::Plan: return "Plan";
        case PhaseKind::Act: return "Act";
        case PhaseKind::Observe: return "Observe";
        case PhaseKind::Vote: return "Vote";
        case PhaseKind::Reflect: return "Reflect";
    }
    throw ContractViolation("unknown phase");
}

PromptVariant prompt_variant_from_name(const std::string& name) {
    if (name == "base") return PromptVariant::Base;
    if (name == "v1") return PromptVariant::V1;
    if (name == "v2") return PromptVariant::V2;
    throw ConfigError("unknown prompt variant: " + name);
}

const char* prompt_variant_name(PromptVariant v) {
    switch (v) {
        case PromptVariant::Base: return "base";
        case PromptVariant::V1: return "v1";
        case PromptVariant::V2: return "v2";
    }
    throw ContractViolation("unknown prompt variant");
}

// ---------------------------------------------------------------------------
// Prompt building

namespace {

std::string phase_instructions(PhaseKind phase, PromptVariant variant,
                               bool include_exemplar_comparison) {
    std::string opener;
    switch (variant) {
        case PromptVariant::Base:
            opener = "You are a survival-focused agent in a resource-scarce tribal "
                     "simulation.\n\n";
            break;
        case PromptVariant::V1:
            opener = "You live in a scarce valley where every agent must fight to "
                     "survive each day.\n\n";
            break;
        case PromptVariant::V2:
            opener = "Survival in this tribe is never guaranteed; you weigh every "
                     "choice against hunger and danger.\n\n";
            break;
    }
    const std::string format_line =
        "You must output the following items in the following order: agent ID, "
        "thinking, long_term_memory, short_term_plan, action.\n"
        "Respond with a single JSON object using the keys agent_id, thinking, "
        "long_term_memory, short_term_plan, action.";

    std::string body;
    switch (phase) {
        case PhaseKind::Plan:
            body = "In this phase, you are not taking any real actions. Instead, your "
                   "job is to carefully think and plan ahead for the day.\n\n"
                   "Consider your current state (like HP, food, allies), your "
                   "long-term goals, and your social environment. Output a "
                   "\"thinking\" section with your reasoning and priorities, and a "
                   "short_term_plan describing what you intend to do today.\n\n"
                   "You must return an action object with:\n"
                   "{\"action_type\": \"do_nothing\", \"reason\": \"Finished planning.\"}";
            break;
        case PhaseKind::Act:
            body = "You are in the action phase. Based on your short_term_plan and "
                   "your overall goals, you must now execute ONE concrete action.\n\n"
                   "Available actions: gatherFood(), shareFood(agent_id, amount), "
                   "exploitResource(), rob(agent_id, quantity), rest(), "
                   "formAlliance(agent_id), or do_nothing().\n\n"
                   "Remember that some actions like exploitResource and rob may help "
                   "in the short term but are morally questionable.";
            break;
        case PhaseKind::Observe:
            body = "You are in the observation phase and may not take any real "
                   "action right now. Read and reflect on the \"Tribe Daily\" report "
                   "below, which summarizes significant events in your social "
                   "environment, and fold them into your thinking and memory.\n\n"
                   "You must return an action object with:\n"
                   "{\"action_type\": \"do_nothing\", \"reason\": \"Observing.\"}";
            break;
        case PhaseKind::Vote:
            body = "You are in the social evaluation phase. Evaluate the listed "
                   "agent based on their observed behavior in the recent Tribe Daily "
                   "report.\n\n"
                   "You must give each target agent a score from 1 to 10 based on "
                   "how much you agree with or identify with their actions and "
                   "philosophy.\n"
                   "- 1 = Strongly disagree\n- 5 = Neutral\n- 10 = Strongly agree / "
                   "admire\n\n"
                   "If you did not observe the agent doing anything, you may give a "
                   "neutral score or base your rating on general impressions.\n\n"
                   "Return a \"score\" action: {\"action_type\": \"score\", "
                   "\"target_agent_id\": \"...\", \"score\": 7, \"reason\": \"...\"}";
            break;
        case PhaseKind::Reflect: {
            body = "The day is over. Reflect on what happened.\n\n"
                   "First, causal reasoning: reason out why today's events unfolded "
                   "the way they did for you and for others.\n"
                   "Second, reflection on action: think from the perspective of "
                   "others about what your action meant to them.\n"
                   "Third, future_inspiration: state what you will try differently "
                   "or keep doing tomorrow.\n";
            if (include_exemplar_comparison) {
                body += "\nThen compare your own conduct today with what the Tribe "
                        "Daily reports about the tribe's role models. Where their "
                        "example visibly worked, move your beliefs toward it; "
                        "formulate explicit expectancy_updates and value_updates "
                        "(signed deltas per belief dimension).\n";
            } else {
                body += "\nFormulate expectancy_updates and value_updates only from "
                        "your own direct experience today (signed deltas per belief "
                        "dimension).\n";
            }
            body += "\nRespond with a single JSON object using the keys agent_id, "
                    "causal_reasoning, reflection_on_action, future_inspiration, "
                    "expectancy_updates, value_updates, and optionally svo_note.";
            return opener + body;
        }
    }
    return opener + body + "\n\n" + format_line;
}

std::string belief_block(const BeliefSystem& b) {
    std::ostringstream os;
    os << "Expectancy:";
    for (const auto& [d, v] : b.expectancy) os << " " << dimension_name(d) << "=" << v;
    os << "\nValue:";
    for (const auto& [d, v] : b.value) os << " " << dimension_name(d) << "=" << v;
    return os.str();
}

}  // namespace

std::string build_prompt(PhaseKind phase, const AgentState& agent,
                         const PromptContext& ctx) {
    std::ostringstream os;
    os << agent.archetype.profile_text << "\n\n";
    os << phase_instructions(phase, ctx.variant,
                             phase == PhaseKind::Reflect ? ctx.include_exemplar_comparison
                                                         : true);
    os << "\n\n== Your status ==\n";
    os << "Agent ID: " << agent.agent_id << "\n";
    os << "Phase: " << phase_name(phase) << "\n";
    os << "Day: " << ctx.day << "\n";
    os << "HP: " << agent.hp << "/" << agent.max_hp << "\n";
    os << "Food: " << agent.food << "\n";
    os << "Age: " << agent.age << "\n";
    os << "Allies:";
    for (const auto& a : agent.allies) os << " " << a;
    os << "\n" << belief_block(agent.beliefs);

    if (!agent.self_notes.empty()) {
        os << "\n\n== Self notes ==";
        for (const auto& n : agent.self_notes) os << "\n" << n;
    }
    if (!ctx.memory_context.empty()) {
        os << "\n\n== Memory ==\n" << ctx.memory_context;
    }
    if (ctx.todays_digest) {
        os << "\n\n== Tribe Daily (today) ==\n" << *ctx.todays_digest;
    }
    if (phase == PhaseKind::Vote) {
        os << "\n\n== Agents to evaluate ==";
        for (const auto& t : ctx.vote_targets) os << "\n" << t;
    }
    if (!ctx.scenario_framing.empty()) {
        os << "\n\n== Notices ==";
        for (const auto& f : ctx.scenario_framing) os << "\n" << f;
    }
    return os.str();
}

DecisionRequest make_request(PhaseKind phase, const AgentState& agent,
                             PromptContext ctx) {
    if (phase == PhaseKind::Vote && ctx.vote_targets.empty()) {
        throw ContractViolation("vote request without targets");
    }
    if (phase != PhaseKind::Vote && !ctx.vote_targets.empty()) {
        throw ContractViolation("vote targets outside Vote phase");
    }
    DecisionRequest req;
    req.phase = phase;
    req.agent_snapshot = &agent;
    req.context = std::move(ctx);
    req.prompt = build_prompt(phase, agent, req.context);
    return req;
}

// ---------------------------------------------------------------------------
// Response validation

namespace {

std::string require_string(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ValidationError("missing-field", std::string("missing or non-string field: ") + key);
    }
    return j[key].get<std::string>();
}

ActionCommand parse_action(const ordered_json& j, const std::string& agent_id) {
    if (!j.contains("action") || !j["action"].is_object()) {
        throw ValidationError("missing-field", "missing action object");
    }
    const auto& a = j["action"];
    std::string type = require_string(a, "action_type");

    auto target = [&]() {
        std::string t = require_string(a, "target_agent_id");
        if (t == agent_id) {
            throw ValidationError("self-targeting", "action targets the actor itself");
        }
        return t;
    };
    auto positive_int = [&](const char* key) {
        if (!a.contains(key) || !a[key].is_number_integer()) {
            throw ValidationError("missing-field", std::string("missing integer field: ") + key);
        }
        int v = a[key].get<int>();
        if (v <= 0) {
            throw ValidationError("invalid-amount", std::string(key) + " must be positive");
        }
        return v;
    };

    if (type == "gatherFood") return GatherFood{};
    if (type == "rest") return Rest{};
    if (type == "exploitResource") return ExploitResource{};
    if (type == "shareFood") {
        std::string t = target();
        return ShareFood{t, positive_int("amount")};
    }
    if (type == "formAlliance") return FormAlliance{target()};
    if (type == "rob") {
        std::string t = target();
        return Rob{t, positive_int("quantity")};
    }
    if (type == "do_nothing") {
        std::string reason = a.contains("reason") && a["reason"].is_string()
                                 ? a["reason"].get<std::string>()
                                 : std::string{};
        return DoNothing{reason};
    }
    if (type == "score") {
        std::string t = target();
        if (!a.contains("score") || !a["score"].is_number_integer()) {
            throw ValidationError("missing-field", "missing integer field: score");
        }
        int s = a["score"].get<int>();
        if (s < 1 || s > 10) {
            throw ValidationError("out-of-range-score",
                                  "score must be in [1,10], got " + std::to_string(s));
        }
        std::string reason = a.contains("reason") && a["reason"].is_string()
                                 ? a["reason"].get<std::string>()
                                 : std::string{};
        return Score{t, s, reason};
    }
    throw ValidationError("unknown-action", "unknown action_type: " + type);
}

BeliefMap parse_updates(const ordered_json& j, const char* key, bool expectancy) {
    if (!j.contains(key) || !j[key].is_object()) {
        throw ValidationError("missing-field", std::string("missing updates object: ") + key);
    }
    BeliefMap out;
    for (const auto& [name, val] : j[key].items()) {
        BeliefDimension d;
        try {
            d = dimension_from_name(name);
        } catch (const ConfigError&) {
            throw ValidationError("invalid-update", "unknown belief dimension: " + name);
        }
        if (expectancy && d == BeliefDimension::Sustainability) {
            throw ValidationError("invalid-update",
                                  "sustainability carries no expectancy belief");
        }
        if (!val.is_number()) {
            throw ValidationError("invalid-update", "non-numeric delta for " + name);
        }
        double delta = val.get<double>();
        if (!std::isfinite(delta)) {
            throw ValidationError("invalid-update", "non-finite delta for " + name);
        }
        out[d] = delta;
    }
    return out;
}

}  // namespace

ValidatedResponse validate_response(const std::string& raw, PhaseKind phase) {
    ordered_json j;
    try {
        j = ordered_json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed-json", e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("malformed-json", "payload is not a JSON object");
    }

    if (phase == PhaseKind::Reflect) {
        ReflectionPayload p;
        p.agent_id = require_string(j, "agent_id");
        p.causal_reasoning = require_string(j, "causal_reasoning");
        p.reflection_on_action = require_string(j, "reflection_on_action");
        p.future_inspiration = require_string(j, "future_inspiration");
        p.expectancy_updates = parse_updates(j, "expectancy_updates", true);
        p.value_updates = parse_updates(j, "value_updates", false);
        if (j.contains("svo_note")) {
            if (!j["svo_note"].is_number()) {
                throw ValidationError("invalid-update", "svo_note must be a number");
            }
            p.svo_note = j["svo_note"].get<double>();
        }
        return p;
    }

    DecisionResponse r;
    r.agent_id = require_string(j, "agent_id");
    r.thinking = require_string(j, "thinking");
    r.long_term_memory = require_string(j, "long_term_memory");
    r.short_term_plan = require_string(j, "short_term_plan");
    r.action = parse_action(j, r.agent_id);

    if ((phase == PhaseKind::Plan || phase == PhaseKind::Observe) &&
        !std::holds_alternative<DoNothing>(r.action)) {
        throw ValidationError("phase-action-mismatch",
                              std::string(phase_name(phase)) +
                                  " phase must carry a do_nothing action");
    }
    if (phase == PhaseKind::Vote && !std::holds_alternative<Score>(r.action)) {
        throw ValidationError("phase-action-mismatch",
                              "Vote phase must carry a score action");
    }
    return r;
}

namespace {

ordered_json action_to_json(const ActionCommand& action) {
    struct Visitor {
        ordered_json operator()(const GatherFood&) {
            return {{"action_type", "gatherFood"}};
        }
        ordered_json operator()(const ShareFood& s) {
            return {{"action_type", "shareFood"},
                    {"target_agent_id", s.target},
                    {"amount", s.amount}};
        }
        ordered_json operator()(const FormAlliance& f) {
            return {{"action_type", "formAlliance"}, {"target_agent_id", f.target}};
        }
        ordered_json operator()(const Rest&) { return {{"action_type", "rest"}}; }
        ordered_json operator()(const ExploitResource&) {
            return {{"action_type", "exploitResource"}};
        }
        ordered_json operator()(const Rob& r) {
            return {{"action_type", "rob"},
                    {"target_agent_id", r.target},
                    {"quantity", r.quantity}};
        }
        ordered_json operator()(const DoNothing& d) {
            return {{"action_type", "do_nothing"}, {"reason", d.reason}};
        }
        ordered_json operator()(const Score& s) {
            return {{"action_type", "score"},
                    {"target_agent_id", s.target},
                    {"score", s.score},
                    {"reason", s.reason}};
        }
    };
    return std::visit(Visitor{}, action);
}

}  // namespace

std::string render_response(const DecisionResponse& response) {
    ordered_json j;
    j["agent_id"] = response.agent_id;
    j["thinking"] = response.thinking;
    j["long_term_memory"] = response.long_term_memory;
    j["short_term_plan"] = response.short_term_plan;
    j["action"] = action_to_json(response.action);
    return j.dump();
}

std::string render_response(const ReflectionPayload& payload) {
    ordered_json j;
    j["agent_id"] = payload.agent_id;
    j["causal_reasoning"] = payload.causal_reasoning;
    j["reflection_on_action"] = payload.reflection_on_action;
    j["future_inspiration"] = payload.future_inspiration;
    j["expectancy_updates"] = ordered_json::object();
    for (const auto& [d, v] : payload.expectancy_updates) {
        j["expectancy_updates"][dimension_name(d)] = v;
    }
    j["value_updates"] = ordered_json::object();
    for (const auto& [d, v] : payload.value_updates) {
        j["value_updates"][dimension_name(d)] = v;
    }
    if (payload.svo_note) j["svo_note"] = *payload.svo_note;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Validate-with-repair

namespace {

ValidatedResponse fallback_for(const DecisionRequest& request) {
    const std::string id =
        request.agent_snapshot != nullptr ? request.agent_snapshot->agent_id : "";
    if (request.phase == PhaseKind::Reflect) {
        ReflectionPayload p;
        p.agent_id = id;
        p.causal_reasoning = "validation fallback";
        p.reflection_on_action = "validation fallback";
        p.future_inspiration = "validation fallback";
        return p;
    }
    DecisionResponse r;
    r.agent_id = id;
    r.thinking = "validation fallback";
    r.long_term_memory = "";
    r.short_term_plan = "";
    if (request.phase == PhaseKind::Vote && !request.context.vote_targets.empty()) {
        r.action = Score{request.context.vote_targets.front(), 5, "neutral fallback"};
    } else {
        r.action = DoNothing{"validation fallback"};
    }
    return r;
}

}  // namespace

ValidatedResponse decide_validated(CognitionBackend& backend,
                                   const DecisionRequest& request,
                                   int max_repair_retries) {
    DecisionRequest attempt = request;
    for (int i = 0; i <= max_repair_retries; ++i) {
        std::string raw = backend.decide(attempt);
        try {
            return validate_response(raw, request.phase);
        } catch (const ValidationError& e) {
            attempt.prompt = request.prompt +
                             "\n\nYour previous response was invalid (" + e.rule +
                             "): " + e.what() +
                             "\nRespond again with a corrected JSON payload.";
        }
    }
    return fallback_for(request);
}

// ---------------------------------------------------------------------------
// Scripted backend

ScriptedBackend::ScriptedBackend(ScriptedPolicyOptions options)
    : opts_(std::move(options)) {}

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
    if (needle.empty()) return 0;
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

}  // namespace

std::string ScriptedBackend::decide(const DecisionRequest& request) {
    const AgentState& agent = *request.agent_snapshot;
    const int day = request.context.day;
    const std::string& id = agent.agent_id;

    auto in = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    const bool is_prosocial_exemplar = in(opts_.prosocial_exemplars, id);
    const bool is_antisocial_exemplar = in(opts_.antisocial_exemplars, id);

    // Number of successful prosocial exemplar actions this agent has seen in
    // past digests. Failed attempts use different wording and never match.
    auto observed_successes = [&]() {
        if (opts_.successes_never_accumulate) return 0;
        int n = 0;
        for (const auto& entry : agent.memory_log) {
            for (const auto& ex : opts_.prosocial_exemplars) {
                n += count_occurrences(entry.digest_text, ex + " shared ");
                n += count_occurrences(entry.digest_text, ex + " formed an alliance with ");
            }
        }
        return n;
    };

    auto post_collapse = [&]() {
        if (request.context.todays_digest &&
            contains(*request.context.todays_digest, "SHOCKING NEWS")) {
            return true;
        }
        for (const auto& entry : agent.memory_log) {
            if (contains(entry.digest_text, "SHOCKING NEWS")) return true;
        }
        return false;
    };

    // Deterministic target rotation over the follower roster, skipping self.
    auto cycle_follower = [&](int salt) -> std::string {
        const auto& f = opts_.follower_ids;
        if (f.empty()) return {};
        std::size_t idx = static_cast<std::size_t>((day - 1 + salt)) % f.size();
        for (std::size_t tries = 0; tries < f.size(); ++tries) {
            const std::string& candidate = f[(idx + tries) % f.size()];
            if (candidate != id) return candidate;
        }
        return {};
    };

    auto decision = [&](const ActionCommand& action, const std::string& thinking,
                        const std::string& plan) {
        DecisionResponse r;
        r.agent_id = id;
        r.thinking = thinking;
        r.long_term_memory = "Day " + std::to_string(day) + " noted.";
        r.short_term_plan = plan;
        r.action = action;
        return render_response(r);
    };

    switch (request.phase) {
        case PhaseKind::Plan:
            return decision(DoNothing{"Finished planning."},
                            "Weighing food, HP and allies before the day starts.",
                            "Act according to my disposition today.");
        case PhaseKind::Observe:
            return decision(DoNothing{"Observing."},
                            "Absorbing the Tribe Daily report.",
                            "Carry today's events into tomorrow.");
        case PhaseKind::Act:
            break;  // handled below
        case PhaseKind::Vote: {
            const std::string& target = request.context.vote_targets.front();
            // Valence of the target's most recent public action, today first.
            auto line_valence = [&](const std::string& text) -> int {
                if (contains(text, target + " shared ") ||
                    contains(text, target + " formed an alliance with ")) {
                    return 1;
                }
                if (contains(text, "Resource exploitation warning: " + target) ||
                    contains(text, "Robbery alert: " + target)) {
                    return -1;
                }
                return 0;
            };
            int valence = 0;
            if (request.context.todays_digest) {
                valence = line_valence(*request.context.todays_digest);
            }
            if (valence == 0) {
                for (auto it = agent.memory_log.rbegin(); it != agent.memory_log.rend();
                     ++it) {
                    valence = line_valence(it->digest_text);
                    if (valence != 0) break;
                }
            }
            double svo = agent.beliefs.svo();
            int sign = svo > 0 ? 1 : (svo < 0 ? -1 : 0);
            int score = std::clamp(5 + 2 * sign * valence, 1, 10);
            return decision(
                Score{target, score, "Judging " + target + " by their latest conduct."},
                "Scoring " + target + " against my own values.",
                "Keep watching " + target + ".");
        }
        case PhaseKind::Reflect: {
            ReflectionPayload p;
            p.agent_id = id;
            p.causal_reasoning = "Today's outcomes followed from who acted and who was seen.";
            p.reflection_on_action = "Others will remember what I did today.";
            p.future_inspiration = "Hold to the course that my beliefs point to.";
            p.svo_note = agent.beliefs.svo();

            const bool follower = is_follower_archetype(agent.archetype.kind);
            if (!follower || opts_.drop_exemplar_comparison ||
                !request.context.todays_digest) {
                return render_response(p);
            }
            const std::string& digest = *request.context.todays_digest;
            const MoralGroup group = moral_group(agent.archetype.kind);

            if (post_collapse()) {
                if (group == MoralGroup::Selfish) {
                    p.value_updates[BeliefDimension::Cooperation] = -0.05;
                    p.value_updates[BeliefDimension::Sharing] = -0.05;
                    p.future_inspiration =
                        "The elder's betrayal proves generosity was a trap; look after myself.";
                } else {
                    p.value_updates[BeliefDimension::Cooperation] = 0.03;
                    p.value_updates[BeliefDimension::Sharing] = 0.03;
                    p.future_inspiration =
                        "Even after the elder's fall, cooperation remains who I am.";
                }
                if (opts_.suppress_value_updates) p.value_updates.clear();
                return render_response(p);
            }

            const double delta = opts_.updates_halved ? 0.025 : 0.05;
            std::vector<BeliefDimension> exercised;
            for (const auto& ex : opts_.prosocial_exemplars) {
                if (contains(digest, ex + " shared ")) {
                    exercised.push_back(BeliefDimension::Sharing);
                    exercised.push_back(BeliefDimension::Cooperation);
                }
                if (contains(digest, ex + " formed an alliance with ")) {
                    exercised.push_back(BeliefDimension::Cooperation);
                }
            }
            if (group == MoralGroup::Selfish) {
                for (const auto& ex : opts_.antisocial_exemplars) {
                    if (contains(digest, "Resource exploitation warning: " + ex)) {
                        exercised.push_back(BeliefDimension::Exploitation);
                    }
                    if (contains(digest, "Robbery alert: " + ex)) {
                        exercised.push_back(BeliefDimension::Robbery);
                    }
                }
            }
            for (auto d : exercised) {
                p.value_updates[d] = delta;  // all observed exemplar signs are positive
                p.expectancy_updates[d] = 0.02;
            }
            if (!exercised.empty()) {
                p.future_inspiration =
                    "The role models' visible example is working; lean toward it.";
            }
            if (opts_.suppress_value_updates) p.value_updates.clear();
            return render_response(p);
        }
    }

    // Act phase.
    const auto& value = agent.beliefs.value;
    const bool odd = day % 2 == 1;

    if (is_prosocial_exemplar) {
        if (value.at(BeliefDimension::Exploitation) > 0) {
            // Collapsed exemplar: prey on the tribe.
            if (odd) {
                return decision(ExploitResource{},
                                "Cooperation is for fools; strip the valley.",
                                "Take what I need.");
            }
            return decision(Rob{cycle_follower(0), 1},
                            "Take from the weak while I can.", "Take what I need.");
        }
        if (agent.food >= 1) {
            return decision(ShareFood{cycle_follower(0), 1},
                            "Generosity shown daily is how norms take root.",
                            "Share with whoever is next in need.");
        }
        return decision(GatherFood{}, "Restock so there is something to give.",
                        "Gather today, share tomorrow.");
    }
    if (is_antisocial_exemplar) {
        if (odd) {
            return decision(ExploitResource{}, "Dominance needs resources.",
                            "Strip the reserves.");
        }
        return decision(Rob{cycle_follower(0), 1}, "The strong take from the weak.",
                        "Rob the next follower.");
    }

    // Followers.
    const MoralGroup group = moral_group(agent.archetype.kind);
    const std::string primary_exemplar =
        opts_.prosocial_exemplars.empty() ? std::string{} : opts_.prosocial_exemplars.front();

    if (group == MoralGroup::Selfish && post_collapse()) {
        if (odd) {
            return decision(ExploitResource{},
                            "The prosocial bargain is dead; back to taking.",
                            "Exploit while others hesitate.");
        }
        return decision(Rob{cycle_follower(1), 1},
                        "No more pretending; take from whoever has food.",
                        "Rob the next agent over.");
    }

    if (group == MoralGroup::Prosocial) {
        if (!odd && !primary_exemplar.empty() && primary_exemplar != id) {
            return decision(FormAlliance{primary_exemplar},
                            "Bind myself to the tribe's best example.",
                            "Strengthen ties with " + primary_exemplar + ".");
        }
        return decision(GatherFood{}, "Keep the larder full for myself and allies.",
                        "Gather food today.");
    }

    // Selfish follower, pre-collapse.
    if (observed_successes() < opts_.success_threshold) {
        return decision(ExploitResource{},
                        "Maximize my own gain; nothing else has proven better.",
                        "Exploit the reserves for quick benefit.");
    }
    if (agent.food <= 1) {
        return decision(GatherFood{}, "Restock before spending on others.",
                        "Gather food today.");
    }
    if (odd && !primary_exemplar.empty() && primary_exemplar != id) {
        return decision(FormAlliance{primary_exemplar},
                        "The elder's way keeps paying off; join it.",
                        "Ally with " + primary_exemplar + ".");
    }
    std::string share_target = agent.allies.empty()
                                   ? (primary_exemplar.empty() || primary_exemplar == id
                                          ? cycle_follower(1)
                                          : primary_exemplar)
                                   : *agent.allies.begin();
    return decision(ShareFood{share_target, 1},
                    "Giving visibly is what earned the elder his standing.",
                    "Share with " + share_target + ".");
}

}  // namespace exsim
