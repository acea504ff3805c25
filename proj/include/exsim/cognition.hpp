#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exsim/domain.hpp"
#include "exsim/world.hpp"

namespace exsim {

enum class PhaseKind { Plan, Act, Observe, Vote, Reflect };

const char* phase_name(PhaseKind p);

enum class PromptVariant { Base, V1, V2 };

PromptVariant prompt_variant_from_name(const std::string& name);
const char* prompt_variant_name(PromptVariant v);

// Everything build_prompt folds into the rendered text besides the agent.
struct PromptContext {
    int day = 1;
    std::string memory_context;            // from inject_memory
    std::optional<std::string> todays_digest;  // Observe/Vote/Reflect only
    std::vector<std::string> vote_targets;     // Vote only
    std::vector<std::string> scenario_framing;
    PromptVariant variant = PromptVariant::Base;
    // Reflect only: the exemplar-comparison section is dropped under the
    // no-reflection condition.
    bool include_exemplar_comparison = true;
};

std::string build_prompt(PhaseKind phase, const AgentState& agent,
                         const PromptContext& ctx);

struct DecisionRequest {
    PhaseKind phase = PhaseKind::Plan;
    const AgentState* agent_snapshot = nullptr;
    PromptContext context;
    std::string prompt;  // fully rendered
};

DecisionRequest make_request(PhaseKind phase, const AgentState& agent,
                             PromptContext ctx);

struct DecisionResponse {
    std::string agent_id;
    std::string thinking;
    std::string long_term_memory;
    std::string short_term_plan;
    ActionCommand action = DoNothing{"unset"};
};

struct ReflectionPayload {
    std::string agent_id;
    std::string causal_reasoning;
    std::string reflection_on_action;
    std::string future_inspiration;
    BeliefMap expectancy_updates;
    BeliefMap value_updates;
    std::optional<double> svo_note;
};

struct ValidationError : std::runtime_error {
    std::string rule;
    ValidationError(std::string rule_, const std::string& message)
        : std::runtime_error(message), rule(std::move(rule_)) {}
};

using ValidatedResponse = std::variant<DecisionResponse, ReflectionPayload>;

// Parses a backend's textual output for the given phase. Throws
// ValidationError carrying the violated rule.
ValidatedResponse validate_response(const std::string& raw, PhaseKind phase);

// Inverse of validate_response for well-formed payloads.
std::string render_response(const DecisionResponse& response);
std::string render_response(const ReflectionPayload& payload);

// ---------------------------------------------------------------------------
// Backends

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CognitionBackend {
public:
    virtual ~CognitionBackend() = default;
    virtual std::string decide(const DecisionRequest& request) = 0;
};

// decide + validate with bounded repair: on a schema violation the request is
// re-issued with an error-explaining addendum, up to max_repair_retries
// times; after that the phase-specific fallback applies.
ValidatedResponse decide_validated(CognitionBackend& backend,
                                   const DecisionRequest& request,
                                   int max_repair_retries = 2);

// ---------------------------------------------------------------------------
// Remote backend (OpenAI-compatible chat completions)

struct RemoteBackendConfig {
    std::string base_url;  // e.g. http://127.0.0.1:8080
    std::string model;
    double temperature = 0.7;
    std::string api_key;   // empty -> no Authorization header
    int transport_retries = 3;
    int backoff_base_ms = 250;
};

class RemoteBackend : public CognitionBackend {
public:
    explicit RemoteBackend(RemoteBackendConfig config);
    ~RemoteBackend() override;
    std::string decide(const DecisionRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Scripted backend (deterministic rule-based stand-in)

struct ScriptedPolicyOptions {
    std::vector<std::string> prosocial_exemplars;   // observed and internalized
    std::vector<std::string> antisocial_exemplars;  // internalized by Selfish only
    std::vector<std::string> follower_ids;          // sorted; action targets
    int success_threshold = 3;
    // Condition gates.
    bool successes_never_accumulate = false;  // unsuccessful exemplar
    bool updates_halved = false;              // unattainable exemplar
    bool drop_exemplar_comparison = false;    // no-reflection condition
    bool suppress_value_updates = false;      // uninspiring exemplar
};

class ScriptedBackend : public CognitionBackend {
public:
    explicit ScriptedBackend(ScriptedPolicyOptions options);
    std::string decide(const DecisionRequest& request) override;

private:
    ScriptedPolicyOptions opts_;
};

}  // namespace exsim
