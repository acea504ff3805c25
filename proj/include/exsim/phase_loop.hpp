#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "exsim/cognition.hpp"
#include "exsim/scenario.hpp"
#include "exsim/telemetry.hpp"
#include "exsim/world.hpp"

namespace exsim {

struct RunContext {
    std::string run_id;
    ExperimentConfig config;
    std::uint64_t seed = 1;
    std::shared_ptr<CognitionBackend> backend;
    std::mt19937_64 rng;
    std::string out_dir = ".";
};

// UTC timestamp plus 4-hex suffix, unique per invocation.
std::string generate_run_id();

// Builds the backend named by the config; the API key comes from the
// EXEMPLAR_SIM_API_KEY environment variable for remote backends.
std::shared_ptr<CognitionBackend> make_backend(const ExperimentConfig& config);

// Executes one full day: Plan, Act, Observe, Vote, Reflect, then upkeep.
// Scenario events for the day must already be applied; their effects are
// passed in. Returns one LogEntry per agent alive at dawn.
std::vector<LogEntry> run_day(WorldState& state, RunContext& ctx,
                              const ScenarioEffects& effects);

struct RunSummary {
    std::string run_id;
    int days_completed = 0;
    std::string log_path;
    std::string checkpoint_path;
};

struct RunOptions {
    ExperimentConfig config;
    std::string run_id;             // empty -> generated
    std::string out_dir = ".";
    std::optional<std::string> resume_checkpoint;
    int until_day = 0;              // 0 -> config.world.max_days
    std::shared_ptr<CognitionBackend> backend;  // empty -> make_backend(config)
};

// Runs (or resumes) an experiment, checkpointing after every day. A backend
// failure leaves the last day-boundary checkpoint on disk and rethrows.
RunSummary run_experiment(const RunOptions& options);

}  // namespace exsim
