#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exsim/cognition.hpp"
#include "exsim/domain.hpp"
#include "exsim/world.hpp"

namespace exsim {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VoteRecord {
    std::string target;
    int score = 5;
    std::string reason;
};

struct EndOfDayState {
    int hp = 0;
    int age = 0;
    std::vector<std::string> allies;
    int children = 0;
};

struct LogEntry {
    std::string run_id;
    int day = 1;
    std::string aspirant_id;
    std::string aspirant_type;
    std::string observation_brief;
    std::string action_taken;
    std::vector<VoteRecord> votes_given;
    std::optional<ReflectionPayload> reflection_struct;
    EndOfDayState end_of_day_state;
    BeliefSystem current_beliefs;
    double svo_score = 0.0;
    std::string experiment_id;
    bool is_post_collapse = false;
};

std::string log_entry_to_json(const LogEntry& entry);
LogEntry log_entry_from_json(const std::string& line);

// Appends one self-contained JSON line. I/O failures carry path and day.
void append_log(const std::string& path, const LogEntry& entry);

std::vector<LogEntry> read_log_file(const std::string& path);

// FNV-1a over the canonical config serialization.
std::uint64_t config_digest(const std::string& canonical_config);

struct CheckpointData {
    std::string version = "exemplar-sim-ckpt/1";
    std::string run_id;
    int day = 0;  // last completed day; 0 = freshly initialized
    WorldState world;
    std::string rng_state;
    std::uint64_t config_digest = 0;
};

// Atomic write (temp file + rename); save-load-save is byte identical.
void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

// Completeness + cross-field audit over a finished run's entries:
// exactly one entry per (day, agent alive at dawn), and the svo_score field
// agrees with current_beliefs on every line to 1e-9.
// Throws IoError with a diagnostic on the first violation.
void audit_log_entries(const std::vector<LogEntry>& entries);

}  // namespace exsim
