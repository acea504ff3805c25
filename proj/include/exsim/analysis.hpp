#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exsim/domain.hpp"
#include "exsim/telemetry.hpp"

namespace exsim {

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupSeries {
    MoralGroup group = MoralGroup::Prosocial;
    std::vector<double> per_day_mean;  // index 0 = day 1
    std::vector<double> per_day_sd;    // population SD
};

// Observation pooling merges all agent-day observations across runs before
// computing mean/SD; run-mean pooling averages within each run first.
enum class PoolingMode { Observations, RunMeans };

// Per-day mean and SD of follower svo_score by moral group. Exemplars are
// excluded. Throws AnalysisError when a group has no observations.
std::map<MoralGroup, GroupSeries> group_svo_series(
    const std::vector<LogEntry>& entries,
    PoolingMode pooling = PoolingMode::Observations);

enum class Stability { Stable, Degraded, Improved };

const char* stability_name(Stability s);

// Degraded when late SD grows by more than 0.03, Improved when it shrinks
// by more than 0.03, Stable otherwise.
Stability classify_stability(double early_sd, double late_sd);

struct DayWindow {
    int first = 1;
    int last = 5;
};

struct MetricsRow {
    double early_svo_mean = 0.0;
    double early_svo_sd = 0.0;
    double late_svo_mean = 0.0;
    double late_svo_sd = 0.0;
    double delta_svo = 0.0;
    std::optional<int> first_positive;
    double peak_svo = 0.0;
    Stability stability = Stability::Stable;
};

// Window SDs are the mean per-day SD over the window.
MetricsRow compute_metrics(const GroupSeries& series, DayWindow early = {1, 5},
                           DayWindow late = {26, 30});

// Per-day baseline mean minus conflict mean. Positive = performance loss.
std::vector<double> norm_loss(const GroupSeries& baseline,
                              const GroupSeries& conflict);

struct BehaviorCounts {
    // [group][day-1] counts
    std::map<MoralGroup, std::vector<int>> prosocial;
    std::map<MoralGroup, std::vector<int>> antisocial;
    std::map<MoralGroup, std::vector<int>> neutral;
    // Early-vs-late reduction of total antisocial acts, in percent.
    double antisocial_reduction_pct = 0.0;
};

BehaviorCounts behavior_counts(const std::vector<LogEntry>& entries,
                               DayWindow early = {1, 5}, DayWindow late = {26, 30});

// Daily mean score given to the target; empty optional marks a day with no
// votes. Throws AnalysisError when the target was never voted on.
std::vector<std::optional<double>> voting_trend(const std::vector<LogEntry>& entries,
                                                const std::string& target);

using Lexicon = std::map<std::string, std::vector<std::string>>;

// Case-insensitive token counts of lexicon words in reflection text and vote
// reasons inside the window, per moral group: [group][label][word] -> count.
std::map<MoralGroup, std::map<std::string, std::map<std::string, int>>>
justification_keywords(const std::vector<LogEntry>& entries, const Lexicon& lexicon,
                       DayWindow window);

// Expands a glob pattern ('*' within the filename component) and reads all
// matching JSONL files into one pooled entry list.
std::vector<std::string> expand_glob(const std::string& pattern);
std::vector<LogEntry> read_logs_glob(const std::string& pattern);

}  // namespace exsim
