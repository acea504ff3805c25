#include "exsim/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <numeric>

namespace exsim {

namespace {

std::optional<MoralGroup> follower_group(const std::string& aspirant_type) {
    try {
        ArchetypeKind kind = archetype_from_name(aspirant_type);
        if (!is_follower_archetype(kind)) return std::nullopt;
        return moral_group(kind);
    } catch (const ConfigError&) {
        return std::nullopt;
    }
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_sd(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

int max_day(const std::vector<LogEntry>& entries) {
    int d = 0;
    for (const auto& e : entries) d = std::max(d, e.day);
    return d;
}

}  // namespace

std::map<MoralGroup, GroupSeries> group_svo_series(const std::vector<LogEntry>& entries,
                                                   PoolingMode pooling) {
    const int days = max_day(entries);
    if (days == 0) throw AnalysisError("group_svo_series: no log entries");
    bool any_follower = std::any_of(entries.begin(), entries.end(), [](const LogEntry& e) {
        return follower_group(e.aspirant_type).has_value();
    });
    if (!any_follower) {
        throw AnalysisError("group_svo_series: no follower observations");
    }

    // [group][day] -> observations (or per-run means)
    std::map<MoralGroup, std::vector<std::vector<double>>> obs;
    for (auto g : {MoralGroup::Prosocial, MoralGroup::Selfish}) {
        obs[g].resize(days);
    }

    if (pooling == PoolingMode::Observations) {
        for (const auto& e : entries) {
            auto g = follower_group(e.aspirant_type);
            if (!g) continue;
            obs[*g][e.day - 1].push_back(e.svo_score);
        }
    } else {
        // run -> group -> day -> values
        std::map<std::string, std::map<MoralGroup, std::vector<std::vector<double>>>>
            per_run;
        for (const auto& e : entries) {
            auto g = follower_group(e.aspirant_type);
            if (!g) continue;
            auto& slot = per_run[e.run_id][*g];
            if (slot.empty()) slot.resize(days);
            slot[e.day - 1].push_back(e.svo_score);
        }
        for (const auto& [run, groups] : per_run) {
            for (const auto& [g, day_values] : groups) {
                for (int d = 0; d < days; ++d) {
                    if (!day_values[d].empty()) {
                        obs[g][d].push_back(mean_of(day_values[d]));
                    }
                }
            }
        }
    }

    std::map<MoralGroup, GroupSeries> out;
    for (auto& [g, day_values] : obs) {
        // A group that never appears is simply absent from the result.
        bool any = std::any_of(day_values.begin(), day_values.end(),
                               [](const auto& v) { return !v.empty(); });
        if (!any) continue;
        GroupSeries s;
        s.group = g;
        for (int d = 0; d < days; ++d) {
            if (day_values[d].empty()) {
                s.per_day_mean.push_back(std::nan(""));
                s.per_day_sd.push_back(std::nan(""));
            } else {
                s.per_day_mean.push_back(mean_of(day_values[d]));
                s.per_day_sd.push_back(population_sd(day_values[d]));
            }
        }
        out[g] = std::move(s);
    }
    return out;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::Degraded: return "Degraded";
        case Stability::Improved: return "Improved";
    }
    throw ContractViolation("unknown stability");
}

Stability classify_stability(double early_sd, double late_sd) {
    if (early_sd < 0 || late_sd < 0) {
        throw ContractViolation("classify_stability: negative SD");
    }
    const double shift = late_sd - early_sd;
    if (shift > 0.03) return Stability::Degraded;
    if (shift < -0.03) return Stability::Improved;
    return Stability::Stable;
}

MetricsRow compute_metrics(const GroupSeries& series, DayWindow early, DayWindow late) {
    const int n = static_cast<int>(series.per_day_mean.size());
    if (n < late.last || n < early.last) {
        throw AnalysisError("compute_metrics: series shorter than the metric windows");
    }
    auto window_stats = [&](DayWindow w, bool sd) {
        std::vector<double> vals;
        for (int d = w.first; d <= w.last; ++d) {
            vals.push_back(sd ? series.per_day_sd[d - 1] : series.per_day_mean[d - 1]);
        }
        return mean_of(vals);
    };
    MetricsRow row;
    row.early_svo_mean = window_stats(early, false);
    row.early_svo_sd = window_stats(early, true);
    row.late_svo_mean = window_stats(late, false);
    row.late_svo_sd = window_stats(late, true);
    row.delta_svo = row.late_svo_mean - row.early_svo_mean;
    for (int d = 1; d <= n; ++d) {
        if (series.per_day_mean[d - 1] > 0.0) {
            row.first_positive = d;
            break;
        }
    }
    row.peak_svo = *std::max_element(series.per_day_mean.begin(),
                                     series.per_day_mean.end());
    row.stability = classify_stability(row.early_svo_sd, row.late_svo_sd);
    return row;
}

std::vector<double> norm_loss(const GroupSeries& baseline, const GroupSeries& conflict) {
    if (baseline.per_day_mean.size() != conflict.per_day_mean.size()) {
        throw AnalysisError("norm_loss: series length mismatch");
    }
    std::vector<double> deficit;
    deficit.reserve(baseline.per_day_mean.size());
    for (std::size_t i = 0; i < baseline.per_day_mean.size(); ++i) {
        deficit.push_back(baseline.per_day_mean[i] - conflict.per_day_mean[i]);
    }
    return deficit;
}

BehaviorCounts behavior_counts(const std::vector<LogEntry>& entries, DayWindow early,
                               DayWindow late) {
    const int days = max_day(entries);
    BehaviorCounts out;
    for (auto g : {MoralGroup::Prosocial, MoralGroup::Selfish}) {
        out.prosocial[g].assign(days, 0);
        out.antisocial[g].assign(days, 0);
        out.neutral[g].assign(days, 0);
    }

    auto starts_with = [](const std::string& s, const char* prefix) {
        return s.rfind(prefix, 0) == 0;
    };
    for (const auto& e : entries) {
        auto g = follower_group(e.aspirant_type);
        if (!g) continue;
        const auto& a = e.action_taken;
        if (starts_with(a, "formAlliance(") || starts_with(a, "shareFood(")) {
            out.prosocial[*g][e.day - 1]++;
        } else if (starts_with(a, "exploitResource(") || starts_with(a, "rob(")) {
            out.antisocial[*g][e.day - 1]++;
        } else if (starts_with(a, "rest(") || starts_with(a, "gatherFood(") ||
                   starts_with(a, "do_nothing(")) {
            out.neutral[*g][e.day - 1]++;
        }
    }

    auto window_total = [&](DayWindow w) {
        double total = 0;
        for (auto g : {MoralGroup::Prosocial, MoralGroup::Selfish}) {
            for (int d = w.first; d <= std::min(w.last, days); ++d) {
                total += out.antisocial[g][d - 1];
            }
        }
        return total / static_cast<double>(w.last - w.first + 1);
    };
    double early_rate = window_total(early);
    double late_rate = window_total(late);
    out.antisocial_reduction_pct =
        early_rate > 0 ? (early_rate - late_rate) / early_rate * 100.0 : 0.0;
    return out;
}

std::vector<std::optional<double>> voting_trend(const std::vector<LogEntry>& entries,
                                                const std::string& target) {
    const int days = max_day(entries);
    std::vector<std::vector<double>> scores(days);
    bool any = false;
    for (const auto& e : entries) {
        for (const auto& v : e.votes_given) {
            if (v.target == target) {
                scores[e.day - 1].push_back(v.score);
                any = true;
            }
        }
    }
    if (!any) {
        throw AnalysisError("voting_trend: no votes recorded for target " + target);
    }
    std::vector<std::optional<double>> out;
    for (const auto& day_scores : scores) {
        if (day_scores.empty()) {
            out.push_back(std::nullopt);
        } else {
            out.push_back(mean_of(day_scores));
        }
    }
    return out;
}

namespace {

std::map<std::string, int> count_tokens(const std::string& text,
                                        const std::vector<std::string>& words) {
    // Tokens are runs of [a-z0-9-], lowercased; hyphens stay inside tokens
    // so multiword-style entries like "long-term" count as one token.
    std::map<std::string, int> counts;
    for (const auto& w : words) counts[w] = 0;
    std::string token;
    auto flush = [&]() {
        if (!token.empty()) {
            auto it = counts.find(token);
            if (it != counts.end()) it->second++;
            token.clear();
        }
    };
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '-') {
            token.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return counts;
}

}  // namespace

std::map<MoralGroup, std::map<std::string, std::map<std::string, int>>>
justification_keywords(const std::vector<LogEntry>& entries, const Lexicon& lexicon,
                       DayWindow window) {
    if (lexicon.empty()) {
        throw ContractViolation("justification_keywords: empty lexicon");
    }
    std::map<MoralGroup, std::map<std::string, std::map<std::string, int>>> out;
    for (auto g : {MoralGroup::Prosocial, MoralGroup::Selfish}) {
        for (const auto& [label, words] : lexicon) {
            for (const auto& w : words) out[g][label][w] = 0;
        }
    }
    for (const auto& e : entries) {
        if (e.day < window.first || e.day > window.last) continue;
        auto g = follower_group(e.aspirant_type);
        if (!g) continue;
        std::string text;
        if (e.reflection_struct) {
            text += e.reflection_struct->causal_reasoning + " " +
                    e.reflection_struct->reflection_on_action + " " +
                    e.reflection_struct->future_inspiration + " ";
        }
        for (const auto& v : e.votes_given) text += v.reason + " ";
        for (const auto& [label, words] : lexicon) {
            for (const auto& [word, n] : count_tokens(text, words)) {
                out[*g][label][word] += n;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Log loading

std::vector<std::string> expand_glob(const std::string& pattern) {
    namespace fs = std::filesystem;
    auto star = pattern.find('*');
    if (star == std::string::npos) {
        return {pattern};
    }
    fs::path p(pattern);
    fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    const std::string name_pattern = p.filename().string();

    auto matches = [&](const std::string& name) {
        // Single-component glob: '*' matches any run of characters.
        std::size_t np = 0, sp = 0, star_idx = std::string::npos, match = 0;
        while (np < name.size()) {
            if (sp < name_pattern.size() &&
                (name_pattern[sp] == name[np] || name_pattern[sp] == '?')) {
                ++np, ++sp;
            } else if (sp < name_pattern.size() && name_pattern[sp] == '*') {
                star_idx = sp++;
                match = np;
            } else if (star_idx != std::string::npos) {
                sp = star_idx + 1;
                np = ++match;
            } else {
                return false;
            }
        }
        while (sp < name_pattern.size() && name_pattern[sp] == '*') ++sp;
        return sp == name_pattern.size();
    };

    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && matches(entry.path().filename().string())) {
            out.push_back(entry.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LogEntry> read_logs_glob(const std::string& pattern) {
    std::vector<LogEntry> all;
    auto files = expand_glob(pattern);
    if (files.empty()) {
        throw AnalysisError("no log files match pattern: " + pattern);
    }
    for (const auto& f : files) {
        auto entries = read_log_file(f);
        all.insert(all.end(), entries.begin(), entries.end());
    }
    return all;
}

}  // namespace exsim
