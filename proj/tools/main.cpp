#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "exsim/analysis.hpp"
#include "exsim/phase_loop.hpp"
#include "exsim/scenario.hpp"

namespace {

using namespace exsim;

std::string fmt(double v) {
    if (std::isnan(v)) return "NA";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_csv(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

std::string metrics_csv(const std::map<MoralGroup, GroupSeries>& series) {
    std::ostringstream os;
    os << "group,early_svo_mean,early_svo_sd,late_svo_mean,late_svo_sd,delta_svo,"
          "first_positive,peak_svo,stability\n";
    for (const auto& [g, s] : series) {
        MetricsRow row = compute_metrics(s);
        os << moral_group_name(g) << "," << fmt(row.early_svo_mean) << ","
           << fmt(row.early_svo_sd) << "," << fmt(row.late_svo_mean) << ","
           << fmt(row.late_svo_sd) << "," << fmt(row.delta_svo) << ","
           << (row.first_positive ? std::to_string(*row.first_positive) : "none") << ","
           << fmt(row.peak_svo) << "," << stability_name(row.stability) << "\n";
    }
    return os.str();
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_given,
            const std::string& resume, int until, const std::string& out_dir,
            const std::string& run_id) {
    ExperimentConfig config = load_config(config_path);
    if (seed_given) config.seed = seed;

    RunOptions opts;
    opts.config = config;
    opts.out_dir = out_dir;
    opts.run_id = run_id;
    if (!resume.empty()) opts.resume_checkpoint = resume;
    if (until > 0) opts.until_day = until;

    try {
        RunSummary summary = run_experiment(opts);
        std::cout << "run_id: " << summary.run_id << "\n"
                  << "days_completed: " << summary.days_completed << "\n"
                  << "log: " << summary.log_path << "\n"
                  << "checkpoint: " << summary.checkpoint_path << "\n";
        return 0;
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n"
                  << "the run can be resumed from the last checkpoint with --resume\n";
        return 2;
    }
}

int cmd_analyze(const std::string& logs, const std::string& out_dir,
                const std::string& baseline, bool run_mean_pooling) {
    std::filesystem::create_directories(out_dir);
    auto entries = read_logs_glob(logs);
    auto pooling = run_mean_pooling ? PoolingMode::RunMeans : PoolingMode::Observations;
    auto series = group_svo_series(entries, pooling);

    {
        std::ostringstream os;
        os << "day,group,mean_svo,sd_svo\n";  // population SD, days 1-based
        for (const auto& [g, s] : series) {
            for (std::size_t d = 0; d < s.per_day_mean.size(); ++d) {
                os << (d + 1) << "," << moral_group_name(g) << ","
                   << fmt(s.per_day_mean[d]) << "," << fmt(s.per_day_sd[d]) << "\n";
            }
        }
        write_csv(out_dir + "/svo_series.csv", os.str());
    }
    write_csv(out_dir + "/metrics.csv", metrics_csv(series));
    {
        BehaviorCounts counts = behavior_counts(entries);
        std::ostringstream os;
        os << "day,group,prosocial,antisocial,neutral\n";
        for (const auto& [g, pro] : counts.prosocial) {
            for (std::size_t d = 0; d < pro.size(); ++d) {
                os << (d + 1) << "," << moral_group_name(g) << "," << pro[d] << ","
                   << counts.antisocial.at(g)[d] << "," << counts.neutral.at(g)[d]
                   << "\n";
            }
        }
        os << "# antisocial_reduction_pct," << fmt(counts.antisocial_reduction_pct)
           << "\n";
        write_csv(out_dir + "/behavior_counts.csv", os.str());
    }
    {
        // Voting trends for every target seen in the logs.
        std::set<std::string> targets;
        for (const auto& e : entries) {
            for (const auto& v : e.votes_given) targets.insert(v.target);
        }
        std::ostringstream os;
        os << "day,target,mean_score\n";
        for (const auto& t : targets) {
            auto trend = voting_trend(entries, t);
            for (std::size_t d = 0; d < trend.size(); ++d) {
                os << (d + 1) << "," << t << ","
                   << (trend[d] ? fmt(*trend[d]) : "NA") << "\n";
            }
        }
        write_csv(out_dir + "/voting_trend.csv", os.str());
    }
    {
        Lexicon lexicon = {
            {"selfish", {"gain", "maximize", "benefit"}},
            {"prosocial", {"alliance", "stability", "long-term", "social"}},
        };
        int days = 0;
        for (const auto& e : entries) days = std::max(days, e.day);
        auto table = justification_keywords(entries, lexicon, {1, days});
        std::ostringstream os;
        os << "group,label,word,count\n";
        for (const auto& [g, labels] : table) {
            for (const auto& [label, words] : labels) {
                for (const auto& [word, n] : words) {
                    os << moral_group_name(g) << "," << label << "," << word << ","
                       << n << "\n";
                }
            }
        }
        write_csv(out_dir + "/keywords.csv", os.str());
    }
    if (!baseline.empty()) {
        auto base_entries = read_logs_glob(baseline);
        auto base_series = group_svo_series(base_entries, pooling);
        std::ostringstream os;
        os << "day,group,svo_deficit\n";
        for (const auto& [g, s] : base_series) {
            auto deficit = norm_loss(s, series.at(g));
            for (std::size_t d = 0; d < deficit.size(); ++d) {
                os << (d + 1) << "," << moral_group_name(g) << "," << fmt(deficit[d])
                   << "\n";
            }
        }
        write_csv(out_dir + "/norm_loss.csv", os.str());
    }
    std::cout << "analysis written to " << out_dir << "\n";
    return 0;
}

int cmd_metrics(const std::string& logs) {
    auto entries = read_logs_glob(logs);
    auto series = group_svo_series(entries);
    std::cout << metrics_csv(series);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exemplar-sim: exemplar-driven moral learning simulator"};
    app.require_subcommand(1);

    std::string config_path, resume, out_dir = ".", run_id, logs, baseline;
    std::uint64_t seed = 0;
    int until = 0;
    bool run_mean_pooling = false;

    auto* run = app.add_subcommand("run", "execute or resume a simulation run");
    run->add_option("--config", config_path, "experiment config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--resume", resume, "checkpoint file to resume from");
    run->add_option("--until", until, "stop after this day (for later resume)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--run-id", run_id, "fixed run id (default: timestamp-based)");

    auto* analyze = app.add_subcommand("analyze", "compute all metrics as CSV files");
    analyze->add_option("--logs", logs, "JSONL log glob")->required();
    std::string analyze_out = "analysis";
    analyze->add_option("--out", analyze_out, "output directory");
    analyze->add_option("--baseline", baseline,
                        "baseline log glob; enables the norm-loss deficit");
    analyze->add_flag("--run-mean-pooling", run_mean_pooling,
                      "pool per-run means instead of raw observations");

    auto* metrics = app.add_subcommand("metrics", "print the metrics table");
    metrics->add_option("--logs", logs, "JSONL log glob")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, seed, seed_opt->count() > 0, resume, until,
                           out_dir, run_id);
        }
        if (analyze->parsed()) {
            return cmd_analyze(logs, analyze_out, baseline, run_mean_pooling);
        }
        return cmd_metrics(logs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
