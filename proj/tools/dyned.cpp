// Command-line entry point: run one experiment, bench a matrix of
// generators x seeds x methods, or rank an existing results CSV.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dyned/dyned.hpp"

namespace {

struct RunOptions {
    std::string generator;
    std::string dataset_csv;
    int label_col = -1;  // -1 = last column
    std::string label_name;
    bool header = false;
    long long samples = 100000;
    bool samples_given = false;
    std::uint64_t seed = 1;
    std::string out;
    std::string method = "dyned";
    std::string measure = "df";
    long long warmup = 250;
    long long report_interval = 1000;
    bool no_timing = false;
    dyned::HyperParams hp;
};

void add_common_options(CLI::App* cmd, RunOptions& opt) {
    cmd->add_option("--samples", opt.samples, "Stream length for generators (cap for CSV input)");
    cmd->add_option("--seed", opt.seed, "Random seed");
    cmd->add_option("--method", opt.method, "Learner: dyned or ht")
        ->check(CLI::IsMember({"dyned", "ht"}));
    cmd->add_option("--measure", opt.measure, "Diversity measure: df, dm, q, cp")
        ->check(CLI::IsMember({"df", "dm", "q", "cp"}));
    cmd->add_option("--warmup", opt.warmup, "Warm-up samples excluded from accuracy");
    cmd->add_option("--report-interval", opt.report_interval, "Temporal accuracy window");
    cmd->add_flag("--no-timing", opt.no_timing, "Write wall_time_s as 0 for reproducible output");
    cmd->add_option("--theta", opt.hp.theta, "Samples between selection checks");
    cmd->add_option("--lambda0", opt.hp.lambda0, "Initial accuracy/diversity trade-off");
    cmd->add_option("--dlambda", opt.hp.delta_lambda, "Lambda step size");
    cmd->add_option("--win-s", opt.hp.win_s, "Sliding window size");
    cmd->add_option("--init-c", opt.hp.init_c, "Initial component count");
    cmd->add_option("--init-s", opt.hp.init_s, "Initial training samples per component");
    cmd->add_option("--pool-s", opt.hp.pool_s, "Maximum component pool size");
    cmd->add_option("--add-s", opt.hp.add_s, "Components spawned per detected drift");
    cmd->add_option("--cls-s", opt.hp.cls_s, "Components taken from each cluster");
    cmd->add_option("--slc-s", opt.hp.slc_s, "Active components for classification");
    cmd->add_option("--error-s", opt.hp.error_s, "Prediction list size for similarity");
    cmd->add_option("--grace", opt.hp.tree.grace_period, "Tree grace period");
    cmd->add_option("--split-confidence", opt.hp.tree.split_confidence, "Tree split confidence");
    cmd->add_option("--tie-threshold", opt.hp.tree.tie_threshold, "Tree tie threshold");
    cmd->add_option("--max-depth", opt.hp.tree.max_depth, "Tree depth cap (0 = none)");
    cmd->add_option("--adwin-delta", opt.hp.adwin_delta, "ADWIN confidence");
    cmd->set_config("--config", "", "Config file with key = value lines mirroring these flags");
}

std::unique_ptr<dyned::StreamSource> open_source(const RunOptions& opt) {
    if (!opt.dataset_csv.empty()) {
        dyned::LabelColumn column = opt.label_col;
        if (!opt.label_name.empty()) column = opt.label_name;
        auto source = dyned::csv_open(opt.dataset_csv, column, std::nullopt, opt.header);
        if (opt.samples_given)
            return std::make_unique<dyned::LimitedSource>(std::move(source), opt.samples);
        return source;
    }
    return dyned::make_benchmark_stream(opt.generator, opt.samples, opt.seed);
}

std::pair<dyned::ResultRow, dyned::EvalReport> run_once(const RunOptions& opt) {
    auto source = open_source(opt);
    const dyned::StreamSchema schema = source->schema();
    dyned::HyperParams hp = opt.hp;
    hp.measure = dyned::measure_from_string(opt.measure);

    std::unique_ptr<dyned::StreamModel> model;
    if (opt.method == "dyned") {
        if (opt.warmup < hp.init_s)
            throw dyned::ConfigError("warmup must be at least init_s (" +
                                     std::to_string(hp.init_s) + ")");
        model = std::make_unique<dyned::DynEdModel>(hp, schema, opt.seed);
    } else {
        model = std::make_unique<dyned::SingleTreeModel>(hp.tree, schema);
    }

    dyned::EvalReport report =
        dyned::run_prequential(*source, *model, opt.warmup, opt.report_interval);
    const std::string dataset = opt.dataset_csv.empty() ? opt.generator : opt.dataset_csv;
    dyned::ResultRow row =
        dyned::make_result_row(dataset, opt.method, opt.seed, report, !opt.no_timing);
    return {std::move(row), std::move(report)};
}

void print_summary(const dyned::ResultRow& row, const dyned::EvalReport& report) {
    std::printf("%s  method=%s seed=%llu  samples=%lld  accuracy=%.4f  drifts=%lld  time=%.2fs\n",
                row.dataset.c_str(), row.method.c_str(),
                static_cast<unsigned long long>(row.seed), row.samples,
                report.overall_accuracy, row.drifts, report.wall_time_s);
}

int cmd_run(const RunOptions& opt) {
    auto [row, report] = run_once(opt);
    print_summary(row, report);
    if (!opt.out.empty()) {
        dyned::write_results_csv(opt.out, {row});
        dyned::write_temporal_csv(dyned::temporal_path(opt.out), report);
    }
    return 0;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

int cmd_bench(const RunOptions& base, const std::string& generators, const std::string& seeds,
              const std::string& methods, const std::string& out, int workers) {
    const auto generator_list = split_list(generators);
    const auto seed_list = split_list(seeds);
    auto method_list = split_list(methods);
    if (method_list.empty()) method_list = {"dyned"};
    if (generator_list.empty()) throw dyned::ConfigError("bench: no generators given");
    if (seed_list.empty()) throw dyned::ConfigError("bench: no seeds given");

    struct Cell {
        RunOptions opt;
    };
    std::vector<Cell> cells;
    for (const auto& generator : generator_list)
        for (const auto& seed : seed_list)
            for (const auto& method : method_list) {
                Cell cell{base};
                cell.opt.generator = generator;
                cell.opt.dataset_csv.clear();
                cell.opt.seed = std::stoull(seed);
                cell.opt.method = method;
                cells.push_back(std::move(cell));
            }

    if (workers < 1) workers = 1;
    std::vector<dyned::ResultRow> rows(cells.size());
    std::atomic<std::size_t> cursor{0};
    std::vector<std::string> errors(cells.size());
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                auto [row, report] = run_once(cells[i].opt);
                rows[i] = std::move(row);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& error : errors)
        if (!error.empty()) throw dyned::ConfigError("bench cell failed: " + error);

    dyned::write_results_csv(out, rows);
    for (const auto& row : rows)
        std::printf("%-20s %-6s seed=%-4llu accuracy=%.4f\n", row.dataset.c_str(),
                    row.method.c_str(), static_cast<unsigned long long>(row.seed), row.accuracy);
    std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int cmd_stats(const std::string& in_path, double alpha, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw dyned::ConfigError("stats: cannot open '" + in_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw dyned::ConfigError("stats: empty results file");
    const auto header = dyned::detail::split_csv_line(line);
    int dataset_col = -1, method_col = -1, accuracy_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "dataset") dataset_col = static_cast<int>(c);
        if (header[c] == "method") method_col = static_cast<int>(c);
        if (header[c] == "accuracy") accuracy_col = static_cast<int>(c);
    }
    if (dataset_col < 0 || method_col < 0 || accuracy_col < 0)
        throw dyned::ConfigError("stats: results file needs dataset, method and accuracy columns");

    std::vector<std::string> datasets, methods;
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> cells;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto row = dyned::detail::split_csv_line(line);
        if (static_cast<int>(row.size()) <= std::max({dataset_col, method_col, accuracy_col}))
            throw dyned::ParseError("stats: line " + std::to_string(line_no) + ": too few columns");
        const std::string& dataset = row[static_cast<std::size_t>(dataset_col)];
        const std::string& method = row[static_cast<std::size_t>(method_col)];
        const double accuracy =
            dyned::detail::parse_feature(row[static_cast<std::size_t>(accuracy_col)], line_no);
        if (std::find(datasets.begin(), datasets.end(), dataset) == datasets.end())
            datasets.push_back(dataset);
        if (std::find(methods.begin(), methods.end(), method) == methods.end())
            methods.push_back(method);
        auto& cell = cells[{dataset, method}];
        cell.first += accuracy;
        cell.second += 1;
    }

    // Seeds average into one accuracy per (dataset, method) cell.
    std::vector<std::vector<double>> accuracy(datasets.size(),
                                              std::vector<double>(methods.size(), 0.0));
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const auto it = cells.find({datasets[d], methods[m]});
            if (it == cells.end() || it->second.second == 0)
                throw dyned::ConfigError("stats: missing entry for dataset '" + datasets[d] +
                                         "', method '" + methods[m] + "'");
            accuracy[d][m] = it->second.first / it->second.second;
        }

    const dyned::RankTable table = dyned::rank_table(datasets, methods, accuracy);
    std::fputs(dyned::format_rank_table(table).c_str(), stdout);
    if (methods.size() >= 2 && datasets.size() >= 2) {
        const dyned::RankResult ranks = dyned::friedman_nemenyi(accuracy, alpha);
        std::printf("CD = %.3f (alpha=%.2f, k=%zu, N=%zu)\n", ranks.critical_distance, alpha,
                    methods.size(), datasets.size());
    }
    if (!out_path.empty()) dyned::write_rank_table_csv(out_path, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DynED: diversity-adjusted ensemble classification over data streams"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("--generator", run_opt.generator, "Benchmark stream name");
    run->add_option("--dataset", run_opt.dataset_csv, "CSV dataset path");
    run->add_option("--label-col", run_opt.label_col, "0-based label column (default: last)");
    run->add_option("--label-name", run_opt.label_name, "Label column by header name");
    run->add_flag("--header", run_opt.header, "Skip one CSV header line");
    run->add_option("--out", run_opt.out, "Results CSV path (temporal series goes to *_temporal.csv)");
    add_common_options(run, run_opt);

    RunOptions bench_opt;
    std::string bench_generators, bench_seeds = "1", bench_methods = "dyned", bench_out;
    int bench_workers = 0;
    CLI::App* bench = app.add_subcommand("bench", "Run a matrix of generators x seeds x methods");
    bench->add_option("--generators", bench_generators, "Comma-separated benchmark stream names")
        ->required();
    bench->add_option("--seeds", bench_seeds, "Comma-separated seeds");
    bench->add_option("--methods", bench_methods, "Comma-separated methods (dyned, ht)");
    bench->add_option("--out", bench_out, "Aggregate results CSV path")->required();
    bench->add_option("--workers", bench_workers, "Parallel worker count (default: DYNED_WORKERS or 1)");
    add_common_options(bench, bench_opt);

    std::string stats_in, stats_out;
    double stats_alpha = 0.05;
    CLI::App* stats = app.add_subcommand("stats", "Rank a results CSV (Friedman/Nemenyi)");
    stats->add_option("--in", stats_in, "Results CSV (dataset,method,...,accuracy columns)")
        ->required();
    stats->add_option("--alpha", stats_alpha, "Significance level (0.05)");
    stats->add_option("--out", stats_out, "Write the rank table as CSV");

    try {
        app.parse(argc, argv);
        run_opt.samples_given = run->count("--samples") > 0;
        if (*run) {
            if (run_opt.generator.empty() == run_opt.dataset_csv.empty())
                throw dyned::ConfigError("run: give exactly one of --generator or --dataset");
            return cmd_run(run_opt);
        }
        if (*bench) {
            if (bench_workers == 0) {
                const char* env = std::getenv("DYNED_WORKERS");
                bench_workers = env ? std::atoi(env) : 1;
            }
            return cmd_bench(bench_opt, bench_generators, bench_seeds, bench_methods, bench_out,
                             bench_workers);
        }
        return cmd_stats(stats_in, stats_alpha, stats_out);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const dyned::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const dyned::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
