#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

/// Studentized-range critical values for the Nemenyi test at alpha = 0.05
/// (q_alpha already divided by sqrt 2), indexed by the number of methods k.
inline double nemenyi_q05(int k) {
    static constexpr double table[] = {
        0.0,   0.0,   1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
        3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544};
    if (k < 2 || k > 20) throw ConfigError("nemenyi: k must be in [2,20]");
    return table[k];
}

struct RankResult {
    std::vector<double> avg_ranks;  // one per method
    double critical_distance = 0.0;
};

/// Per-dataset descending-accuracy ranks (ties get the average rank),
/// averaged per method, plus the Nemenyi critical distance
/// CD = q_alpha(k) * sqrt(k (k+1) / (6 N)).
/// accuracy[dataset][method]; the matrix must be rectangular and complete.
inline RankResult friedman_nemenyi(const std::vector<std::vector<double>>& accuracy,
                                   double alpha = 0.05) {
    if (alpha != 0.05) throw ConfigError("nemenyi: only alpha = 0.05 is tabulated");
    const int n_datasets = static_cast<int>(accuracy.size());
    if (n_datasets < 2) throw ConfigError("nemenyi: need at least 2 datasets");
    const int k = static_cast<int>(accuracy.front().size());
    if (k < 2) throw ConfigError("nemenyi: need at least 2 methods");
    for (const auto& row : accuracy) {
        if (static_cast<int>(row.size()) != k)
            throw ConfigError("nemenyi: accuracy matrix is not rectangular");
        for (const double a : row)
            if (std::isnan(a)) throw ConfigError("nemenyi: missing accuracy entry");
    }

    RankResult result;
    result.avg_ranks.assign(static_cast<std::size_t>(k), 0.0);
    for (const auto& row : accuracy) {
        std::vector<int> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&row](int a, int b) { return row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(b)]; });
        // Average ranks across tied accuracies.
        int i = 0;
        while (i < k) {
            int j = i;
            while (j + 1 < k && row[static_cast<std::size_t>(order[static_cast<std::size_t>(j + 1)])] ==
                                    row[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
                ++j;
            const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (int t = i; t <= j; ++t)
                result.avg_ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] += rank;
            i = j + 1;
        }
    }
    for (double& rank : result.avg_ranks) rank /= n_datasets;
    result.critical_distance =
        nemenyi_q05(k) * std::sqrt(static_cast<double>(k) * (k + 1) / (6.0 * n_datasets));
    return result;
}

/// Accuracy table plus average-mean and average-rank rows, as a formatted
/// text block and as CSV.
struct RankTable {
    std::vector<std::string> methods;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> accuracy;  // [dataset][method]
    std::vector<double> mean_accuracy;          // per method
    std::vector<double> avg_ranks;              // per method
    double critical_distance = 0.0;
};

inline RankTable rank_table(const std::vector<std::string>& datasets,
                            const std::vector<std::string>& methods,
                            const std::vector<std::vector<double>>& accuracy) {
    RankTable table;
    table.methods = methods;
    table.datasets = datasets;
    table.accuracy = accuracy;
    const std::size_t k = methods.size();
    table.mean_accuracy.assign(k, 0.0);
    for (const auto& row : accuracy) {
        if (row.size() != k) throw ConfigError("rank table: results are not rectangular");
        for (std::size_t m = 0; m < k; ++m) table.mean_accuracy[m] += row[m];
    }
    if (!accuracy.empty())
        for (double& mean : table.mean_accuracy) mean /= static_cast<double>(accuracy.size());
    if (k >= 2 && accuracy.size() >= 2) {
        const RankResult ranks = friedman_nemenyi(accuracy);
        table.avg_ranks = ranks.avg_ranks;
        table.critical_distance = ranks.critical_distance;
    } else {
        table.avg_ranks.assign(k, 1.0);
    }
    return table;
}

inline std::string format_rank_table(const RankTable& table) {
    std::string out;
    char buffer[64];
    auto cell = [&buffer](double value) {
        std::snprintf(buffer, sizeof buffer, "%10.4f", value);
        return std::string(buffer);
    };
    std::size_t name_width = 12;
    for (const auto& d : table.datasets) name_width = std::max(name_width, d.size() + 2);
    auto pad = [name_width](const std::string& s) {
        std::string padded = s;
        padded.resize(name_width, ' ');
        return padded;
    };
    out += pad("dataset");
    for (const auto& m : table.methods) {
        std::snprintf(buffer, sizeof buffer, "%10s", m.c_str());
        out += buffer;
    }
    out += '\n';
    for (std::size_t d = 0; d < table.datasets.size(); ++d) {
        out += pad(table.datasets[d]);
        for (std::size_t m = 0; m < table.methods.size(); ++m) out += cell(table.accuracy[d][m]);
        out += '\n';
    }
    out += pad("avg_mean");
    for (const double mean : table.mean_accuracy) out += cell(mean);
    out += '\n';
    out += pad("avg_rank");
    for (const double rank : table.avg_ranks) out += cell(rank);
    out += '\n';
    return out;
}

inline void write_rank_table_csv(const std::string& path, const RankTable& table) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    char buffer[64];
    out << "dataset";
    for (const auto& m : table.methods) out << ',' << m;
    out << '\n';
    auto write_row = [&](const std::string& name, const std::vector<double>& values) {
        out << name;
        for (const double v : values) {
            std::snprintf(buffer, sizeof buffer, "%.6f", v);
            out << ',' << buffer;
        }
        out << '\n';
    };
    for (std::size_t d = 0; d < table.datasets.size(); ++d)
        write_row(table.datasets[d], table.accuracy[d]);
    write_row("avg_mean", table.mean_accuracy);
    write_row("avg_rank", table.avg_ranks);
}

}  // namespace dyned
