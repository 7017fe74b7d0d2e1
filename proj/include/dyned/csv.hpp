#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

/// Label column selector: 0-based index (-1 = last column), or name
/// (requires a header line).
using LabelColumn = std::variant<int, std::string>;

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (const char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

inline double parse_feature(const std::string& cell, std::size_t line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &consumed);
    } catch (const std::exception&) {
        throw ParseError("csv line " + std::to_string(line_no) + ": non-numeric feature '" + cell + "'");
    }
    while (consumed < cell.size() && (cell[consumed] == ' ' || cell[consumed] == '\t')) ++consumed;
    if (consumed != cell.size())
        throw ParseError("csv line " + std::to_string(line_no) + ": non-numeric feature '" + cell + "'");
    return value;
}

}  // namespace detail

/// Streams instances from a comma-separated file, one per line. Labels are
/// mapped to class indices in order of first appearance; the whole file is
/// validated up front so malformed rows fail at open time with their line
/// number.
class CsvSource : public StreamSource {
public:
    CsvSource(std::string path, LabelColumn label_column,
              std::optional<StreamSchema> schema_hint, bool has_header)
        : path_(std::move(path)), has_header_(has_header) {
        std::ifstream in(path_);
        if (!in) throw ConfigError("csv: cannot open '" + path_ + "'");

        std::string line;
        std::size_t line_no = 0;
        if (has_header_) {
            if (std::getline(in, line)) {
                ++line_no;
                header_ = detail::split_csv_line(line);
            }
        }
        label_index_ = resolve_label_column(label_column);

        std::size_t n_columns = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
            const auto cells = detail::split_csv_line(line);
            if (n_rows_ == 0) {
                n_columns = cells.size();
                if (label_index_ < 0) label_index_ = static_cast<int>(n_columns) - 1;
                if (label_index_ >= static_cast<int>(n_columns))
                    throw ConfigError("csv: label column " + std::to_string(label_index_) +
                                      " out of range for " + std::to_string(n_columns) + " columns");
            } else if (cells.size() != n_columns) {
                throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(n_columns) + " columns, got " +
                                 std::to_string(cells.size()));
            }
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (static_cast<int>(c) == label_index_) continue;
                detail::parse_feature(cells[c], line_no);
            }
            const std::string& label = cells[static_cast<std::size_t>(label_index_)];
            if (!label_map_.contains(label)) {
                const int index = static_cast<int>(label_map_.size());
                label_map_.emplace(label, index);
            }
            ++n_rows_;
        }

        if (n_rows_ > 0) {
            schema_.n_features = static_cast<int>(n_columns) - 1;
            schema_.n_classes = static_cast<int>(label_map_.size());
        }
        if (schema_hint) {
            if (n_rows_ > 0 && schema_hint->n_features != schema_.n_features)
                throw ConfigError("csv: schema hint expects " + std::to_string(schema_hint->n_features) +
                                  " features, file has " + std::to_string(schema_.n_features));
            if (n_rows_ > 0 && schema_hint->n_classes < schema_.n_classes)
                throw ConfigError("csv: schema hint allows " + std::to_string(schema_hint->n_classes) +
                                  " classes, file has " + std::to_string(schema_.n_classes));
            schema_ = *schema_hint;
        }

        reader_.open(path_);
        if (has_header_) std::getline(reader_, line), read_line_no_ = 1;
    }

    std::optional<Instance> next() override {
        if (emitted_ >= n_rows_) return std::nullopt;
        std::string line;
        if (!std::getline(reader_, line)) return std::nullopt;
        ++read_line_no_;
        const auto cells = detail::split_csv_line(line);
        Instance inst;
        inst.features.reserve(cells.size() - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (static_cast<int>(c) == label_index_) continue;
            inst.features.push_back(detail::parse_feature(cells[c], read_line_no_));
        }
        inst.label = label_map_.at(cells[static_cast<std::size_t>(label_index_)]);
        ++emitted_;
        return inst;
    }

    StreamSchema schema() const override { return schema_; }

    std::size_t row_count() const { return n_rows_; }

private:
    int resolve_label_column(const LabelColumn& column) const {
        if (std::holds_alternative<int>(column)) {
            const int index = std::get<int>(column);
            if (index < -1) throw ConfigError("csv: label column index must be >= -1");
            return index;  // -1 resolves to the last column at the first data row
        }
        const std::string& name = std::get<std::string>(column);
        if (!has_header_) throw ConfigError("csv: label column by name requires a header line");
        for (std::size_t c = 0; c < header_.size(); ++c)
            if (header_[c] == name) return static_cast<int>(c);
        throw ConfigError("csv: unknown label column '" + name + "'");
    }

    std::string path_;
    bool has_header_;
    std::vector<std::string> header_;
    int label_index_ = 0;
    std::map<std::string, int> label_map_;
    std::size_t n_rows_ = 0;
    StreamSchema schema_{0, 2};

    std::ifstream reader_;
    std::size_t read_line_no_ = 0;
    std::size_t emitted_ = 0;
};

inline std::unique_ptr<StreamSource> csv_open(const std::string& path, LabelColumn label_column,
                                              std::optional<StreamSchema> schema_hint = std::nullopt,
                                              bool has_header = false) {
    return std::make_unique<CsvSource>(path, std::move(label_column), schema_hint, has_header);
}

}  // namespace dyned
