#include "ufa/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "ufa/errors.hpp"

namespace ufa {

// ---------------------------------------------------------------------------
// VariableColumn / BinaryTarget
// ---------------------------------------------------------------------------

VariableColumn::VariableColumn(std::string name, std::vector<Cell> cells)
    : name_(std::move(name)), cells_(std::move(cells)) {
    if (name_.empty()) throw InvalidArgument("variable name must be non-empty");
    for (const auto& c : cells_) {
        if (c && !std::isfinite(*c))
            throw InvalidArgument("non-finite present value in column " + name_);
    }
}

std::size_t VariableColumn::n_present() const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return c.has_value(); }));
}

std::vector<double> VariableColumn::present_values() const {
    std::vector<double> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_)
        if (c) out.push_back(*c);
    return out;
}

bool operator==(const VariableColumn& a, const VariableColumn& b) {
    return a.name() == b.name() && a.cells() == b.cells();
}

BinaryTarget::BinaryTarget(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] > 1) throw NonBinaryTarget(i + 1, std::to_string(labels_[i]));
    }
}

std::size_t BinaryTarget::count_positive() const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

BinaryTarget BinaryTarget::flipped() const {
    std::vector<std::uint8_t> out(labels_.size());
    std::transform(labels_.begin(), labels_.end(), out.begin(),
                   [](std::uint8_t y) { return static_cast<std::uint8_t>(1 - y); });
    return BinaryTarget(std::move(out));
}

bool operator==(const BinaryTarget& a, const BinaryTarget& b) { return a.labels() == b.labels(); }

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

Dataset::Dataset(std::vector<VariableColumn> variables, BinaryTarget target,
                 std::string target_name)
    : variables_(std::move(variables)),
      target_(std::move(target)),
      target_name_(std::move(target_name)),
      n_rows_(target_.size()),
      labeled_(true) {
    validate();
}

Dataset::Dataset(std::vector<VariableColumn> variables, std::size_t n_rows)
    : variables_(std::move(variables)), n_rows_(n_rows), labeled_(false) {
    validate();
}

void Dataset::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& v : variables_) {
        if (v.size() != n_rows_)
            throw InvalidArgument("column " + v.name() + " has " + std::to_string(v.size()) +
                                  " cells, expected " + std::to_string(n_rows_));
        if (!seen.insert(v.name()).second)
            throw InvalidArgument("duplicate variable name: " + v.name());
    }
    if (labeled_ && seen.contains(target_name_))
        throw InvalidArgument("variable name collides with target: " + target_name_);
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name() == name) return i;
    return std::nullopt;
}

const VariableColumn& Dataset::variable(std::string_view name) const {
    auto idx = find(name);
    if (!idx) throw UnknownVariable(std::string(name));
    return variables_[*idx];
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<VariableColumn> cols;
    cols.reserve(variables_.size());
    for (const auto& v : variables_) {
        std::vector<Cell> cells;
        cells.reserve(rows.size());
        for (auto r : rows) cells.push_back(v[r]);
        cols.emplace_back(v.name(), std::move(cells));
    }
    if (!labeled_) return Dataset(std::move(cols), rows.size());
    std::vector<std::uint8_t> labels;
    labels.reserve(rows.size());
    for (auto r : rows) labels.push_back(target_[r]);
    return Dataset(std::move(cols), BinaryTarget(std::move(labels)), target_name_);
}

Dataset Dataset::with_target(BinaryTarget target) const {
    return Dataset(variables_, std::move(target), target_name_);
}

Dataset Dataset::with_variables(std::vector<VariableColumn> variables) const {
    if (!labeled_) return Dataset(std::move(variables), n_rows_);
    return Dataset(std::move(variables), target_, target_name_);
}

bool operator==(const Dataset& a, const Dataset& b) {
    return a.labeled_ == b.labeled_ && a.n_rows_ == b.n_rows_ && a.variables_ == b.variables_ &&
           a.target_ == b.target_ && (!a.labeled_ || a.target_name_ == b.target_name_);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

const std::vector<std::string>& default_missing_tokens() {
    static const std::vector<std::string> tokens{"", "NA", "NaN"};
    return tokens;
}

namespace {

using Record = std::vector<std::string>;

// RFC-4180 records: comma separated, optional double quotes with "" escapes,
// LF or CRLF terminators. Blank lines are skipped.
std::vector<Record> split_records(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<Record> records;
    Record current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    auto end_record = [&] {
        if (!current.empty() || field_started || !field.empty()) {
            current.push_back(std::move(field));
            records.push_back(std::move(current));
        }
        current.clear();
        field.clear();
        field_started = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                current.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(ch);
                field_started = true;
        }
    }
    if (in_quotes) throw MalformedCsv("unterminated quoted field");
    end_record();
    return records;
}

std::string_view trim(std::string_view s) {
    const auto* ws = " \t";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.starts_with('+')) s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

bool needs_quoting(std::string_view s) {
    return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

std::string quote(std::string_view s) {
    if (!needs_quoting(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
    auto records = split_records(text);
    if (records.empty()) throw MalformedCsv("missing header row");
    const Record header = std::move(records.front());
    const std::size_t n_rows = records.size() - 1;

    std::optional<std::size_t> target_idx;
    if (!options.target_column.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (trim(header[j]) == options.target_column) target_idx = j;
        if (!target_idx) throw MissingTargetColumn(options.target_column);
    }

    auto is_missing = [&](std::string_view raw) {
        const auto t = trim(raw);
        return std::any_of(options.missing_tokens.begin(), options.missing_tokens.end(),
                           [&](const std::string& tok) { return t == tok || raw == tok; });
    };

    std::vector<std::vector<Cell>> cells(header.size());
    for (auto& c : cells) c.reserve(n_rows);
    std::vector<std::uint8_t> labels;
    labels.reserve(n_rows);

    for (std::size_t r = 0; r < n_rows; ++r) {
        const Record& rec = records[r + 1];
        if (rec.size() != header.size())
            throw MalformedCsv("data row " + std::to_string(r + 1) + " has " +
                               std::to_string(rec.size()) + " fields, header has " +
                               std::to_string(header.size()));
        for (std::size_t j = 0; j < rec.size(); ++j) {
            if (target_idx && j == *target_idx) {
                auto v = parse_real(rec[j]);
                if (!v || (*v != 0.0 && *v != 1.0)) throw NonBinaryTarget(r + 1, rec[j]);
                labels.push_back(static_cast<std::uint8_t>(*v));
                continue;
            }
            if (is_missing(rec[j])) {
                cells[j].emplace_back(std::nullopt);
                continue;
            }
            auto v = parse_real(rec[j]);
            if (!v) throw UnparseableCell(r + 1, header[j], rec[j]);
            cells[j].emplace_back(*v);
        }
    }

    std::vector<VariableColumn> vars;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (target_idx && j == *target_idx) continue;
        const auto name = trim(header[j]);
        if (name.empty())
            throw MalformedCsv("empty column name at position " + std::to_string(j + 1));
        vars.emplace_back(std::string(name), std::move(cells[j]));
    }
    if (!target_idx) return Dataset(std::move(vars), n_rows);
    return Dataset(std::move(vars), BinaryTarget(std::move(labels)), options.target_column);
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw FileUnreadable(path);
    return parse_csv(text, options);
}

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t j = 0; j < data.n_variables(); ++j) {
        if (j) out.push_back(',');
        out += quote(data.variables()[j].name());
    }
    if (data.is_labeled()) {
        if (data.n_variables()) out.push_back(',');
        out += quote(data.target_name());
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        for (std::size_t j = 0; j < data.n_variables(); ++j) {
            if (j) out.push_back(',');
            const auto& c = data.variables()[j][r];
            if (c) out += format_real(*c);
        }
        if (data.is_labeled()) {
            if (data.n_variables()) out.push_back(',');
            out.push_back(data.target()[r] ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileUnwritable(path);
    out << to_csv(data);
    if (!out) throw FileUnwritable(path);
}

// ---------------------------------------------------------------------------
// Order statistics
// ---------------------------------------------------------------------------

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw InvalidArgument("quantile of empty sample");
    if (p < 0.0 || p > 1.0) throw InvalidArgument("quantile probability outside [0,1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ColumnStats column_stats(const VariableColumn& col) {
    auto values = col.present_values();
    if (values.empty()) throw EmptyColumn(col.name());
    std::sort(values.begin(), values.end());
    ColumnStats s;
    s.n_present = values.size();
    s.min = values.front();
    s.max = values.back();
    s.median = quantile_sorted(values, 0.5);
    s.p25 = quantile_sorted(values, 0.25);
    s.p75 = quantile_sorted(values, 0.75);
    return s;
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size() - 1);
}

}  // namespace ufa
