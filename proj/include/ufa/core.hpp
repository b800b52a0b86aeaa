#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ufa {

/// One cell of a variable column: a finite real, or missing.
using Cell = std::optional<double>;

/// A named continuous variable. Missing cells stay in place so that the row
/// remains usable for every other variable.
class VariableColumn {
public:
    VariableColumn() = default;
    VariableColumn(std::string name, std::vector<Cell> cells);

    const std::string& name() const { return name_; }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    const Cell& operator[](std::size_t row) const { return cells_[row]; }

    std::size_t n_present() const;
    /// Present values in row order.
    std::vector<double> present_values() const;

private:
    std::string name_;
    std::vector<Cell> cells_;
};

/// Labels in {0, 1}.
class BinaryTarget {
public:
    BinaryTarget() = default;
    explicit BinaryTarget(std::vector<std::uint8_t> labels);

    const std::vector<std::uint8_t>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    std::uint8_t operator[](std::size_t row) const { return labels_[row]; }
    std::size_t count_positive() const;

    BinaryTarget flipped() const;

private:
    std::vector<std::uint8_t> labels_;
};

/// Column-oriented table of continuous variables plus a binary target.
///
/// A dataset loaded for scoring only may be unlabeled (`is_labeled()` false);
/// every fitting routine requires a labeled one.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<VariableColumn> variables, BinaryTarget target,
            std::string target_name = "target");
    /// Unlabeled table.
    Dataset(std::vector<VariableColumn> variables, std::size_t n_rows);

    const std::vector<VariableColumn>& variables() const { return variables_; }
    const BinaryTarget& target() const { return target_; }
    const std::string& target_name() const { return target_name_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_variables() const { return variables_.size(); }
    bool is_labeled() const { return labeled_; }

    /// Index of the named variable, if present.
    std::optional<std::size_t> find(std::string_view name) const;
    const VariableColumn& variable(std::string_view name) const;

    /// New dataset holding the given rows (repeats allowed) in the given order.
    Dataset select_rows(std::span<const std::size_t> rows) const;
    Dataset with_target(BinaryTarget target) const;
    Dataset with_variables(std::vector<VariableColumn> variables) const;

    friend bool operator==(const Dataset&, const Dataset&);

private:
    void validate() const;

    std::vector<VariableColumn> variables_;
    BinaryTarget target_;
    std::string target_name_ = "target";
    std::size_t n_rows_ = 0;
    bool labeled_ = false;
};

bool operator==(const VariableColumn& a, const VariableColumn& b);
bool operator==(const BinaryTarget& a, const BinaryTarget& b);

const std::vector<std::string>& default_missing_tokens();

struct CsvOptions {
    /// Empty means "load unlabeled".
    std::string target_column;
    std::vector<std::string> missing_tokens = default_missing_tokens();
};

Dataset load_csv(const std::string& path, const CsvOptions& options);
Dataset parse_csv(std::string_view text, const CsvOptions& options);

/// Writes variables in order followed by the target column (when labeled).
/// Missing cells are written as empty fields; reals use the shortest
/// representation that round-trips.
void write_csv(const Dataset& data, const std::string& path);
std::string to_csv(const Dataset& data);

/// Shortest round-trip decimal rendering of a double.
std::string format_real(double value);

/// Linear-interpolation quantile (closest-rank interpolation, "type 7") of an
/// ascending-sorted, non-empty sample.
double quantile_sorted(std::span<const double> sorted, double p);

struct ColumnStats {
    double min = 0;
    double max = 0;
    double median = 0;
    double p25 = 0;
    double p75 = 0;
    std::size_t n_present = 0;
};

/// Order statistics over present cells. Throws EmptyColumn.
ColumnStats column_stats(const VariableColumn& col);

/// Unbiased sample variance of present cells (0 with fewer than two).
double sample_variance(std::span<const double> values);

}  // namespace ufa
