#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ufa {

/// Base for every error raised by the library. Callers that only care about
/// "something went wrong" catch this; the subclasses carry the specific kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileUnreadable : public Error {
public:
    explicit FileUnreadable(const std::string& path)
        : Error("cannot read file: " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class FileUnwritable : public Error {
public:
    explicit FileUnwritable(const std::string& path)
        : Error("cannot write file: " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class MissingTargetColumn : public Error {
public:
    explicit MissingTargetColumn(const std::string& column)
        : Error("target column not found in header: " + column) {}
};

/// A target cell that is not exactly 0 or 1. `row` is 1-based over data rows.
class NonBinaryTarget : public Error {
public:
    NonBinaryTarget(std::size_t row, const std::string& value)
        : Error("non-binary target value '" + value + "' at data row " + std::to_string(row)),
          row_(row), value_(value) {}
    std::size_t row() const { return row_; }
    const std::string& value() const { return value_; }

private:
    std::size_t row_;
    std::string value_;
};

class UnparseableCell : public Error {
public:
    UnparseableCell(std::size_t row, const std::string& column, const std::string& value)
        : Error("cannot parse '" + value + "' as a real in column '" + column + "' at data row " +
                std::to_string(row)),
          row_(row), column_(column) {}
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class MalformedCsv : public Error {
public:
    using Error::Error;
};

class EmptyColumn : public Error {
public:
    explicit EmptyColumn(const std::string& column)
        : Error("column has no present values: " + column) {}
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& variable)
        : Error("unknown variable: " + variable), variable_(variable) {}
    const std::string& variable() const { return variable_; }

private:
    std::string variable_;
};

class DegenerateTarget : public Error {
public:
    using Error::Error;
};

class TooFewRows : public Error {
public:
    using Error::Error;
};

class EmptyDistribution : public Error {
public:
    EmptyDistribution() : Error("bootstrap distribution has no cuts") {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace ufa
