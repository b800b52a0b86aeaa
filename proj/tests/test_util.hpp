#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ufa/core.hpp"

namespace ufa::test {

inline std::string data_path(const std::string& name) {
    return (std::filesystem::path(UFA_DATA_DIR) / name).string();
}

inline Dataset load_iris() {
    return load_csv(data_path("iris_versicolor_virginica.csv"), {"is_versicolor", default_missing_tokens()});
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("ufa_" + tag + "_" + std::to_string(gen() % 1000000000));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline VariableColumn column(const std::string& name, std::initializer_list<std::optional<double>> cells) {
    return VariableColumn(name, std::vector<Cell>(cells));
}

inline VariableColumn column(const std::string& name, const std::vector<double>& values) {
    return VariableColumn(name, std::vector<Cell>(values.begin(), values.end()));
}

inline BinaryTarget target(std::initializer_list<int> labels) {
    std::vector<std::uint8_t> y;
    for (int v : labels) y.push_back(static_cast<std::uint8_t>(v));
    return BinaryTarget(std::move(y));
}

}  // namespace ufa::test
