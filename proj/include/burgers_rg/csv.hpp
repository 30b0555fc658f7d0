#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace burgers_rg {

/// Shortest round-trippable decimal form of a double ("%.17g").
std::string format_number(double v);

/// Minimal CSV writer with a fixed header. Cells containing commas or quotes are quoted. Output is locale independent and
/// byte-identical for identical inputs.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    void row(std::initializer_list<double> values);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace burgers_rg
