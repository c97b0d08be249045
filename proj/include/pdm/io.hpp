#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pdm {

// Shortest round-trip decimal form, dot separator, independent of locale.
// Non-finite values print as "nan", "inf", "-inf".
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    void add_column(std::string name, std::vector<double> values);
    void write(std::ostream& os) const;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

}  // namespace pdm
