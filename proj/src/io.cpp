#include "pdm/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pdm/error.hpp"

namespace pdm {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void CsvTable::add_column(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != columns.front().size())
        throw Error(ErrorKind::BadParameter, "CSV column '" + name + "' has mismatched length");
    header.push_back(std::move(name));
    columns.push_back(std::move(values));
}

void CsvTable::write(std::ostream& os) const {
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_double(columns[c][r]);
        os << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
    std::ostringstream os;
    table.write(os);
    write_text_file(path, os.str());
}

}  // namespace pdm
