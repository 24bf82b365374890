#include "csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace dppriv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    std::string_view trimmed = trim(cell);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) {
        std::ostringstream msg;
        msg << "csv: non-numeric cell at row " << row << ", column " << col;
        fail(errc::parse, msg.str());
    }
    return value;
}

} // namespace

DataMatrix read_csv_text(std::string_view text, const CsvOptions& options) {
    std::vector<std::vector<double>> rows;
    std::size_t line_number = 0;
    std::size_t width = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_number;

        if (trim(line).empty()) continue;
        if (options.has_header && line_number == 1) continue;

        std::vector<double> row;
        std::size_t cell_start = 0;
        std::size_t col = 0;
        while (cell_start <= line.size()) {
            std::size_t comma = line.find(',', cell_start);
            std::string_view cell = line.substr(
                cell_start, comma == std::string_view::npos ? std::string_view::npos : comma - cell_start);
            ++col;
            row.push_back(parse_cell(cell, line_number, col));
            if (comma == std::string_view::npos) break;
            cell_start = comma + 1;
        }

        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            std::ostringstream msg;
            msg << "csv: ragged row " << line_number << " (expected " << width
                << " columns, found " << row.size() << ")";
            fail(errc::parse, msg.str());
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty())
        fail(errc::parse, "csv: no data rows");

    if (options.drop_duplicate_records) {
        std::vector<std::vector<double>> unique;
        for (const auto& row : rows) {
            bool seen = false;
            for (const auto& kept : unique) {
                if (kept == row) { seen = true; break; }
            }
            if (!seen) unique.push_back(row);
        }
        rows = std::move(unique);
    }

    DataMatrix out(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = rows[r][c];
    return out;
}

DataMatrix read_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io, "csv: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return read_csv_text(buffer.str(), options);
}

std::string to_csv_text(const DataMatrix& data) {
    std::string out;
    char cell[40];
    for (Eigen::Index record = 0; record < data.cols(); ++record) {
        for (Eigen::Index attr = 0; attr < data.rows(); ++attr) {
            std::snprintf(cell, sizeof(cell), "%.17g", data(attr, record));
            if (attr > 0) out.push_back(',');
            out += cell;
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io, "csv: cannot open " + path + " for writing");
    out << to_csv_text(data);
    if (!out) fail(errc::io, "csv: write failed for " + path);
}

} // namespace dppriv
