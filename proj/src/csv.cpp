#include "swimfollow/csv.hpp"

#include <cinttypes>
#include <cstring>
#include <fstream>
#include <sstream>

namespace swimfollow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : n_cols_(header.size()), path_(path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) throw IoError("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::fputs(header[i].c_str(), f_);
        std::fputc(i + 1 == header.size() ? '\n' : ',', f_);
    }
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::close() {
    if (f_) {
        std::fclose(f_);
        f_ = nullptr;
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw IoError("csv row width mismatch: " + path_.string());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::fputs(format_double(values[i]).c_str(), f_);
        std::fputc(i + 1 == values.size() ? '\n' : ',', f_);
    }
}

void CsvWriter::row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw IoError("csv row width mismatch: " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::fputs(cells[i].c_str(), f_);
        std::fputc(i + 1 == cells.size() ? '\n' : ',', f_);
    }
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

double CsvTable::num(std::size_t row, int col) const {
    if (col < 0 || row >= rows.size() || static_cast<std::size_t>(col) >= rows[row].size())
        throw IoError("csv cell out of range");
    return std::strtod(rows[row][static_cast<std::size_t>(col)].c_str(), nullptr);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

} // namespace swimfollow
