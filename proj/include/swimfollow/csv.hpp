#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "swimfollow/errors.hpp"

namespace swimfollow {

/// Formats a double with enough digits to round-trip exactly (%.17g), so CSVs
/// written from the same run are byte-identical across re-runs.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    /// Mixed row: raw cells, caller formats numbers itself.
    void row_raw(const std::vector<std::string>& cells);
    void close();

private:
    std::FILE* f_ = nullptr;
    std::size_t n_cols_ = 0;
    std::filesystem::path path_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 if absent
    double num(std::size_t row, int col) const;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace swimfollow
