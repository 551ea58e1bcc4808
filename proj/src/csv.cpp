#include "odl/csv.hpp"

#include "odl/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace odl {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec; // 32 bytes always suffice for shortest form
    return std::string(buf, ptr);
}

double parse_double(const std::string& text, const std::string& context) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw DataError(context + ": cannot parse '" + text + "' as a number");
    }
    return v;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    CsvTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (line_no == 1) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            row[i] = parse_double(cells[i],
                                  path + ":" + std::to_string(line_no) + " column '" +
                                      table.header[i] + "'");
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        throw DataError(path + ": missing header row");
    }
    return table;
}

BatchData table_to_batch(const CsvTable& table, const std::string& path,
                         std::vector<std::string>* feature_names) {
    long y_col = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == "y") {
            if (y_col >= 0) {
                throw DataError(path + ": multiple columns named 'y'");
            }
            y_col = static_cast<long>(i);
        }
    }
    if (y_col < 0) {
        throw DataError(path + ": no response column named 'y'");
    }
    const long p = static_cast<long>(table.header.size()) - 1;
    if (p < 1) {
        throw DataError(path + ": no feature columns besides 'y'");
    }
    const long n = static_cast<long>(table.rows.size());
    if (n < 1) {
        throw DataError(path + ": no data rows");
    }

    BatchData batch;
    batch.X.resize(n, p);
    batch.y.resize(n);
    if (feature_names) feature_names->clear();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (static_cast<long>(i) != y_col && feature_names) {
            feature_names->push_back(table.header[i]);
        }
    }
    for (long row = 0; row < n; ++row) {
        const auto& cells = table.rows[static_cast<std::size_t>(row)];
        long col = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<long>(i) == y_col) {
                batch.y[row] = cells[i];
            } else {
                batch.X(row, col++) = cells[i];
            }
        }
    }
    return batch;
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += fields[i];
    }
    return out;
}

} // namespace odl
