#pragma once

#include "odl/batch.hpp"

#include <string>
#include <vector>

namespace odl {

/// A parsed numeric CSV: column names plus row-major cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal rendering (std::to_chars), locale-independent.
/// Non-finite values render as "NA".
std::string format_double(double v);

/// Strict full-string parse (std::from_chars). context is used in the error
/// message. Throws DataError on failure.
double parse_double(const std::string& text, const std::string& context);

/// Read a numeric CSV with a header row. Accepts \n and \r\n line endings;
/// blank trailing lines are ignored. Throws DataError on ragged rows or
/// non-numeric cells (with file/line context).
CsvTable read_csv(const std::string& path);

/// Interpret a table as one data batch: the column named "y" is the
/// response, every other column is a feature in file order. Returns the
/// batch plus the feature names.
BatchData table_to_batch(const CsvTable& table, const std::string& path,
                         std::vector<std::string>* feature_names);

/// Write one CSV line (no quoting; fields must not contain commas/newlines).
std::string join_csv(const std::vector<std::string>& fields);

} // namespace odl
