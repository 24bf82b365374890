#pragma once

#include <string>
#include <string_view>

#include "types.hpp"

namespace dppriv {

struct CsvOptions {
    bool has_header = false;
    // Remove records that duplicate an earlier record exactly.
    bool drop_duplicate_records = false;
};

// Rectangular numeric CSV.  File rows are records and file columns are
// attributes; the result follows the internal convention (records are
// matrix columns).  Parse failures report the 1-based row and column.
DataMatrix read_csv(const std::string& path, const CsvOptions& options = {});
DataMatrix read_csv_text(std::string_view text, const CsvOptions& options = {});

// Records back out as rows, full double precision.
void write_csv(const DataMatrix& data, const std::string& path);
std::string to_csv_text(const DataMatrix& data);

} // namespace dppriv
