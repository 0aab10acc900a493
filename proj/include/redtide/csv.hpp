#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace redtide {

/// Minimal RFC-4180-ish CSV support: comma separator, double-quote
/// escaping, no embedded newlines inside quoted fields.
struct CsvRow {
    size_t line_number = 0;
    std::vector<std::string> fields;
};

class CsvReader {
  public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next non-empty row; nullopt at end of stream.
    std::optional<CsvRow> next();

  private:
    std::istream& in_;
    size_t line_ = 0;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace redtide
