#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rcp {

// Shortest-round-trip-safe rendering (%.17g); nan/inf spelled as nan, inf, -inf.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  // Header, rows, then "# checksum fnv1a64=<16 hex digits>" over everything above it.
  std::string render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Cell helpers.
std::string cell(double x);
std::string cell(int x);
std::string cell(unsigned x);
std::string cell(long x);
std::string cell(unsigned long x);
std::string cell(long long x);
std::string cell(unsigned long long x);
std::string cell(bool x);
std::string cell(const std::string& x);
std::string cell(const char* x);

// Appends the checksum line to an already formatted body.
std::string with_checksum(const std::string& body);

// True iff the trailing checksum line matches the content above it.
bool verify_csv_checksum(const std::string& text);

// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace rcp
