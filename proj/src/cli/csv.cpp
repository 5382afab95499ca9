#include "rcp/cli/csv.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

#include "rcp/errors.hpp"
#include "rcp/graphical/dump.hpp"

namespace rcp {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DomainError("CsvTable: row width does not match the header");
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

std::string checksum_line(const std::string& body) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "# checksum fnv1a64=%016" PRIx64 "\n", fnv1a64(body.data(), body.size()));
  return buf;
}

}  // namespace

std::string with_checksum(const std::string& body) { return body + checksum_line(body); }

std::string CsvTable::render() const {
  std::string body = join(header_);
  for (const auto& r : rows_) body += join(r);
  return body + checksum_line(body);
}

std::string cell(double x) { return format_double(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(unsigned x) { return std::to_string(x); }
std::string cell(long x) { return std::to_string(x); }
std::string cell(unsigned long x) { return std::to_string(x); }
std::string cell(long long x) { return std::to_string(x); }
std::string cell(unsigned long long x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "1" : "0"; }
std::string cell(const std::string& x) { return x; }
std::string cell(const char* x) { return x; }

bool verify_csv_checksum(const std::string& text) {
  if (text.empty() || text.back() != '\n') return false;
  const auto pos = text.rfind('\n', text.size() - 2);
  const std::size_t start = pos == std::string::npos ? 0 : pos + 1;
  const std::string body = text.substr(0, start);
  return text.substr(start) == checksum_line(body);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace rcp
