#pragma once
// Serialization helpers shared by the CLI and the experiment harness.
//
// Floats are written in shortest round-trip form (std::to_chars) so output
// files are bit-faithful and byte-stable across runs; files are written to
// a temporary sibling and renamed into place so partial output is never
// observable.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace piml {

// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// strtod-based parse of a full token; throws std::runtime_error with the
// offending text on failure.
double parse_double(std::string_view token);

// Write `content` to `path` atomically (temp file + rename).  Throws
// std::runtime_error on any filesystem failure.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Minimal CSV support: comma separation, no quoting (none of our formats
// need it), CRLF tolerated, header row required.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws if absent.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace piml
