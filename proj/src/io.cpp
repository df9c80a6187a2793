#include "piml/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace piml {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  std::string s(token);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("not a number: '" + s + "'");
  // ERANGE covers both overflow and subnormal underflow; only the former
  // loses the value (subnormals round-trip fine through format_double).
  if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL))
    throw std::runtime_error("not a number: '" + s + "'");
  return v;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("rename failed: " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error("csv: missing column '" + std::string(name) + "'");
}

static std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::size_t start = 0;
  bool first = true;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    std::string_view line;
    if (pos == std::string::npos) {
      line = std::string_view(text).substr(start);
      start = text.size() + 1;
    } else {
      line = std::string_view(text).substr(start, pos - start);
      start = pos + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first) {
      table.header = split_row(line);
      first = false;
    } else {
      auto row = split_row(line);
      if (row.size() != table.header.size())
        throw std::runtime_error("csv: ragged row '" + std::string(line) + "'");
      table.rows.push_back(std::move(row));
    }
  }
  if (first) throw std::runtime_error("csv: empty input");
  return table;
}

}  // namespace piml
