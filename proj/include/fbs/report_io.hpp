#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fbs {

using Json = nlohmann::ordered_json;

// %.17g: fixed 17-significant-digit float formatting, the serialization
// contract for every report. Deterministic and round-trip exact.
std::string format_double(double v);

// Serializes a JSON tree with format_double applied to every float, 2-space
// indentation and insertion-ordered keys; byte-deterministic.
std::string dump_json(const Json& j);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// CSV with pre-formatted cells; numeric helpers apply format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string sha256_hex(const std::string& bytes);

}  // namespace fbs
