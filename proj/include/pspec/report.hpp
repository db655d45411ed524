#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pspec {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// One verification block of the JSON report.
struct Check {
  std::string name;
  Json inputs = Json::object();
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::optional<double> margin;
  std::optional<double> tolerance;
  bool pass = true;
};

class Report {
 public:
  void add(Check check) { checks_.push_back(std::move(check)); }
  const std::vector<Check>& checks() const { return checks_; }
  bool all_pass() const;
  /// Top-level array of check blocks.
  Json to_json() const;

 private:
  std::vector<Check> checks_;
};

/// CSV with a header row; doubles are written with round-trip precision.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  template <typename... Ts>
  void add(const Ts&... cells) {
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    add_row(std::move(row));
  }
  void add_row(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

  static std::string cell(double v);
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace pspec
