#include "pspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pspec {
namespace {

Json number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

bool Report::all_pass() const {
  for (const Check& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json out = Json::array();
  for (const Check& c : checks_) {
    Json block;
    block["name"] = c.name;
    block["inputs"] = c.inputs;
    block["lhs"] = number(c.lhs);
    block["rhs"] = number(c.rhs);
    block["margin"] = number(c.margin);
    block["tolerance"] = number(c.tolerance);
    block["pass"] = c.pass;
    out.push_back(std::move(block));
  }
  return out;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

std::string Table::str() const {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return s;
}

std::string Table::cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace pspec
