#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace spincs {

// Output tables shared by the CSV and JSON writers. Numbers are printed with
// 12 significant digits so repeated runs are byte-identical.

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

// Rounding noise below 1e-12 in magnitude becomes an exact 0.
inline double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

inline std::string format_clean(double v) { return format_number(clean(v)); }

inline std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_number(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += "\n";
  }
  return out;
}

inline std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = t.kind;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      const auto& c = row[i];
      if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r[t.columns[i]] = std::stod(format_number(*d));
        else
          r[t.columns[i]] = nullptr;
      } else if (auto n = std::get_if<long long>(&c)) {
        r[t.columns[i]] = *n;
      } else {
        r[t.columns[i]] = std::get<std::string>(c);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace spincs
