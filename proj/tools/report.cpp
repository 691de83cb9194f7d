#include "report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bglab::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string to_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
          return csv_field(v);
        else if constexpr (std::is_same_v<T, double>)
          return format_number(v);
        else
          return std::to_string(v);
      },
      c);
}

Json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
        }
        return v;
      },
      c);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_number failed");
  return {buf, res.ptr};
}

Report::Report(Json meta, std::vector<std::string> columns)
    : meta_(std::move(meta)), columns_(std::move(columns)) {}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("Report: row width does not match columns");
  rows_.push_back(std::move(row));
}

void Report::write(std::ostream& os, Format format) const {
  if (format == Format::json) {
    Json doc;
    doc["meta"] = meta_;
    doc["columns"] = columns_;
    Json rows = Json::array();
    for (const auto& row : rows_) {
      Json r = Json::array();
      for (const auto& c : row) r.push_back(to_json(c));
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    if (!summary_.empty()) doc["summary"] = summary_;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# " << meta_.dump() << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_csv(row[i]);
    os << '\n';
  }
  if (!summary_.empty()) os << "# " << summary_.dump() << '\n';
}

}  // namespace bglab::cli
