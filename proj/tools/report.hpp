#pragma once

// Output of one CLI run: a metadata object followed by a table. CSV output
// is "# <metadata json>", a header row and the data rows, plus an optional
// "# <summary json>" trailer; JSON output is a single object.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bglab::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

enum class Format { csv, json };

class Report {
 public:
  Report(Json meta, std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  Json& summary() { return summary_; }

  void write(std::ostream& os, Format format) const;

 private:
  Json meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  Json summary_ = Json::object();
};

/// Shortest decimal representation that round-trips.
std::string format_number(double x);

}  // namespace bglab::cli
