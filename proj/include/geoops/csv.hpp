#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "geoops/core.hpp"

namespace geoops {

/// Minimal CSV support for the fixed dialect used by every emitter here:
/// comma separator, '.' decimal point, one header row, LF endings, UTF-8,
/// no quoting (field values never contain commas).

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw GeoError(ErrorCode::PARSE_ERROR, "empty CSV stream", 1);
  table.header = split_csv_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != table.header.size())
      throw GeoError(ErrorCode::PARSE_ERROR, "row width does not match header", line_no);
    table.rows.push_back(std::move(fields));
  }
  return table;
}

inline double csv_to_double(const std::string& field, std::size_t line_no = 0) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + field.size() || field.empty())
    throw GeoError(ErrorCode::PARSE_ERROR, "non-numeric CSV field '" + field + "'", line_no);
  return v;
}

}  // namespace geoops
