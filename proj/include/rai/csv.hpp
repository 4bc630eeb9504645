#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "rai/error.hpp"

namespace rai {

// Minimal RFC 4180 CSV: comma separator, double-quote escaping, CRLF or LF.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& context) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool cell_started = false;

  auto end_cell = [&]() {
    row.push_back(cell);
    cell.clear();
    cell_started = false;
  };
  auto end_row = [&]() {
    end_cell();
    // Skip rows that are entirely empty (e.g. trailing newline).
    if (row.size() > 1 || !row[0].empty()) rows.push_back(row);
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"' && !cell_started) {
      in_quotes = true;
      cell_started = true;
    } else if (ch == ',') {
      end_cell();
    } else if (ch == '\n') {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      end_row();
    } else {
      cell += ch;
      cell_started = true;
    }
  }
  if (in_quotes) throw InputError(context + ": unterminated quoted CSV field");
  if (!cell.empty() && cell.back() == '\r') cell.pop_back();
  if (!cell.empty() || !row.empty()) end_row();
  return rows;
}

inline std::vector<std::vector<std::string>> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(content, path);
}

inline std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace rai
