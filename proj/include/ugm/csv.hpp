#pragma once

// Minimal comma-separated-values reader/writer (RFC 4180 quoting, LF output).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ugm/error.hpp"

namespace ugm::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

inline std::string position(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

/// Splits `text` into records. A trailing newline does not produce an empty
/// record; blank lines are kept as single-empty-field records so callers can
/// report or skip them explicitly.
inline std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    Row row{line, {}};
    std::string field;
    bool rowDone = false;
    while (!rowDone) {
      if (i < text.size() && text[i] == '"') {
        const std::size_t openLine = line, openColumn = column;
        ++i, ++column;
        for (;;) {
          if (i >= text.size())
            throw Error(ErrorCode::ParseError, "unterminated quoted field",
                        position(openLine, openColumn));
          char c = text[i];
          if (c == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2, column += 2;
              continue;
            }
            ++i, ++column;
            break;
          }
          field += c;
          ++i;
          if (c == '\n') ++line, column = 1;
          else ++column;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw Error(ErrorCode::ParseError, "unexpected character after closing quote",
                      position(line, column));
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"')
            throw Error(ErrorCode::ParseError, "quote inside unquoted field",
                        position(line, column));
          field += text[i++];
          ++column;
        }
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i >= text.size()) {
        rowDone = true;
      } else if (text[i] == ',') {
        ++i, ++column;
      } else {
        if (text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line, column = 1;
        rowDone = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline void append_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

inline void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    append_field(out, fields[i]);
  }
  out += '\n';
}

/// Parses `text` and checks that the first record equals `header` exactly.
/// Returns the data records; every one has header.size() fields.
inline std::vector<Row> parse_table(std::string_view text, const std::vector<std::string>& header,
                                    std::string_view sheet) {
  auto rows = parse(text);
  if (rows.empty() || rows.front().fields != header) {
    std::string expected;
    append_row(expected, header);
    expected.pop_back();
    throw Error(ErrorCode::ParseError,
                std::string(sheet) + " header must be '" + expected + "'",
                position(1, 1));
  }
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    const bool blankLine = r.fields.size() == 1 && r.fields[0].empty();
    if (!blankLine && r.fields.size() != header.size())
      throw Error(ErrorCode::ParseError,
                  std::string(sheet) + " row has " + std::to_string(r.fields.size()) +
                      " fields, expected " + std::to_string(header.size()),
                  position(r.line, 1));
  }
  return rows;
}

}  // namespace ugm::csv
