#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emoarcs/core.hpp"

namespace emoarcs {

inline char delimiter_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".tsv" || ext == ".tab") ? '\t' : ',';
}

/// Record reader for delimited text. Understands RFC 4180 quoting: fields may
/// be wrapped in double quotes and then contain the delimiter, doubled quotes,
/// and embedded newlines. CRLF line endings are tolerated.
class CsvReader {
 public:
  CsvReader(std::istream& in, char delim) : in_(in), delim_(delim) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return false;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    while (true) {
      if (c == std::istream::traits_type::eof()) {
        fields.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (ch == '\n') ++line_;
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty()) {
        quoted = true;
      } else if (ch == delim_) {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(std::move(field));
        return true;
      } else {
        field.push_back(ch);
      }
      c = in_.get();
    }
  }

  /// 1-based line number where the most recent record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 1;
};

inline std::string csv_escape(std::string_view field, char delim) {
  const bool needs_quotes =
      field.find(delim) != std::string_view::npos ||
      field.find('"') != std::string_view::npos ||
      field.find('\n') != std::string_view::npos ||
      field.find('\r') != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& out, std::span<const std::string> fields, char delim) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.put(delim);
    out << csv_escape(fields[i], delim);
  }
  out.put('\n');
}

}  // namespace emoarcs
