#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace agreekit::csv {

struct Field {
  std::string text;
  std::size_t column = 0;  // 1-based byte column where the field starts
};

struct Record {
  std::vector<Field> fields;
  std::size_t line = 0;  // 1-based line of the record's first character
};

/// RFC 4180 reader: comma separated, double-quote escaping, CRLF or LF line
/// endings, quoted fields may span lines. Throws ParseError with the
/// line/column of the offending character.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // False at end of input. Blank lines are skipped.
  bool next(Record& record);

 private:
  int get();
  int peek();

  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace agreekit::csv
