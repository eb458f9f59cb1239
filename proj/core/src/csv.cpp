#include "agreekit/csv.hpp"

#include <istream>
#include <ostream>

#include "agreekit/errors.hpp"

namespace agreekit::csv {

Reader::Reader(std::istream& in) : in_(in) {}

int Reader::get() {
  const int c = in_.get();
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else if (c != std::char_traits<char>::eof()) {
    ++column_;
  }
  return c;
}

int Reader::peek() { return in_.peek(); }

bool Reader::next(Record& record) {
  constexpr int eof = std::char_traits<char>::eof();
  record.fields.clear();

  // skip blank lines
  while (peek() == '\n' || peek() == '\r') get();
  if (peek() == eof) return false;

  record.line = line_;
  Field field;
  field.column = column_;
  bool quoted = false;
  bool after_quote = false;

  for (;;) {
    const std::size_t line = line_;
    const std::size_t column = column_;
    const int c = get();

    if (quoted) {
      if (c == eof) throw ParseError("unterminated quoted field", line, column);
      if (c == '"') {
        if (peek() == '"') {
          get();
          field.text.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        field.text.push_back(static_cast<char>(c));
      }
      continue;
    }

    if (c == ',' ) {
      record.fields.push_back(std::move(field));
      field = Field{};
      field.column = column_;
      after_quote = false;
      continue;
    }
    if (c == '\r' && peek() == '\n') continue;
    if (c == '\n' || c == eof) {
      record.fields.push_back(std::move(field));
      return true;
    }
    if (after_quote) throw ParseError("unexpected character after closing quote", line, column);
    if (c == '"') {
      if (!field.text.empty()) throw ParseError("quote inside unquoted field", line, column);
      quoted = true;
      continue;
    }
    field.text.push_back(static_cast<char>(c));
  }
}

std::string escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace agreekit::csv
