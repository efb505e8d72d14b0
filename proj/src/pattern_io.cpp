#include "mrl/pattern_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mrl/errors.hpp"

namespace mrl {
namespace {

[[noreturn]] void fail_at(const std::string& src, int line, int col,
                          const std::string& what) {
  throw IoError(src + ":" + std::to_string(line) + ":" + std::to_string(col) +
                ": " + what);
}

PatternGrid parse_ascii(const std::string& text, const std::string& src,
                        double pitch_nm) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<double> row;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      const char ch = raw[c];
      if (ch == '0') row.push_back(0.0);
      else if (ch == '1') row.push_back(1.0);
      else if (ch == ' ' || ch == '\t' || ch == '\r') continue;
      else
        fail_at(src, line_no, static_cast<int>(c) + 1,
                std::string("unexpected character '") + ch +
                    "' (expected '0', '1', or space)");
    }
    if (row.empty()) continue;  // blank line
    if (!rows.empty() && row.size() != rows.front().size())
      fail_at(src, line_no, 1,
              "row has " + std::to_string(row.size()) + " columns, expected " +
                  std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(src + ": pattern file has no rows");

  PatternGrid g;
  g.width = static_cast<int>(rows.front().size());
  g.height = static_cast<int>(rows.size());
  g.pitch_nm = pitch_nm;
  g.values.reserve(std::size_t(g.width) * g.height);
  for (const auto& row : rows)
    g.values.insert(g.values.end(), row.begin(), row.end());
  validate(g);
  return g;
}

// Minimal PGM P2 tokenizer tracking line numbers; '#' comments allowed
// anywhere whitespace is.
struct PgmLexer {
  const std::string& text;
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;

  std::string next_token() {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= text.size())
      fail_at(src, line, 1, "unexpected end of PGM data");
    const std::size_t start = pos;
    while (pos < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '#')
      ++pos;
    return text.substr(start, pos - start);
  }

  long next_int(const char* what) {
    const int at_line = line;
    const std::string tok = next_token();
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      fail_at(src, at_line, 1,
              std::string("expected ") + what + ", got '" + tok + "'");
    return v;
  }
};

PatternGrid parse_pgm(const std::string& text, const std::string& src,
                      double pitch_nm) {
  PgmLexer lex{text, src};
  const std::string magic = lex.next_token();
  if (magic != "P2") fail_at(src, 1, 1, "expected PGM magic 'P2'");
  const long width = lex.next_int("width");
  const long height = lex.next_int("height");
  const long maxval = lex.next_int("maxval");
  if (width < 1 || height < 1)
    throw IoError(src + ": PGM dimensions must be positive");
  if (maxval < 1 || maxval > 65535)
    throw IoError(src + ": PGM maxval must be in [1, 65535]");

  PatternGrid g;
  g.width = static_cast<int>(width);
  g.height = static_cast<int>(height);
  g.pitch_nm = pitch_nm;
  g.values.resize(std::size_t(width) * height);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const int at_line = lex.line;
    const long v = lex.next_int("pixel value");
    if (v < 0 || v > maxval)
      fail_at(src, at_line, 1,
              "pixel value " + std::to_string(v) + " outside [0, " +
                  std::to_string(maxval) + "]");
    g.values[k] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  validate(g);
  return g;
}

}  // namespace

PatternGrid parse_pattern_text(const std::string& text,
                               const std::string& source_name,
                               double pitch_nm) {
  if (!(pitch_nm > 0.0)) throw ConfigError("pattern pitch must be positive");
  // PGM files start with "P2" (possibly after whitespace); anything else is
  // treated as an ASCII grid.
  std::size_t k = 0;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])))
    ++k;
  if (k + 1 < text.size() && text[k] == 'P' && text[k + 1] == '2')
    return parse_pgm(text, source_name, pitch_nm);
  return parse_ascii(text, source_name, pitch_nm);
}

PatternGrid load_pattern(const std::string& path, double pitch_nm) {
  return parse_pattern_text(read_text_file(path), path, pitch_nm);
}

void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<double>& rows_top_first) {
  if (width < 1 || height < 1 ||
      rows_top_first.size() != std::size_t(width) * height)
    throw IoError("write_pgm16: dimension mismatch for " + path);
  double peak = 0.0;
  for (double v : rows_top_first) peak = std::max(peak, v);

  std::ostringstream out;
  out << "P2\n" << width << " " << height << "\n65535\n";
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const double v = rows_top_first[std::size_t(j) * width + i];
      const long q =
          peak > 0.0 ? std::lround(std::max(0.0, v) / peak * 65535.0) : 0;
      out << q << (i + 1 == width ? "\n" : " ");
    }
  }
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading file: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing file: " + path);
}

}  // namespace mrl
