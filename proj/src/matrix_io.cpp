#include "stpfault/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "stpfault/errors.hpp"

namespace stpfault {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      toks.push_back({line.substr(i, j - i), line_no, i + 1});
      i = j;
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::size_t to_number(const Token& t, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size()) {
    throw ParseError(std::string("expected ") + what + ", got '" + std::string(t.text) + "'", t.line, t.column);
  }
  return v;
}

ArgSpec parse_arg(const Token& t) {
  auto colon = t.text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ParseError("expected name:dim, got '" + std::string(t.text) + "'", t.line, t.column);
  }
  Token dim_tok{t.text.substr(colon + 1), t.line, t.column + colon + 1};
  auto dim = to_number(dim_tok, "argument dimension");
  if (dim == 0) throw ParseError("argument dimension must be positive", dim_tok.line, dim_tok.column);
  return {std::string(t.text.substr(0, colon)), dim};
}

}  // namespace

ArgSignature parse_signature(std::string_view text) {
  std::string normalized(text);
  for (auto& c : normalized) {
    if (c == ',') c = ' ';
  }
  auto lines = tokenize_lines(normalized);
  ArgSignature sig;
  for (const auto& line : lines) {
    for (const auto& t : line) sig.push_back(parse_arg(t));
  }
  if (sig.empty()) throw ParseError("empty argument signature", 1, 1);
  return sig;
}

LogicalMatrix parse_matrix(std::string_view text) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty matrix file", 1, 1);
  const auto& head = lines[0];
  if (head[0].text != "delta") throw ParseError("expected 'delta <rows> <cols>'", head[0].line, head[0].column);
  if (head.size() != 3) throw ParseError("expected 'delta <rows> <cols>'", head[0].line, head[0].column);
  const auto rows = to_number(head[1], "row count");
  const auto cols = to_number(head[2], "column count");
  if (rows == 0 || cols == 0) throw ParseError("matrix dimensions must be positive", head[1].line, head[1].column);

  std::vector<Index> col;
  col.reserve(cols);
  ArgSignature sig;
  std::size_t li = 1;
  for (; li < lines.size() && lines[li][0].text != "args"; ++li) {
    for (const auto& t : lines[li]) {
      auto v = to_number(t, "column index");
      if (v == 0 || v > rows) {
        throw ParseError("column index " + std::to_string(v) + " outside 1.." + std::to_string(rows), t.line,
                         t.column);
      }
      if (col.size() == cols) throw ParseError("more than " + std::to_string(cols) + " column indices", t.line, t.column);
      col.push_back(static_cast<Index>(v - 1));
    }
  }
  if (col.size() != cols) {
    const auto& last = lines[li - 1].back();
    throw ParseError("expected " + std::to_string(cols) + " column indices, found " + std::to_string(col.size()),
                     last.line, last.column);
  }
  if (li < lines.size()) {
    const auto& args_line = lines[li];
    for (std::size_t i = 1; i < args_line.size(); ++i) sig.push_back(parse_arg(args_line[i]));
    if (sig.empty()) throw ParseError("'args' needs at least one name:dim", args_line[0].line, args_line[0].column);
    if (signature_product(sig) != cols) {
      throw ParseError("args (" + format_signature(sig) + ") do not multiply to " + std::to_string(cols),
                       args_line[0].line, args_line[0].column);
    }
    if (li + 1 < lines.size()) {
      const auto& t = lines[li + 1][0];
      throw ParseError("unexpected content after args line", t.line, t.column);
    }
  }
  return LogicalMatrix(rows, std::move(col), std::move(sig));
}

std::string format_matrix(const LogicalMatrix& m) {
  std::string out = "delta " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) out += ' ';
    out += std::to_string(m[j] + 1);
  }
  out += '\n';
  if (m.has_args()) {
    out += "args";
    for (const auto& a : m.args()) out += " " + a.name + ":" + std::to_string(a.dim);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

LogicalMatrix read_matrix_file(const std::string& path) { return parse_matrix(read_text_file(path)); }

}  // namespace stpfault
