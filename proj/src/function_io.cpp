#include "padickg/function_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace padickg {

FormatError::FormatError(std::size_t line, std::size_t column, const std::string& what)
    : PadicError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

bool starts_literal(std::string_view tok) {
  return tok.starts_with("rat:") || tok.find("adic:") != std::string_view::npos;
}

bool is_bare_integer(std::string_view tok) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Located {
  std::string text;
  std::size_t offset;
};

// Splits a literal list into literal strings, grouping p-adic digit continuations.
std::vector<Located> split_literals(std::string_view text) {
  std::vector<Located> out;
  bool in_padic = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string_view raw = text.substr(pos, end - pos);
    std::string_view tok = trim(raw);
    std::size_t off = pos + static_cast<std::size_t>(tok.data() - raw.data());
    if (starts_literal(tok)) {
      out.push_back({std::string(tok), off});
      in_padic = tok.find("adic:") != std::string_view::npos;
    } else if (in_padic && is_bare_integer(tok)) {
      out.back().text += ',';
      out.back().text += tok;
    } else {
      out.push_back({std::string(tok), off});
      in_padic = false;
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

PadicVector parse_list_at(std::string_view text, int p, int precision, std::size_t line, std::size_t column) {
  PadicVector v;
  for (const auto& lit : split_literals(text)) {
    try {
      v.push_back(parse_literal(lit.text, p, precision));
    } catch (const PrimeMismatchError& e) {
      throw FormatError(line, column + lit.offset, std::string("mixed primes: ") + e.what());
    } catch (const PadicError& e) {
      throw FormatError(line, column + lit.offset, e.what());
    }
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

PadicVector parse_literal_list(std::string_view text, int p, int precision) {
  return parse_list_at(text, p, precision, 1, 1);
}

std::string emit_literal_list(const PadicVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i].is_zero() ? std::string(i == 0 ? "0" : "rat:0") : to_literal(v[i]);
  }
  return s;
}

CellFunction parse_function_text(std::string_view text, int p, int precision) {
  std::vector<CellTerm> terms;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;

    std::vector<std::pair<std::string_view, std::size_t>> fields;
    std::size_t fpos = 0;
    while (true) {
      auto semi = line.find(';', fpos);
      std::string_view raw = line.substr(fpos, semi == std::string_view::npos ? std::string_view::npos : semi - fpos);
      std::string_view f = trim(raw);
      fields.emplace_back(f, fpos + static_cast<std::size_t>(f.data() - raw.data()) + 1);
      if (semi == std::string_view::npos) break;
      fpos = semi + 1;
    }
    if (fields.size() != 4) throw FormatError(line_no, 1, "expected 4 ';'-separated fields");

    CellTerm t;
    {
      auto [f, col] = fields[0];
      std::istringstream in{std::string(f)};
      std::string re, im, extra;
      if (!(in >> re >> im) || (in >> extra)) throw FormatError(line_no, col, "expected '<re> <im>'");
      double v[2];
      const std::string* parts[2] = {&re, &im};
      for (int k = 0; k < 2; ++k) {
        auto [ptr, ec] = std::from_chars(parts[k]->data(), parts[k]->data() + parts[k]->size(), v[k]);
        if (ec != std::errc() || ptr != parts[k]->data() + parts[k]->size())
          throw FormatError(line_no, col, "invalid number '" + *parts[k] + "'");
      }
      t.coeff = {v[0], v[1]};
    }
    auto keyed = [&](std::size_t idx, std::string_view key) {
      auto [f, col] = fields[idx];
      if (!f.starts_with(key)) throw FormatError(line_no, col, "expected '" + std::string(key) + "'");
      return std::pair{f.substr(key.size()), col + key.size()};
    };
    auto [bs, bcol] = keyed(1, "b=");
    auto [as, acol] = keyed(2, "a=");
    auto [gs, gcol] = keyed(3, "gamma=");
    t.modulation = parse_list_at(bs, p, precision, line_no, bcol);
    t.center = parse_list_at(as, p, precision, line_no, acol);
    long g = 0;
    auto [ptr, ec] = std::from_chars(gs.data(), gs.data() + gs.size(), g);
    if (ec != std::errc() || ptr != gs.data() + gs.size()) throw FormatError(line_no, gcol, "invalid gamma");
    t.level = g;
    if (t.center.size() != t.modulation.size()) throw FormatError(line_no, acol, "a and b differ in dimension");
    if (dim == 0) dim = t.center.size();
    else if (dim != t.center.size()) throw FormatError(line_no, acol, "dimension differs from earlier lines");
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw FormatError(line_no, 1, "no terms");
  return CellFunction::make(p, dim, std::move(terms));
}

CellFunction parse_function_file(const std::string& path, int p, int precision) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_function_text(ss.str(), p, precision);
}

std::string emit_function_text(const CellFunction& f) {
  std::string s = "# p=" + std::to_string(f.prime()) + " n=" + std::to_string(f.dimension()) + "\n";
  for (const auto& t : f.terms()) {
    s += format_double(t.coeff.real()) + " " + format_double(t.coeff.imag());
    s += " ; b=" + emit_literal_list(t.modulation);
    s += " ; a=" + emit_literal_list(t.center);
    s += " ; gamma=" + std::to_string(t.level) + "\n";
  }
  return s;
}

void write_function_file(const std::string& path, const CellFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write function file '" + path + "'");
  out << emit_function_text(f);
}

std::vector<PadicVector> parse_matrix_literals(std::string_view text, int p, std::size_t rows, std::size_t cols,
                                               int precision) {
  std::istringstream in{std::string(text)};
  std::vector<PadicVector> m(rows, PadicVector(cols));
  std::string tok;
  std::size_t k = 0;
  while (in >> tok) {
    if (k >= rows * cols) throw FormatError(1, 1, "too many matrix entries");
    m[k / cols][k % cols] = parse_literal(tok, p, precision);
    ++k;
  }
  if (k != rows * cols) throw FormatError(1, 1, "expected " + std::to_string(rows * cols) + " matrix entries");
  return m;
}

}  // namespace padickg
