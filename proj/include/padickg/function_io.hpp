#pragma once

#include "padickg/cell_function.hpp"

#include <string>
#include <string_view>

namespace padickg {

// Error with a 1-based line and column.
class FormatError : public PadicError {
 public:
  FormatError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Comma-separated literals. Bare integers that follow a p-adic literal extend its digit list,
// so a standalone integer after one must be written as rat:<n>.
PadicVector parse_literal_list(std::string_view text, int p, int precision = kDefaultPrecision);
std::string emit_literal_list(const PadicVector& v);

// One term per line: "<re> <im> ; b=<lits> ; a=<lits> ; gamma=<int>", '#' starts a comment.
CellFunction parse_function_text(std::string_view text, int p, int precision = kDefaultPrecision);
CellFunction parse_function_file(const std::string& path, int p, int precision = kDefaultPrecision);
std::string emit_function_text(const CellFunction& f);
void write_function_file(const std::string& path, const CellFunction& f);

// Whitespace-separated literals, row-major.
std::vector<PadicVector> parse_matrix_literals(std::string_view text, int p, std::size_t rows, std::size_t cols,
                                               int precision = kDefaultPrecision);

std::string format_double(double x);

}  // namespace padickg
