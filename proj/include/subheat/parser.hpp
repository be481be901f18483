#ifndef SUBHEAT_PARSER_HPP
#define SUBHEAT_PARSER_HPP

#include "subheat/vector_field.hpp"

#include <stdexcept>
#include <string>

namespace subheat {

/// Parse failure with 1-based line/column of the offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Grammar (one vector field):
//   field   := poly (';' poly)*            -- n coefficients for an n-dim field
//   poly    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ['^' uint]
//   primary := rational | var | '(' poly ')' | '-' factor
//   var     := 'x' uint                    -- x1 .. xn
//   rational:= uint ['/' uint]
Polynomial parse_polynomial(const std::string& text, int nvars, int line_base = 1);
VectorField parse_vector_field(const std::string& text, int line_base = 1);

// System file: '#' comments, one `weights s1 s2 ... sn` line, then one
// vector field per line in the grammar above.
VectorFieldSystem parse_system_file(const std::string& path);
VectorFieldSystem parse_system_text(const std::string& text);

}  // namespace subheat

#endif
