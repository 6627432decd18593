#pragma once

#include <stdexcept>
#include <string>

#include "sessionforge/judgment.hpp"
#include "sessionforge/process.hpp"
#include "sessionforge/types.hpp"

namespace sf {

struct SourcePos {
    int line = 1;
    int col = 1;
};

struct SourceSpan {
    std::string file;
    SourcePos start, end;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, SourceSpan span);
    const SourceSpan& span() const { return span_; }
    const std::string& bare_message() const { return bare_; }

private:
    std::string bare_;
    SourceSpan span_;
};

// ASCII surface syntax.
//   types:     1 | bot | T * T | T -o T | T par T | +{l:T,...} | &{l:T,...} | !T | ?T
//   processes: 0 | new x[:T] (P | Q) | send x(y).(P | Q) | send x(y).P | recv x(y).P
//              | x << l . P | x >> {l: P, ...} | serv x(y).P | fwd x y | close x
//              | wait x . P | P | Q
//   judgments: G ; D |- P :: L   G ; D |-i P :: x:T   P |-c G ; D
Type parse_type(const std::string& text, const std::string& file = "<input>");
Process parse_process(const std::string& text, const std::string& file = "<input>");
// "|-" yields System::ULL; callers retag for ULLM.
Judgment parse_judgment(const std::string& text, const std::string& file = "<input>");

std::string print_type(const Type& t);
std::string print_process(const Process& p);
std::string print_context(const Context& c);
std::string print_judgment(const Judgment& j);

}  // namespace sf
