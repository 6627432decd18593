#pragma once

#include <stdexcept>
#include <string>

#include "sessionforge/checker.hpp"

namespace sf {

class DerivationFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// deriv-v1 JSON: {"format":"deriv-v1","system":..,"rule":..,"conclusion":..,"premises":[..]}
// where nested nodes carry rule, conclusion and premises. Conclusions use the
// judgment surface syntax. Output ends with a newline.
std::string print_derivation(const Derivation& d);
Derivation parse_derivation(const std::string& text, Extension ext = Extension::MixCycle);

// Readable indented tree, one node per line.
std::string render_tree(const Derivation& d);

}  // namespace sf
