#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ucw/functional.hpp"

namespace ucw {

// Witness file format:
//
//   # comment
//   name: I
//   maximize:
//     2*sqrt(P(0,0,0)) + 2*sqrt(P(1,0,1))
//     - 18*abs(PB(0) - 1/4) ...
//
// Atoms: P(a,b,c), PdoA(a|b), PdoC(c|b) and the sugar E_A(b), E_C(b),
// E_AC(b), PB(b), EdoA(b), EdoC(b), which expand to probability
// coordinates. Operators + - * / with constant factors only. Text without
// headers is read as an unnamed maximize expression.
FunctionalSpec parse_witness(std::string_view text);
FunctionalSpec load_witness_file(const std::filesystem::path& path);

// Prints a witness in the same format; parse_witness(to_text(s)) == s.
std::string to_text(const FunctionalSpec& spec);

}  // namespace ucw
