// Prints the start value of 1-pile Nim of k chips against the bit-flip
// probability, next to the transmitted move that achieves it.
//
//   nim_curve [k] [points]

#include <charconv>
#include <cstring>
#include <iostream>

#include "noisygame/analysis.hpp"

namespace {

template <class T>
bool parse(const char* s, T& out) {
  const char* end = s + std::strlen(s);
  auto [ptr, ec] = std::from_chars(s, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

int main(int argc, char** argv) {
  unsigned k = 5;
  std::size_t points = 21;
  if (argc > 3 || (argc > 1 && !parse(argv[1], k)) || (argc > 2 && (!parse(argv[2], points) || points < 2))) {
    std::cerr << "usage: nim_curve [k] [points>=2]\n";
    return 2;
  }

  for (const auto& row : noisygame::sweep_nim1(k, points)) {
    std::cout << noisygame::format_p(row.p, points) << "  " << noisygame::format_value(row.value) << "  leave {"
              << noisygame::format_moves(row.optimal_moves, ",") << "}\n";
  }
}
