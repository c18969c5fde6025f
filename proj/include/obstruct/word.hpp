#ifndef OBSTRUCT_WORD_HPP
#define OBSTRUCT_WORD_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace obstruct {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

// Symbolic scale: the depth j stands for epsilon = 2^-j under
// d(x, y) = 2^-min{k : x_k != y_k}. Two points are within 2^-j in the Bowen
// metric d_n iff their first n + j symbols agree.
struct ScaleIndex {
  std::size_t j = 0;

  friend bool operator==(ScaleIndex, ScaleIndex) = default;
};

// Depth shift for a multiplicative scale change c * epsilon, c >= 1: the
// coarser scale sits ceil(log2 c) levels up, clamped at depth 0.
ScaleIndex coarsen(ScaleIndex depth, unsigned factor);

// Word text format: digits concatenated when the alphabet has at most ten
// symbols, otherwise space-separated unsigned integers.
std::string format_word(WordView w, std::size_t alphabet_size);
Word parse_word(const std::string& text, std::size_t alphabet_size);

// One word per line; blank lines and lines starting with '#' are skipped.
std::vector<Word> read_word_file(std::istream& in, std::size_t alphabet_size);
void write_word_file(std::ostream& out, const std::vector<Word>& words,
                     std::size_t alphabet_size);

Word concat(WordView a, WordView b);
Word repeat_symbol(Symbol s, std::size_t count);

// Cylinder of x at Bowen time n and depth j: the (n + j)-prefix of x.
Word bowen_cylinder(WordView x_prefix, std::size_t n, ScaleIndex depth);

}  // namespace obstruct

#endif  // OBSTRUCT_WORD_HPP
