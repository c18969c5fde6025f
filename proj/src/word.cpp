#include "obstruct/word.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace obstruct {

ScaleIndex coarsen(ScaleIndex depth, unsigned factor) {
  if (factor == 0) {
    throw std::invalid_argument("coarsen: factor must be positive");
  }
  std::size_t shift = 0;
  for (unsigned long long p = 1; p < factor; p <<= 1) ++shift;
  return ScaleIndex{depth.j > shift ? depth.j - shift : 0};
}

std::string format_word(WordView w, std::size_t alphabet_size) {
  std::string out;
  if (alphabet_size <= 10) {
    out.reserve(w.size());
    for (Symbol s : w) out += static_cast<char>('0' + s);
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(const std::string& text, std::size_t alphabet_size) {
  Word out;
  if (alphabet_size <= 10) {
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("invalid symbol '" + std::string(1, c) + "' in word");
      }
      out.push_back(static_cast<Symbol>(c - '0'));
    }
  } else {
    std::istringstream in(text);
    long long v = 0;
    while (in >> v) {
      if (v < 0) throw std::invalid_argument("negative symbol in word");
      out.push_back(static_cast<Symbol>(v));
    }
    if (!in.eof()) throw std::invalid_argument("malformed word '" + text + "'");
  }
  for (Symbol s : out) {
    if (s >= alphabet_size) {
      throw std::invalid_argument("symbol " + std::to_string(s) + " outside alphabet of size " +
                                  std::to_string(alphabet_size));
    }
  }
  return out;
}

std::vector<Word> read_word_file(std::istream& in, std::size_t alphabet_size) {
  std::vector<Word> words;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    words.push_back(parse_word(line, alphabet_size));
  }
  return words;
}

void write_word_file(std::ostream& out, const std::vector<Word>& words,
                     std::size_t alphabet_size) {
  for (const Word& w : words) out << format_word(w, alphabet_size) << '\n';
}

Word concat(WordView a, WordView b) {
  Word out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word repeat_symbol(Symbol s, std::size_t count) { return Word(count, s); }

Word bowen_cylinder(WordView x_prefix, std::size_t n, ScaleIndex depth) {
  std::size_t length = n + depth.j;
  if (x_prefix.size() < length) {
    throw std::invalid_argument("bowen_cylinder: prefix of length " +
                                std::to_string(x_prefix.size()) + " is shorter than n + j = " +
                                std::to_string(length));
  }
  return Word(x_prefix.begin(), x_prefix.begin() + static_cast<std::ptrdiff_t>(length));
}

}  // namespace obstruct
