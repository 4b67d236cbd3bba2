#ifndef SPINAL_WORD_HPP
#define SPINAL_WORD_HPP

#include <cstdint>
#include <vector>

#include "spinal/group.hpp"

namespace spinal {

using Letter = ElementId;
using Vertex = std::vector<Letter>;

struct Symbol {
  enum class Kind : std::uint8_t { Rooted, Directed };
  Kind kind = Kind::Rooted;
  // Rooted: element id of R. Directed: index of the directed generator.
  std::uint32_t id = 0;
  // Directed only: +1 or -1.
  int sign = 1;

  static Symbol rooted(ElementId r) { return {Kind::Rooted, r, 1}; }
  static Symbol directed(std::uint32_t gen, int sign = 1) {
    return {Kind::Directed, gen, sign};
  }
  bool is_rooted() const { return kind == Kind::Rooted; }

  bool operator==(const Symbol &) const = default;
};

// A product of symbols, read left to right as composition: the rightmost
// symbol acts first.
using Word = std::vector<Symbol>;

Word concat(const Word &a, const Word &b);
Word inverse(const Word &w, const GroupTable &r);
Word power(const Word &w, long long k, const GroupTable &r);
// by^-1 w by
Word conjugate(const Word &w, const Word &by, const GroupTable &r);
// a^-1 b^-1 a b
Word commutator(const Word &a, const Word &b, const GroupTable &r);
// Free cancellation: merges adjacent rooted symbols, drops identities and
// cancels d d^-1 pairs.
Word free_reduce(const Word &w, const GroupTable &r);

} // namespace spinal

#endif // SPINAL_WORD_HPP
