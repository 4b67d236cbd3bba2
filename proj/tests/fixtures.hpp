// Shared helpers for the tree and spec suites: random words and an
// independent automaton oracle that acts on vertices straight from the tables.
#ifndef SPINAL_TESTS_FIXTURES_HPP
#define SPINAL_TESTS_FIXTURES_HPP

#include <random>

#include "spinal/catalog.hpp"
#include "spinal/tree.hpp"

namespace fx {

using namespace spinal;

inline constexpr std::uint64_t kSeed = 0x5EED;

inline Symbol R(ElementId r) { return Symbol::rooted(r); }
inline Symbol Dg(std::uint32_t i, int s = 1) { return Symbol::directed(i, s); }

inline ElementId rgen(const SpinalSpec &s, std::size_t i = 0) {
  return s.rooted().generators()[i];
}

inline Word random_word(const SpinalSpec &spec, std::mt19937_64 &rng,
                        std::size_t len) {
  Word w;
  std::uniform_int_distribution<ElementId> re(0, spec.alphabet_size() - 1);
  std::uniform_int_distribution<std::uint32_t> de(
      0, static_cast<std::uint32_t>(spec.directed().size() - 1));
  for (std::size_t i = 0; i < len; ++i) {
    if (rng() % 2)
      w.push_back(Symbol::rooted(re(rng)));
    else
      w.push_back(Symbol::directed(de(rng), rng() % 2 ? 1 : -1));
  }
  return w;
}

inline Vertex random_vertex(const SpinalSpec &spec, std::mt19937_64 &rng,
                            std::size_t len) {
  std::uniform_int_distribution<ElementId> re(0, spec.alphabet_size() - 1);
  Vertex v;
  for (std::size_t i = 0; i < len; ++i)
    // bias towards E so directed parts are exercised below the first layer
    v.push_back(rng() % 3 == 0 ? spec.root_letter() : re(rng));
  return v;
}

// Automaton oracle: applies symbols right to left directly on the vertex.
inline Vertex oracle_act(const SpinalSpec &spec, const Word &g, Vertex v) {
  auto const &r = spec.rooted();
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    if (v.empty())
      break;
    if (it->is_rooted()) {
      v[0] = r.mul(it->id, v[0]);
      continue;
    }
    auto const &tab = spec.directed()[it->id].sections;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] == spec.root_letter())
        continue;
      auto f = tab.find(v[i]);
      if (f != tab.end()) {
        auto val = it->sign > 0 ? f->second : r.inv(f->second);
        v[i + 1] = r.mul(val, v[i + 1]);
      }
      break;
    }
  }
  return v;
}

inline void all_vertices(std::size_t n, std::size_t depth, Vertex &cur,
                         std::vector<Vertex> &out) {
  out.push_back(cur);
  if (cur.size() == depth)
    return;
  for (ElementId x = 0; x < n; ++x) {
    cur.push_back(x);
    all_vertices(n, depth, cur, out);
    cur.pop_back();
  }
}

inline std::vector<Vertex> vertices_upto(const SpinalSpec &spec,
                                         std::size_t depth) {
  std::vector<Vertex> out;
  Vertex cur;
  all_vertices(spec.alphabet_size(), depth, cur, out);
  return out;
}

// Oracle: acts trivially on every vertex of exactly the given depth.
inline bool oracle_trivial_to(const SpinalSpec &spec, const Word &g,
                              std::size_t depth) {
  for (auto const &v : vertices_upto(spec, depth))
    if (v.size() == depth && oracle_act(spec, g, v) != v)
      return false;
  return true;
}

} // namespace fx

#endif // SPINAL_TESTS_FIXTURES_HPP
