#ifndef SPINAL_THETA_HPP
#define SPINAL_THETA_HPP

#include <optional>
#include <set>
#include <vector>

#include "spinal/rab_graph.hpp"
#include "spinal/tree.hpp"

namespace spinal {

// identity on St(1), else d|_{g(E)}
ElementId delta_map(const SpinalSpec &spec, const DTuple &d, const Word &g);

// (rg)^{l - m(r) k}
Word theta_power(const SpinalSpec &spec, const Word &g, ElementId r,
                 std::uint32_t l, long long k);

// [Delta_d(p), p|_E] for p = (rg)^{l - m(r) k}. Throws LabelOutOfRange.
Word theta_map(const SpinalSpec &spec, const DTuple &d, const Word &g,
               ElementId r, std::uint32_t l, long long k);

struct PathSpec {
  CosetId start = 0;
  std::vector<std::uint32_t> labels;
};

struct ThetaResult {
  ElementId delta = 0;
  Word theta;
};

// Fold along a label path of the graph of d; r must lie in the start coset.
// Throws InvalidPath.
ThetaResult theta_path(const RabGraph &graph, const Word &g, ElementId r,
                       const PathSpec &path, const std::vector<long long> &kappa);

struct KappaChoice {
  long long k = 0;
  long long k_star = 0; // ord(rs) / m(r)
  std::size_t len_zero = 0, len_star = 0; // reduced lengths of theta
};

KappaChoice find_kappa(const SpinalSpec &spec, const DTuple &d, const Word &g,
                       ElementId r, std::uint32_t l);

using LetterSet = std::set<Letter>;

// g|_x is rooted for every x outside Y.
bool is_saturated(const SpinalSpec &spec, const Word &g, const LetterSet &y);

struct SplitSaturation {
  bool holds = false;
  bool exact = false; // false: reduced lengths stood in for syl
};

// Exact lengths come from idx when given and within its budget.
SplitSaturation is_split_saturated(const SpinalSpec &spec, const Word &g,
                                   const LetterSet &y0, const LetterSet &y1,
                                   const SyllableIndex *idx = nullptr);

// The two parts {1, rs, .., (rs)^{l-1}} and {(rs)^l, .., (rs)^{-1}}.
std::pair<LetterSet, LetterSet> split_parts(const SpinalSpec &spec,
                                            ElementId rs, std::uint32_t l);

} // namespace spinal

#endif // SPINAL_THETA_HPP
