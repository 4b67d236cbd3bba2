#include "spinal/theta.hpp"

#include <numeric>

#include "spinal/errors.hpp"

namespace spinal {

ElementId delta_map(const SpinalSpec &spec, const DTuple &d, const Word &g) {
  auto top = top_permutation(spec, g);
  if (top == spec.rooted().identity())
    return spec.rooted().identity();
  // X = R with the regular action, so g(E) is the letter top
  return spec.value_at(d, top);
}

Word theta_power(const SpinalSpec &spec, const Word &g, ElementId r,
                 std::uint32_t l, long long k) {
  auto const &rt = spec.rooted();
  Word rg{Symbol::rooted(r)};
  rg.insert(rg.end(), g.begin(), g.end());
  long long t = static_cast<long long>(l) -
                static_cast<long long>(spec.m(r)) * k;
  return free_reduce(power(rg, t, rt), rt);
}

namespace {

Word theta_of_power(const SpinalSpec &spec, const DTuple &d, const Word &p,
                    ElementId &delta) {
  auto const &rt = spec.rooted();
  delta = delta_map(spec, d, p);
  if (delta == rt.identity())
    return {};
  auto sec = section(spec, p, {spec.root_letter()});
  return free_reduce(commutator(Word{Symbol::rooted(delta)}, sec, rt), rt);
}

} // namespace

Word theta_map(const SpinalSpec &spec, const DTuple &d, const Word &g,
               ElementId r, std::uint32_t l, long long k) {
  if (l == 0 || l >= spec.m(r))
    throw Error(ErrorKind::LabelOutOfRange,
                "label " + std::to_string(l) + " outside [1, " +
                    std::to_string(spec.m(r)) + ")");
  ElementId delta = 0;
  return theta_of_power(spec, d, theta_power(spec, g, r, l, k), delta);
}

ThetaResult theta_path(const RabGraph &graph, const Word &g, ElementId r,
                       const PathSpec &path,
                       const std::vector<long long> &kappa) {
  auto const &spec = graph.spec();
  auto const &q = graph.cosets();
  if (kappa.size() != path.labels.size())
    throw Error(ErrorKind::InvalidPath, "kappa and path lengths differ");
  if (path.start >= q.size() || q.coset_of(r) != path.start)
    throw Error(ErrorKind::InvalidPath, "r is not in the start coset");
  // the whole path is checked before any evaluation
  CosetId v = path.start;
  for (auto l : path.labels) {
    if (l == 0 || l >= graph.m(v) || graph.targets(v, l).empty())
      throw Error(ErrorKind::InvalidPath,
                  "no edge labelled " + std::to_string(l) + " at " +
                      graph.vertex_name(v));
    v = graph.targets(v, l).front();
  }
  ThetaResult res{r, g};
  for (std::size_t i = 0; i < path.labels.size(); ++i) {
    auto p = theta_power(spec, res.theta, res.delta, path.labels[i], kappa[i]);
    ElementId delta = 0;
    auto th = theta_of_power(spec, graph.element(), p, delta);
    res.delta = delta;
    res.theta = std::move(th);
  }
  return res;
}

KappaChoice find_kappa(const SpinalSpec &spec, const DTuple &d, const Word &g,
                       ElementId r, std::uint32_t l) {
  auto const &rt = spec.rooted();
  auto s = top_permutation(spec, g);
  KappaChoice c;
  c.k_star = static_cast<long long>(rt.order(rt.mul(r, s)) / spec.m(r));
  c.len_zero = syllable_reduce(spec, theta_map(spec, d, g, r, l, 0)).length();
  c.len_star =
      syllable_reduce(spec, theta_map(spec, d, g, r, l, c.k_star)).length();
  c.k = c.len_star < c.len_zero ? c.k_star : 0;
  return c;
}

bool is_saturated(const SpinalSpec &spec, const Word &g, const LetterSet &y) {
  for (Letter x = 0; x < spec.alphabet_size(); ++x)
    if (!y.contains(x) && !is_rooted_element(spec, section(spec, g, {x})))
      return false;
  return true;
}

SplitSaturation is_split_saturated(const SpinalSpec &spec, const Word &g,
                                   const LetterSet &y0, const LetterSet &y1,
                                   const SyllableIndex *idx) {
  SplitSaturation res;
  res.exact = idx != nullptr;
  auto syl = [&](const Word &w) {
    auto f = syllable_reduce(spec, w);
    if (idx) {
      if (auto e = idx->exact_length(f))
        return *e;
      res.exact = false;
    }
    return f.length();
  };
  LetterSet both = y0;
  both.insert(y1.begin(), y1.end());
  if (!is_saturated(spec, g, both))
    return res;
  auto total = syl(g);
  if (total % 2)
    return res;
  auto part = [&](const LetterSet &y) {
    std::size_t s = 0;
    for (auto x : y)
      s += syl(section(spec, g, {x}));
    return s;
  };
  res.holds = part(y0) == total / 2 && part(y1) == total / 2;
  return res;
}

std::pair<LetterSet, LetterSet> split_parts(const SpinalSpec &spec,
                                            ElementId rs, std::uint32_t l) {
  auto const &rt = spec.rooted();
  std::pair<LetterSet, LetterSet> parts;
  auto n = rt.order(rs);
  ElementId x = rt.identity();
  for (std::size_t i = 0; i < n; ++i) {
    (i < l ? parts.first : parts.second).insert(x);
    x = rt.mul(x, rs);
  }
  return parts;
}

} // namespace spinal
