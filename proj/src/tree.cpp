#include "spinal/tree.hpp"

#include <algorithm>
#include <set>

#include "spinal/errors.hpp"

namespace spinal {

namespace {

void check_symbols(const SpinalSpec &spec, const Word &g) {
  for (auto const &s : g) {
    if (s.is_rooted() ? s.id >= spec.alphabet_size()
                      : s.id >= spec.directed().size())
      throw Error(ErrorKind::UnknownGenerator, "symbol does not resolve");
  }
}

// First-layer section of g at letter x, and the image of x.
Word section1(const SpinalSpec &spec, const Word &g, Letter x, Letter *image) {
  auto const &r = spec.rooted();
  Word out;
  Letter cur = x;
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    if (it->is_rooted()) {
      cur = r.mul(it->id, cur);
      continue;
    }
    if (cur == spec.root_letter()) {
      out.push_back(*it);
    } else {
      auto v = spec.value_at(spec.generator_tuple(it->id), cur);
      if (it->sign < 0)
        v = r.inv(v);
      if (v != r.identity())
        out.push_back(Symbol::rooted(v));
    }
  }
  if (image)
    *image = cur;
  std::reverse(out.begin(), out.end());
  return free_reduce(out, r);
}

std::vector<std::uint32_t> form_key(const SyllableForm &f) {
  std::vector<std::uint32_t> k{f.root,
                               static_cast<std::uint32_t>(f.syllables.size())};
  for (auto const &s : f.syllables) {
    k.push_back(s.conj);
    k.insert(k.end(), s.d.begin(), s.d.end());
  }
  return k;
}

bool is_identity_rec(const SpinalSpec &spec, const SyllableForm &f,
                     std::map<std::vector<std::uint32_t>, bool> &memo) {
  if (f.root != spec.rooted().identity())
    return false;
  if (f.syllables.empty())
    return true;
  if (f.syllables.size() == 1)
    return false;
  auto key = form_key(f);
  if (auto it = memo.find(key); it != memo.end())
    return it->second;
  // sections of forms of length >= 2 are strictly shorter, so no cycles
  bool result = true;
  for (auto x : relevant_letters(spec, f)) {
    auto sub = induced_syllable_form(spec, f, x);
    if (!is_identity_rec(spec, sub, memo)) {
      result = false;
      break;
    }
  }
  memo.emplace(std::move(key), result);
  return result;
}

void portrait_rec(const SpinalSpec &spec, const SyllableForm &f, Vertex &v,
                  std::size_t depth, std::map<Vertex, ElementId> &out) {
  if (v.size() >= depth)
    return;
  if (f.root != spec.rooted().identity())
    out.emplace(v, f.root);
  if (f.syllables.empty())
    return;
  for (auto x : relevant_letters(spec, f)) {
    v.push_back(x);
    portrait_rec(spec, induced_syllable_form(spec, f, x), v, depth, out);
    v.pop_back();
  }
}

} // namespace

ElementId top_permutation(const SpinalSpec &spec, const Word &g) {
  check_symbols(spec, g);
  auto const &r = spec.rooted();
  ElementId p = r.identity();
  for (auto const &s : g)
    if (s.is_rooted())
      p = r.mul(p, s.id);
  return p;
}

Vertex act_on_vertex(const SpinalSpec &spec, const Word &g, const Vertex &v) {
  check_symbols(spec, g);
  Vertex out;
  Word cur = g;
  for (auto x : v) {
    Letter img;
    cur = section1(spec, cur, x, &img);
    out.push_back(img);
  }
  return out;
}

Word section(const SpinalSpec &spec, const Word &g, const Vertex &v) {
  check_symbols(spec, g);
  Word cur = free_reduce(g, spec.rooted());
  for (auto x : v)
    cur = section1(spec, cur, x, nullptr);
  return cur;
}

ElementId label_at(const SpinalSpec &spec, const Word &g, const Vertex &v) {
  return top_permutation(spec, section(spec, g, v));
}

Portrait portrait(const SpinalSpec &spec, const Word &g, std::size_t depth) {
  Portrait p;
  p.depth = depth;
  Vertex v;
  portrait_rec(spec, syllable_reduce(spec, g), v, depth, p.labels);
  return p;
}

SyllableForm reduce_factors(const SpinalSpec &spec,
                            const std::vector<Factor> &factors) {
  auto const &r = spec.rooted();
  SyllableForm f;
  f.root = r.identity();
  std::vector<Syllable> raw;
  ElementId q = r.identity();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    if (it->rooted)
      q = r.mul(it->r, q);
    else if (!spec.tuple_is_identity(it->d))
      raw.push_back({it->d, q});
  }
  f.root = q;
  std::reverse(raw.begin(), raw.end());
  for (auto &s : raw) {
    if (!f.syllables.empty() && f.syllables.back().conj == s.conj) {
      auto p = spec.tuple_mul(f.syllables.back().d, s.d);
      if (spec.tuple_is_identity(p))
        f.syllables.pop_back();
      else
        f.syllables.back().d = std::move(p);
    } else {
      f.syllables.push_back(std::move(s));
    }
  }
  return f;
}

SyllableForm syllable_reduce(const SpinalSpec &spec, const Word &g) {
  check_symbols(spec, g);
  std::vector<Factor> fs;
  fs.reserve(g.size());
  for (auto const &s : g) {
    if (s.is_rooted()) {
      fs.push_back({true, s.id, {}});
    } else {
      auto const &t = spec.generator_tuple(s.id);
      fs.push_back({false, 0, s.sign > 0 ? t : spec.tuple_inv(t)});
    }
  }
  return reduce_factors(spec, fs);
}

std::vector<Factor> form_factors(const SpinalSpec &spec,
                                 const SyllableForm &f) {
  auto const &r = spec.rooted();
  std::vector<Factor> fs{{true, f.root, {}}};
  for (auto const &s : f.syllables) {
    fs.push_back({true, r.inv(s.conj), {}});
    fs.push_back({false, 0, s.d});
    fs.push_back({true, s.conj, {}});
  }
  return fs;
}

SyllableForm form_inverse(const SpinalSpec &spec, const SyllableForm &f) {
  auto fs = form_factors(spec, f);
  std::reverse(fs.begin(), fs.end());
  for (auto &x : fs) {
    if (x.rooted)
      x.r = spec.rooted().inv(x.r);
    else
      x.d = spec.tuple_inv(x.d);
  }
  return reduce_factors(spec, fs);
}

SyllableForm form_product(const SpinalSpec &spec, const SyllableForm &a,
                          const SyllableForm &b) {
  auto fs = form_factors(spec, a);
  auto gs = form_factors(spec, b);
  fs.insert(fs.end(), gs.begin(), gs.end());
  return reduce_factors(spec, fs);
}

std::vector<Letter> relevant_letters(const SpinalSpec &spec,
                                     const SyllableForm &f) {
  auto const &r = spec.rooted();
  std::set<Letter> xs;
  for (auto const &s : f.syllables) {
    auto ci = r.inv(s.conj);
    xs.insert(ci);
    for (auto y : spec.support())
      xs.insert(r.mul(ci, y));
  }
  return {xs.begin(), xs.end()};
}

SyllableForm induced_syllable_form(const SpinalSpec &spec,
                                   const SyllableForm &f, Letter x) {
  auto const &r = spec.rooted();
  std::vector<Factor> fs;
  for (auto const &s : f.syllables) {
    auto y = r.mul(s.conj, x);
    if (y == spec.root_letter())
      fs.push_back({false, 0, s.d});
    else {
      auto v = spec.value_at(s.d, y);
      if (v != r.identity())
        fs.push_back({true, v, {}});
    }
  }
  return reduce_factors(spec, fs);
}

Word form_to_word(const SpinalSpec &spec, const DirectedGroup &d,
                  const SyllableForm &f) {
  auto const &r = spec.rooted();
  Word w;
  if (f.root != r.identity())
    w.push_back(Symbol::rooted(f.root));
  for (auto const &s : f.syllables) {
    if (s.conj != r.identity())
      w.push_back(Symbol::rooted(r.inv(s.conj)));
    for (auto gi : d.table->word_indices(d.id_of(s.d)))
      w.push_back(Symbol::directed(static_cast<std::uint32_t>(gi), 1));
    if (s.conj != r.identity())
      w.push_back(Symbol::rooted(s.conj));
  }
  return free_reduce(w, r);
}

bool is_identity(const SpinalSpec &spec, const SyllableForm &f) {
  std::map<std::vector<std::uint32_t>, bool> memo;
  return is_identity_rec(spec, f, memo);
}

bool is_identity(const SpinalSpec &spec, const Word &g) {
  return is_identity(spec, syllable_reduce(spec, g));
}

bool words_equal(const SpinalSpec &spec, const Word &a, const Word &b) {
  return is_identity(spec, concat(a, inverse(b, spec.rooted())));
}

bool is_rooted_element(const SpinalSpec &spec, const Word &g) {
  auto top = top_permutation(spec, g);
  return words_equal(spec, g, Word{Symbol::rooted(top)});
}

Word stabilised_section(const SpinalSpec &spec, const Word &g,
                        const Vertex &u) {
  Vertex v = u;
  long long n = 0;
  do {
    v = act_on_vertex(spec, g, v);
    ++n;
  } while (v != u);
  return section(spec, power(g, n, spec.rooted()), u);
}

std::uint32_t delta_ab(const SpinalSpec &spec, const DirectedGroup &d,
                       const Word &g) {
  auto form = syllable_reduce(spec, g);
  std::size_t len = std::max<std::size_t>(form.length(), 1);
  std::size_t limit = 2;
  while ((std::size_t{1} << (limit - 2)) < len)
    ++limit;
  limit += 4;

  auto layer_product = [&](const std::vector<SyllableForm> &layer) {
    DTuple p = spec.identity_tuple();
    for (auto const &f : layer)
      for (auto const &s : f.syllables)
        p = spec.tuple_mul(p, s.d);
    return d.ab.coset_of(d.id_of(p));
  };

  std::vector<SyllableForm> layer{form};
  auto prev = layer_product(layer);
  for (std::size_t depth = 0; depth <= limit; ++depth) {
    bool settled = true;
    for (auto const &f : layer)
      if (f.length() > 1)
        settled = false;
    std::vector<SyllableForm> next;
    for (auto const &f : layer) {
      if (f.length() <= 1) {
        if (f.length() == 1)
          next.push_back(f);
        continue;
      }
      for (auto x : relevant_letters(spec, f)) {
        auto sub = induced_syllable_form(spec, f, x);
        if (sub.length() > 0)
          next.push_back(std::move(sub));
      }
    }
    auto cur = layer_product(next);
    if (settled && cur == prev)
      return cur;
    prev = cur;
    layer = std::move(next);
  }
  throw Error(ErrorKind::DepthExceeded,
              "directed parts did not stabilise within " +
                  std::to_string(limit) + " layers");
}

std::uint32_t rho_ab(const SpinalSpec &spec, const Word &g) {
  return spec.rooted_ab().coset_of(top_permutation(spec, g));
}

std::optional<std::size_t> element_order_bounded(const SpinalSpec &spec,
                                                 const Word &g,
                                                 std::size_t max) {
  auto f = syllable_reduce(spec, g);
  auto p = f;
  for (std::size_t n = 1; n <= max; ++n) {
    if (is_identity(spec, p))
      return n;
    p = form_product(spec, p, f);
  }
  return std::nullopt;
}

// --- exact syllable length ---------------------------------------------------

SyllableIndex::SyllableIndex(const SpinalSpec &spec, const DirectedGroup &d,
                             std::size_t budget)
  : spec_(spec), budget_(budget) {
  depth_ = 3;
  while ((std::size_t{1} << (depth_ - 3)) < 2 * std::max<std::size_t>(budget, 1))
    ++depth_;
  auto const &r = spec.rooted();
  std::vector<DTuple> nontrivial;
  for (ElementId x = 1; x < d.table->size(); ++x)
    nontrivial.push_back(d.tuple(x));

  std::vector<SyllableForm> layer;
  for (ElementId r0 = 0; r0 < r.size(); ++r0)
    layer.push_back(SyllableForm{r0, {}});
  for (std::size_t len = 0;; ++len) {
    for (auto const &f : layer) {
      by_print_.emplace(fingerprint(f), forms_.size());
      forms_.push_back(f);
    }
    if (len == budget)
      break;
    std::vector<SyllableForm> next;
    for (auto const &f : layer)
      for (ElementId c = 0; c < r.size(); ++c) {
        if (!f.syllables.empty() && f.syllables.back().conj == c)
          continue;
        for (auto const &t : nontrivial) {
          auto g = f;
          g.syllables.push_back({t, c});
          next.push_back(std::move(g));
        }
      }
    layer = std::move(next);
  }
}

std::uint64_t SyllableIndex::fingerprint(const SyllableForm &f) const {
  std::map<Vertex, ElementId> labels;
  Vertex v;
  portrait_rec(spec_, f, v, depth_, labels);
  std::uint64_t h = 0x12345678abcdefull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto const &[vert, lab] : labels) {
    mix(vert.size());
    for (auto x : vert)
      mix(x);
    mix(lab + 0x1000);
  }
  return h;
}

std::optional<std::size_t>
SyllableIndex::exact_length(const SyllableForm &g) const {
  auto range = by_print_.equal_range(fingerprint(g));
  std::vector<std::size_t> cands;
  for (auto it = range.first; it != range.second; ++it)
    cands.push_back(it->second);
  std::sort(cands.begin(), cands.end());
  for (auto i : cands) {
    auto diff = form_product(spec_, form_inverse(spec_, forms_[i]), g);
    if (is_identity(spec_, diff))
      return forms_[i].length();
  }
  return std::nullopt;
}

std::optional<std::size_t> SyllableIndex::exact_length(const Word &g) const {
  return exact_length(syllable_reduce(spec_, g));
}

std::optional<std::size_t> syllable_exact(const SpinalSpec &spec,
                                          const DirectedGroup &d,
                                          const Word &g, std::size_t budget) {
  auto f = syllable_reduce(spec, g);
  // the reduced form is itself a representation
  budget = std::min(budget, f.length());
  SyllableIndex idx(spec, d, budget);
  return idx.exact_length(f);
}

std::string vertex_str(const SpinalSpec &spec, const Vertex &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ", ";
    s += spec.rooted().word(v[i]);
  }
  return s + "]";
}

std::string form_str(const SpinalSpec &spec, const SyllableForm &f) {
  auto const &r = spec.rooted();
  std::string s = r.word(f.root);
  for (auto const &syl : f.syllables) {
    s += " * (";
    bool first = true;
    for (std::size_t i = 0; i < syl.d.size(); ++i) {
      if (syl.d[i] == r.identity())
        continue;
      if (!first)
        s += ", ";
      first = false;
      s += r.word(spec.support()[i]) + ": " + r.word(syl.d[i]);
    }
    s += ")^{" + r.word(syl.conj) + "}";
  }
  return s;
}

} // namespace spinal
