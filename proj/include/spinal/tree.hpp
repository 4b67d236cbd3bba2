#ifndef SPINAL_TREE_HPP
#define SPINAL_TREE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "spinal/spinal_spec.hpp"
#include "spinal/word.hpp"

namespace spinal {

struct Syllable {
  DTuple d;
  ElementId conj = 0;
  bool operator==(const Syllable &) const = default;
};

// r0 * prod d_i^{r_i}
struct SyllableForm {
  ElementId root = 0;
  std::vector<Syllable> syllables;

  std::size_t length() const { return syllables.size(); }
  bool operator==(const SyllableForm &) const = default;
};

// An element of R or of D, in the order they are multiplied.
struct Factor {
  bool rooted = true;
  ElementId r = 0;
  DTuple d;
};

// Nontrivial labels only; vertices shorter than depth.
struct Portrait {
  std::size_t depth = 0;
  std::map<Vertex, ElementId> labels;
};

ElementId top_permutation(const SpinalSpec &spec, const Word &g);
Vertex act_on_vertex(const SpinalSpec &spec, const Word &g, const Vertex &v);
Word section(const SpinalSpec &spec, const Word &g, const Vertex &v);
ElementId label_at(const SpinalSpec &spec, const Word &g, const Vertex &v);
Portrait portrait(const SpinalSpec &spec, const Word &g, std::size_t depth);

SyllableForm syllable_reduce(const SpinalSpec &spec, const Word &g);
SyllableForm reduce_factors(const SpinalSpec &spec,
                            const std::vector<Factor> &factors);
std::vector<Factor> form_factors(const SpinalSpec &spec, const SyllableForm &f);
SyllableForm form_inverse(const SpinalSpec &spec, const SyllableForm &f);
SyllableForm form_product(const SpinalSpec &spec, const SyllableForm &a,
                          const SyllableForm &b);
SyllableForm induced_syllable_form(const SpinalSpec &spec,
                                   const SyllableForm &f, Letter x);
// Letters x whose induced form may be nontrivial.
std::vector<Letter> relevant_letters(const SpinalSpec &spec,
                                     const SyllableForm &f);
// Word spelling of a form; needs D to spell tuples.
Word form_to_word(const SpinalSpec &spec, const DirectedGroup &d,
                  const SyllableForm &f);

bool is_identity(const SpinalSpec &spec, const Word &g);
bool is_identity(const SpinalSpec &spec, const SyllableForm &f);
bool words_equal(const SpinalSpec &spec, const Word &a, const Word &b);
// g is the rooted element r
bool is_rooted_element(const SpinalSpec &spec, const Word &g);

Word stabilised_section(const SpinalSpec &spec, const Word &g,
                        const Vertex &u);

// Coset of D/D' via layer expansion. Throws DepthExceeded.
std::uint32_t delta_ab(const SpinalSpec &spec, const DirectedGroup &d,
                       const Word &g);
std::uint32_t rho_ab(const SpinalSpec &spec, const Word &g);
std::optional<std::size_t> element_order_bounded(const SpinalSpec &spec,
                                                 const Word &g,
                                                 std::size_t max);

// Exact syllable length by search over all forms up to a budget. Candidate
// forms are filtered by a portrait fingerprint and confirmed with
// is_identity. Build once, query many times.
class SyllableIndex {
public:
  SyllableIndex(const SpinalSpec &spec, const DirectedGroup &d,
                std::size_t budget);

  std::size_t budget() const { return budget_; }
  std::size_t form_count() const { return forms_.size(); }
  std::optional<std::size_t> exact_length(const Word &g) const;
  std::optional<std::size_t> exact_length(const SyllableForm &g) const;

private:
  std::uint64_t fingerprint(const SyllableForm &f) const;

  const SpinalSpec &spec_;
  std::size_t budget_;
  std::size_t depth_;
  std::vector<SyllableForm> forms_; // ordered by length
  std::unordered_multimap<std::uint64_t, std::size_t> by_print_;
};

std::optional<std::size_t> syllable_exact(const SpinalSpec &spec,
                                          const DirectedGroup &d,
                                          const Word &g,
                                          std::size_t budget = 6);

std::string vertex_str(const SpinalSpec &spec, const Vertex &v);
std::string form_str(const SpinalSpec &spec, const SyllableForm &f);

} // namespace spinal

#endif // SPINAL_TREE_HPP
