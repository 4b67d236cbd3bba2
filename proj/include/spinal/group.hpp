#ifndef SPINAL_GROUP_HPP
#define SPINAL_GROUP_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinal/permutation.hpp"

namespace spinal {

using ElementId = std::uint32_t;

inline constexpr std::size_t kDefaultElementCap = 1000000;

class GroupTable;
using GroupPtr = std::shared_ptr<const GroupTable>;

// An enumerated finite group. Elements are stored as fixed-width keys
// (permutation images, or tuples of rooted ids for the directed group) and
// numbered in breadth-first order from the identity, right-multiplying by
// the generators in the given order. Element 0 is the identity.
class GroupTable {
public:
  using Key = std::span<const std::uint32_t>;
  using MutKey = std::span<std::uint32_t>;

  struct Ops {
    // out = a * b
    std::function<void(Key a, Key b, MutKey out)> compose;
    std::function<void(Key a, MutKey out)> invert;
  };

  struct NamedKey {
    std::string name;
    std::vector<std::uint32_t> key;
  };

  static GroupPtr enumerate(std::vector<std::uint32_t> identity,
                            std::vector<NamedKey> generators, Ops ops,
                            std::size_t cap);

  // Generators are sorted by name before enumeration.
  static GroupPtr from_permutations(
      unsigned degree, std::vector<std::pair<std::string, Permutation>> gens,
      std::size_t cap = kDefaultElementCap);

  std::size_t size() const { return size_; }
  std::size_t width() const { return width_; }
  ElementId identity() const { return 0; }

  ElementId mul(ElementId a, ElementId b) const;
  ElementId inv(ElementId a) const { return inv_[a]; }
  ElementId pow(ElementId a, long long k) const;
  // by^-1 a by
  ElementId conj(ElementId a, ElementId by) const;
  // a^-1 b^-1 a b
  ElementId commutator(ElementId a, ElementId b) const;
  std::size_t order(ElementId a) const { return order_[a]; }

  Key key(ElementId a) const { return {keys_.data() + a * width_, width_}; }
  std::optional<ElementId> find(Key k) const;
  // Raw product of keys, looked up in the table.
  ElementId lookup_product(Key a, Key b) const;

  const std::vector<ElementId> &generators() const { return gens_; }
  const std::vector<std::string> &generator_names() const { return gen_names_; }
  std::optional<std::size_t> generator_index(const std::string &name) const;

  // Breadth-first word: x = g_{i1} g_{i2} ... as generator indices.
  std::vector<std::size_t> word_indices(ElementId a) const;
  // Collapsed text form, e.g. "a^2 t", identity is "id".
  std::string word(ElementId a) const;

  const Ops &ops() const { return ops_; }

  // Permutation view; only meaningful for groups built from permutations.
  Permutation permutation(ElementId a) const;

private:
  GroupTable() = default;
  std::uint64_t hash_key(Key k) const;
  void insert_index(ElementId id);
  void rehash(std::size_t capacity);
  ElementId slow_mul(ElementId a, ElementId b) const;

  std::size_t width_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> keys_;
  std::vector<std::uint32_t> slots_; // open addressing, stores id+1
  std::vector<ElementId> inv_;
  std::vector<std::uint32_t> order_;
  std::vector<ElementId> table_; // full product table for small groups
  std::vector<ElementId> parent_;
  std::vector<std::uint32_t> parent_gen_;
  std::vector<ElementId> gens_;
  std::vector<std::string> gen_names_;
  Ops ops_;
};

// A subgroup of an enumerated group: sorted members, membership mask and
// the generating set it was closed from.
class SubgroupHandle {
public:
  SubgroupHandle() = default;
  SubgroupHandle(GroupPtr parent, std::vector<ElementId> gens,
                 std::vector<ElementId> members);

  const GroupTable &parent() const { return *parent_; }
  const GroupPtr &parent_ptr() const { return parent_; }
  std::size_t size() const { return members_.size(); }
  bool contains(ElementId a) const { return mask_[a]; }
  const std::vector<ElementId> &members() const { return members_; }
  const std::vector<ElementId> &generators() const { return gens_; }
  bool is_whole() const { return members_.size() == parent_->size(); }
  bool is_trivial() const { return members_.size() == 1; }
  bool is_subset_of(const SubgroupHandle &other) const;

  bool operator==(const SubgroupHandle &other) const {
    return parent_ == other.parent_ && members_ == other.members_;
  }

private:
  GroupPtr parent_;
  std::vector<ElementId> gens_;
  std::vector<ElementId> members_;
  std::vector<bool> mask_;
};

// Quotient H/N for N normal in H.
class CosetSpace {
public:
  CosetSpace() = default;
  CosetSpace(SubgroupHandle ambient, SubgroupHandle normal);

  const SubgroupHandle &ambient() const { return ambient_; }
  const SubgroupHandle &normal() const { return normal_; }
  std::size_t size() const { return reps_.size(); }
  ElementId rep(std::uint32_t c) const { return reps_[c]; }
  const std::vector<ElementId> &reps() const { return reps_; }
  std::uint32_t coset_of(ElementId a) const { return coset_of_[a]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t order(std::uint32_t c) const;
  std::uint32_t identity() const { return 0; }
  // Elements of H lying in coset c, in id order.
  const std::vector<ElementId> &members(std::uint32_t c) const {
    return members_[c];
  }
  std::string name(std::uint32_t c) const;

  static constexpr std::uint32_t kNone = 0xffffffffu;

private:
  SubgroupHandle ambient_;
  SubgroupHandle normal_;
  std::vector<ElementId> reps_;
  std::vector<std::uint32_t> coset_of_;
  std::vector<std::vector<ElementId>> members_;
};

// A surjection D -> Z/p^n Z, stored on all elements.
struct CyclicSurjection {
  GroupPtr source;
  std::uint64_t prime = 0;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> value_of;
  std::vector<std::uint64_t> generator_values;

  bool is_unit(ElementId a) const { return value_of[a] % prime != 0; }
};

SubgroupHandle whole_group(const GroupPtr &g);
SubgroupHandle trivial_subgroup(const GroupPtr &g);
SubgroupHandle subgroup_generated(const GroupPtr &g,
                                  std::span<const ElementId> gens);

// Smallest subgroup of `ambient` containing S and normalised by it.
SubgroupHandle normal_closure(const SubgroupHandle &ambient,
                              std::span<const ElementId> s);
SubgroupHandle normal_closure(const GroupPtr &g, std::span<const ElementId> s);
SubgroupHandle derived_subgroup(const SubgroupHandle &h);
SubgroupHandle derived_subgroup(const GroupPtr &g);
// [N, H] for N normal in H.
SubgroupHandle commutator_subgroup(const SubgroupHandle &n,
                                   const SubgroupHandle &h);
bool is_normal(const SubgroupHandle &n, const SubgroupHandle &h);
bool is_nilpotent(const SubgroupHandle &h);
bool is_nilpotent(const GroupPtr &g);
bool is_perfect(const SubgroupHandle &h);
bool is_perfect(const GroupPtr &g);
bool is_abelian(const SubgroupHandle &h);

// True iff <T, d> = D for every d in D \ T. Throws NotProper when T = D.
bool is_maximal_subgroup(const SubgroupHandle &d, const SubgroupHandle &t);
bool is_maximal_subgroup(const GroupPtr &d, const SubgroupHandle &t);

std::size_t element_order(const GroupTable &g, ElementId a);
std::vector<ElementId> conjugacy_class(const SubgroupHandle &h, ElementId r);
// Partition of h's members into classes; each class sorted, classes ordered
// by smallest member.
std::vector<std::vector<ElementId>> conjugacy_classes(const SubgroupHandle &h);

CosetSpace coset_space(const SubgroupHandle &h, const SubgroupHandle &n);
// Primary invariants p^k in ascending order; the quotient must be abelian.
std::vector<std::uint64_t> abelian_invariants(const CosetSpace &q);

std::vector<CyclicSurjection> enumerate_prime_power_surjections(
    const GroupPtr &d);

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

} // namespace spinal

#endif // SPINAL_GROUP_HPP
