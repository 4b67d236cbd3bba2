#include "spinal/spinal_spec.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "spinal/errors.hpp"

namespace spinal {

namespace {
constexpr std::size_t kNoPos = static_cast<std::size_t>(-1);
}

SpinalSpec::SpinalSpec(std::string name, GroupPtr rooted,
                       std::vector<DirectedTable> directed,
                       std::vector<SubgroupDef> subgroups,
                       Assumptions assumptions)
  : name_(std::move(name)), rooted_(std::move(rooted)),
    directed_(std::move(directed)), subgroups_(std::move(subgroups)),
    assumptions_(std::move(assumptions)) {
  std::sort(directed_.begin(), directed_.end(),
            [](auto const &a, auto const &b) { return a.name < b.name; });
  for (std::size_t i = 0; i + 1 < directed_.size(); ++i)
    if (directed_[i].name == directed_[i + 1].name)
      throw Error(ErrorKind::Input,
                  "duplicate directed generator " + directed_[i].name);
  for (auto const &d : directed_)
    if (rooted_->generator_index(d.name))
      throw Error(ErrorKind::Input,
                  "name " + d.name + " used for rooted and directed generator");

  auto whole = whole_group(rooted_);
  derived_ = derived_subgroup(whole);
  ab_ = coset_space(whole, derived_);

  std::set<Letter> support;
  for (auto &d : directed_) {
    for (auto it = d.sections.begin(); it != d.sections.end();) {
      if (it->first == root_letter())
        throw Error(ErrorKind::Input,
                    "directed generator " + d.name + " has an entry at E");
      if (it->first >= rooted_->size() || it->second >= rooted_->size())
        throw Error(ErrorKind::Input, "table entry out of range in " + d.name);
      if (it->second == rooted_->identity())
        it = d.sections.erase(it);
      else
        support.insert((it++)->first);
    }
  }
  support_.assign(support.begin(), support.end());
  support_pos_.assign(rooted_->size(), kNoPos);
  for (std::size_t i = 0; i < support_.size(); ++i)
    support_pos_[support_[i]] = i;

  for (auto const &d : directed_) {
    DTuple t(support_.size(), rooted_->identity());
    for (auto [x, v] : d.sections)
      t[support_pos_[x]] = v;
    gen_tuples_.push_back(std::move(t));
  }

  for (auto const &s : subgroups_)
    for (auto const &w : s.generators)
      for (auto const &sym : w)
        if (sym.is_rooted() || sym.id >= directed_.size())
          throw Error(ErrorKind::Input,
                      "subgroup " + s.name +
                          " must be generated by directed words");
}

std::optional<std::uint32_t>
SpinalSpec::directed_index(const std::string &name) const {
  for (std::uint32_t i = 0; i < directed_.size(); ++i)
    if (directed_[i].name == name)
      return i;
  return std::nullopt;
}

const SubgroupDef *SpinalSpec::subgroup(const std::string &name) const {
  for (auto const &s : subgroups_)
    if (s.name == name)
      return &s;
  return nullptr;
}

DTuple SpinalSpec::identity_tuple() const {
  return DTuple(support_.size(), rooted_->identity());
}

DTuple SpinalSpec::tuple_mul(const DTuple &a, const DTuple &b) const {
  DTuple r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = rooted_->mul(a[i], b[i]);
  return r;
}

DTuple SpinalSpec::tuple_inv(const DTuple &a) const {
  DTuple r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = rooted_->inv(a[i]);
  return r;
}

bool SpinalSpec::tuple_is_identity(const DTuple &a) const {
  for (auto v : a)
    if (v != rooted_->identity())
      return false;
  return true;
}

ElementId SpinalSpec::value_at(const DTuple &a, Letter x) const {
  auto p = support_pos_[x];
  return p == kNoPos ? rooted_->identity() : a[p];
}

DTuple SpinalSpec::tuple_conj(const DTuple &d, const DTuple &w) const {
  DTuple r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    r[i] = rooted_->conj(d[i], w[i]);
  return r;
}

DTuple SpinalSpec::tuple_of(const Word &w) const {
  DTuple r = identity_tuple();
  for (auto const &s : w) {
    if (s.is_rooted())
      throw Error(ErrorKind::Input, "expected a word over directed generators");
    auto const &g = gen_tuples_.at(s.id);
    r = tuple_mul(r, s.sign > 0 ? g : tuple_inv(g));
  }
  return r;
}

ElementId DirectedGroup::id_of(const DTuple &t) const {
  auto r = table->find(t);
  if (!r)
    throw Error(ErrorKind::Input, "tuple is not an element of D");
  return *r;
}

DTuple DirectedGroup::tuple(ElementId d) const {
  auto k = table->key(d);
  return DTuple(k.begin(), k.end());
}

namespace {

GroupPtr enumerate_tuples(const SpinalSpec &spec,
                          const std::vector<std::uint32_t> &gens,
                          std::size_t cap) {
  auto rp = spec.rooted_ptr();
  std::vector<GroupTable::NamedKey> keys;
  for (auto i : gens)
    keys.push_back({spec.directed()[i].name, spec.generator_tuple(i)});
  GroupTable::Ops ops;
  ops.compose = [rp](GroupTable::Key a, GroupTable::Key b,
                     GroupTable::MutKey out) {
    for (std::size_t i = 0; i < a.size(); ++i)
      out[i] = rp->mul(a[i], b[i]);
  };
  ops.invert = [rp](GroupTable::Key a, GroupTable::MutKey out) {
    for (std::size_t i = 0; i < a.size(); ++i)
      out[i] = rp->inv(a[i]);
  };
  return GroupTable::enumerate(spec.identity_tuple(), std::move(keys),
                               std::move(ops), cap);
}

} // namespace

DirectedGroup build_directed_group(const SpinalSpec &spec, std::size_t cap) {
  std::vector<std::uint32_t> all(spec.directed().size());
  std::iota(all.begin(), all.end(), 0u);
  DirectedGroup d;
  d.table = enumerate_tuples(spec, all, cap);
  auto whole = whole_group(d.table);
  d.derived = derived_subgroup(whole);
  d.ab = coset_space(whole, d.derived);
  return d;
}

bool is_compatible(const SpinalSpec &spec, const DTuple &d) {
  auto const &ab = spec.rooted_ab();
  for (std::uint32_t c = 0; c < ab.size(); ++c) {
    std::uint32_t target = CosetSpace::kNone;
    for (auto x : ab.members(c)) {
      if (x == spec.root_letter())
        continue;
      auto v = ab.coset_of(spec.value_at(d, x));
      if (target == CosetSpace::kNone)
        target = v;
      else if (target != v)
        return false;
    }
  }
  return true;
}

ValidationReport validate(const SpinalSpec &spec, std::size_t cap) {
  ValidationReport rep;
  std::set<ElementId> values;
  for (auto const &d : spec.directed())
    for (auto [x, v] : d.sections)
      values.insert(v);
  rep.gen_witness.assign(values.begin(), values.end());
  auto reached = subgroup_generated(spec.rooted_ptr(), rep.gen_witness);
  rep.reached_order = reached.size();
  rep.gen_holds = reached.is_whole();
  if (!rep.gen_holds)
    rep.notes.push_back("table values generate a proper subgroup of order " +
                        std::to_string(reached.size()));
  for (std::uint32_t i = 0; i < spec.directed().size(); ++i)
    rep.compatible_generators.push_back(
        {spec.directed()[i].name, is_compatible(spec, spec.generator_tuple(i))});
  rep.d_cap = cap;
  try {
    rep.d_order = build_directed_group(spec, cap).table->size();
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::BudgetExceeded)
      throw;
    rep.notes.push_back("directed group exceeds the enumeration cap");
  }
  return rep;
}

std::vector<ElementId> conjugacy_class_in_D(const DirectedGroup &d,
                                            ElementId elem) {
  return conjugacy_class(whole_group(d.table), elem);
}

SpecialSpec special_subgroup(const SpinalSpec &spec, const DirectedGroup &d,
                             const SubgroupDef &def) {
  SpecialSpec s;
  s.name = def.name;
  s.generators = def.generators;
  std::set<ElementId> values;
  for (auto const &w : def.generators) {
    auto t = spec.tuple_of(w);
    s.generator_ids.push_back(d.id_of(t));
    for (auto v : t)
      values.insert(v);
  }
  s.t = subgroup_generated(d.table, s.generator_ids);
  std::vector<ElementId> vals(values.begin(), values.end());
  s.gen_holds = subgroup_generated(spec.rooted_ptr(), vals).is_whole();
  return s;
}

std::vector<DirectedBlock> directed_blocks(const SpinalSpec &spec,
                                           std::size_t cap) {
  std::size_t n = spec.directed().size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto const &a = spec.generator_tuple(static_cast<std::uint32_t>(i));
      auto const &b = spec.generator_tuple(static_cast<std::uint32_t>(j));
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != 0 && b[k] != 0) {
          parent[find(i)] = find(j);
          break;
        }
    }
  std::vector<DirectedBlock> blocks;
  std::vector<std::size_t> block_of(n, kNoPos);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = find(i);
    if (block_of[r] == kNoPos) {
      block_of[r] = blocks.size();
      blocks.emplace_back();
    }
    blocks[block_of[r]].generators.push_back(static_cast<std::uint32_t>(i));
  }
  for (auto &b : blocks) {
    auto g = enumerate_tuples(spec, b.generators, cap);
    b.order = g->size();
    b.perfect = is_perfect(g);
  }
  return blocks;
}

} // namespace spinal
