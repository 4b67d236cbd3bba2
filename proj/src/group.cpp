#include "spinal/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "spinal/errors.hpp"

namespace spinal {

namespace {

constexpr std::size_t kTableLimit = 3000;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 16;
  while (p < n)
    p <<= 1;
  return p;
}

} // namespace

// --- GroupTable -------------------------------------------------------------

std::uint64_t GroupTable::hash_key(Key k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : k) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return h ^ (h >> 29);
}

void GroupTable::rehash(std::size_t capacity) {
  slots_.assign(capacity, 0);
  for (ElementId id = 0; id < size_; ++id)
    insert_index(id);
}

void GroupTable::insert_index(ElementId id) {
  std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash_key(key(id)) & mask;
  while (slots_[pos] != 0)
    pos = (pos + 1) & mask;
  slots_[pos] = id + 1;
}

std::optional<ElementId> GroupTable::find(Key k) const {
  if (k.size() != width_)
    return std::nullopt;
  std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash_key(k) & mask;
  while (slots_[pos] != 0) {
    ElementId id = slots_[pos] - 1;
    auto cand = key(id);
    if (std::equal(cand.begin(), cand.end(), k.begin()))
      return id;
    pos = (pos + 1) & mask;
  }
  return std::nullopt;
}

GroupPtr GroupTable::enumerate(std::vector<std::uint32_t> identity,
                               std::vector<NamedKey> generators, Ops ops,
                               std::size_t cap) {
  std::shared_ptr<GroupTable> g(new GroupTable());
  g->width_ = identity.size();
  g->ops_ = std::move(ops);
  g->keys_ = identity;
  g->size_ = 1;
  g->parent_.push_back(0);
  g->parent_gen_.push_back(0);
  g->slots_.assign(16, 0);
  g->insert_index(0);

  for (auto const &nk : generators) {
    if (nk.key.size() != g->width_)
      throw Error(ErrorKind::Input, "generator " + nk.name + " has wrong width");
    g->gen_names_.push_back(nk.name);
  }

  std::vector<std::uint32_t> buf(g->width_);
  std::vector<std::uint32_t> src(g->width_);
  for (std::size_t head = 0; head < g->size_; ++head) {
    // keys_ may reallocate on insertion, so copy the source key first
    std::copy(g->key(head).begin(), g->key(head).end(), src.begin());
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      g->ops_.compose(src, generators[gi].key, buf);
      if (g->find(buf))
        continue;
      if (g->size_ + 1 > cap)
        throw Error(ErrorKind::BudgetExceeded,
                    "group enumeration exceeded cap of " + std::to_string(cap) +
                        " elements");
      g->keys_.insert(g->keys_.end(), buf.begin(), buf.end());
      g->parent_.push_back(static_cast<ElementId>(head));
      g->parent_gen_.push_back(static_cast<std::uint32_t>(gi));
      ++g->size_;
      if (g->size_ * 2 > g->slots_.size())
        g->rehash(next_pow2(g->size_ * 4));
      else
        g->insert_index(static_cast<ElementId>(g->size_ - 1));
    }
  }

  for (auto const &nk : generators)
    g->gens_.push_back(*g->find(nk.key));

  g->inv_.resize(g->size_);
  for (ElementId a = 0; a < g->size_; ++a) {
    g->ops_.invert(g->key(a), buf);
    g->inv_[a] = *g->find(buf);
  }

  if (g->size_ <= kTableLimit) {
    g->table_.resize(g->size_ * g->size_);
    for (ElementId a = 0; a < g->size_; ++a)
      for (ElementId b = 0; b < g->size_; ++b)
        g->table_[a * g->size_ + b] = g->slow_mul(a, b);
  }

  g->order_.resize(g->size_);
  for (ElementId a = 0; a < g->size_; ++a) {
    std::uint32_t n = 1;
    for (ElementId x = a; x != 0; x = g->mul(x, a))
      ++n;
    g->order_[a] = n;
  }
  return g;
}

GroupPtr GroupTable::from_permutations(
    unsigned degree, std::vector<std::pair<std::string, Permutation>> gens,
    std::size_t cap) {
  std::sort(gens.begin(), gens.end(),
            [](auto const &a, auto const &b) { return a.first < b.first; });
  std::vector<NamedKey> keys;
  for (auto &[name, p] : gens) {
    if (p.degree() != degree)
      throw Error(ErrorKind::Input, "generator " + name + " has wrong degree");
    keys.push_back({name, p.images()});
  }
  Ops ops;
  ops.compose = [](Key a, Key b, MutKey out) {
    for (std::size_t i = 0; i < b.size(); ++i)
      out[i] = a[b[i]];
  };
  ops.invert = [](Key a, MutKey out) {
    for (std::size_t i = 0; i < a.size(); ++i)
      out[a[i]] = static_cast<std::uint32_t>(i);
  };
  return enumerate(Permutation(degree).images(), std::move(keys),
                   std::move(ops), cap);
}

ElementId GroupTable::slow_mul(ElementId a, ElementId b) const {
  return lookup_product(key(a), key(b));
}

ElementId GroupTable::lookup_product(Key a, Key b) const {
  thread_local std::vector<std::uint32_t> buf;
  buf.resize(width_);
  ops_.compose(a, b, buf);
  auto r = find(buf);
  if (!r)
    throw Error(ErrorKind::Input, "product left the enumerated group");
  return *r;
}

ElementId GroupTable::mul(ElementId a, ElementId b) const {
  if (!table_.empty())
    return table_[static_cast<std::size_t>(a) * size_ + b];
  if (a == 0)
    return b;
  if (b == 0)
    return a;
  return slow_mul(a, b);
}

ElementId GroupTable::pow(ElementId a, long long k) const {
  long long n = static_cast<long long>(order(a));
  k %= n;
  if (k < 0)
    k += n;
  ElementId r = 0, base = a;
  while (k) {
    if (k & 1)
      r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

ElementId GroupTable::conj(ElementId a, ElementId by) const {
  return mul(inv(by), mul(a, by));
}

ElementId GroupTable::commutator(ElementId a, ElementId b) const {
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

std::optional<std::size_t>
GroupTable::generator_index(const std::string &name) const {
  for (std::size_t i = 0; i < gen_names_.size(); ++i)
    if (gen_names_[i] == name)
      return i;
  return std::nullopt;
}

std::vector<std::size_t> GroupTable::word_indices(ElementId a) const {
  std::vector<std::size_t> w;
  while (a != 0) {
    w.push_back(parent_gen_[a]);
    a = parent_[a];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

std::string GroupTable::word(ElementId a) const {
  auto w = word_indices(a);
  if (w.empty())
    return "id";
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i])
      ++j;
    if (!s.empty())
      s += ' ';
    s += gen_names_[w[i]];
    if (j - i > 1)
      s += '^' + std::to_string(j - i);
    i = j;
  }
  return s;
}

Permutation GroupTable::permutation(ElementId a) const {
  auto k = key(a);
  return Permutation(std::vector<std::uint32_t>(k.begin(), k.end()));
}

// --- SubgroupHandle ---------------------------------------------------------

SubgroupHandle::SubgroupHandle(GroupPtr parent, std::vector<ElementId> gens,
                               std::vector<ElementId> members)
  : parent_(std::move(parent)), gens_(std::move(gens)),
    members_(std::move(members)), mask_(parent_->size(), false) {
  std::sort(members_.begin(), members_.end());
  for (auto m : members_)
    mask_[m] = true;
}

bool SubgroupHandle::is_subset_of(const SubgroupHandle &other) const {
  for (auto m : members_)
    if (!other.contains(m))
      return false;
  return true;
}

namespace {

// Incremental closure under right multiplication by a growing generator set.
class Closure {
public:
  explicit Closure(const GroupPtr &g) : g_(g), mask_(g->size(), false) {
    mask_[0] = true;
    members_.push_back(0);
  }

  bool contains(ElementId a) const { return mask_[a]; }

  // Returns false if a was already a member.
  bool add_generator(ElementId a) {
    if (mask_[a])
      return false;
    gens_.push_back(a);
    std::size_t old = members_.size();
    for (std::size_t i = 0; i < old; ++i)
      push(g_->mul(members_[i], a));
    for (std::size_t i = old; i < members_.size(); ++i)
      for (auto s : gens_)
        push(g_->mul(members_[i], s));
    return true;
  }

  const std::vector<ElementId> &gens() const { return gens_; }

  SubgroupHandle finish() const { return SubgroupHandle(g_, gens_, members_); }

private:
  void push(ElementId y) {
    if (!mask_[y]) {
      mask_[y] = true;
      members_.push_back(y);
    }
  }

  GroupPtr g_;
  std::vector<bool> mask_;
  std::vector<ElementId> members_;
  std::vector<ElementId> gens_;
};

} // namespace

SubgroupHandle whole_group(const GroupPtr &g) {
  std::vector<ElementId> all(g->size());
  std::iota(all.begin(), all.end(), 0u);
  return SubgroupHandle(g, g->generators(), std::move(all));
}

SubgroupHandle trivial_subgroup(const GroupPtr &g) {
  return SubgroupHandle(g, {}, {0});
}

SubgroupHandle subgroup_generated(const GroupPtr &g,
                                  std::span<const ElementId> gens) {
  Closure c(g);
  for (auto s : gens)
    c.add_generator(s);
  return c.finish();
}

SubgroupHandle normal_closure(const SubgroupHandle &ambient,
                              std::span<const ElementId> s) {
  auto const &g = ambient.parent();
  Closure c(ambient.parent_ptr());
  for (auto x : s)
    c.add_generator(x);
  bool changed = true;
  while (changed) {
    changed = false;
    auto gens = c.gens();
    for (auto n : gens)
      for (auto h : ambient.generators())
        if (c.add_generator(g.conj(n, h)))
          changed = true;
  }
  return c.finish();
}

SubgroupHandle normal_closure(const GroupPtr &g, std::span<const ElementId> s) {
  return normal_closure(whole_group(g), s);
}

SubgroupHandle derived_subgroup(const SubgroupHandle &h) {
  auto const &g = h.parent();
  std::vector<ElementId> comms;
  auto const &gens = h.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      comms.push_back(g.commutator(gens[i], gens[j]));
  return normal_closure(h, comms);
}

SubgroupHandle derived_subgroup(const GroupPtr &g) {
  return derived_subgroup(whole_group(g));
}

SubgroupHandle commutator_subgroup(const SubgroupHandle &n,
                                   const SubgroupHandle &h) {
  auto const &g = h.parent();
  std::vector<ElementId> comms;
  for (auto a : n.generators())
    for (auto b : h.generators())
      comms.push_back(g.commutator(a, b));
  return normal_closure(h, comms);
}

bool is_normal(const SubgroupHandle &n, const SubgroupHandle &h) {
  auto const &g = h.parent();
  for (auto a : n.generators())
    for (auto b : h.generators())
      if (!n.contains(g.conj(a, b)))
        return false;
  return true;
}

bool is_nilpotent(const SubgroupHandle &h) {
  SubgroupHandle c = h;
  while (!c.is_trivial()) {
    auto next = commutator_subgroup(c, h);
    if (next.size() == c.size())
      return false;
    c = std::move(next);
  }
  return true;
}

bool is_nilpotent(const GroupPtr &g) { return is_nilpotent(whole_group(g)); }

bool is_perfect(const SubgroupHandle &h) {
  return derived_subgroup(h).size() == h.size();
}

bool is_perfect(const GroupPtr &g) { return is_perfect(whole_group(g)); }

bool is_abelian(const SubgroupHandle &h) {
  auto const &g = h.parent();
  auto const &gens = h.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (g.mul(gens[i], gens[j]) != g.mul(gens[j], gens[i]))
        return false;
  return true;
}

bool is_maximal_subgroup(const SubgroupHandle &d, const SubgroupHandle &t) {
  if (!t.is_subset_of(d))
    throw Error(ErrorKind::Input, "T is not contained in D");
  if (t.size() == d.size())
    throw Error(ErrorKind::NotProper, "T equals D");
  auto const &g = d.parent();
  std::vector<bool> covered(g.size(), false);
  for (auto x : d.members()) {
    if (t.contains(x) || covered[x])
      continue;
    std::vector<ElementId> gens = t.generators();
    gens.push_back(x);
    if (subgroup_generated(d.parent_ptr(), gens).size() != d.size())
      return false;
    // mark the double coset T x T
    std::vector<ElementId> queue{x};
    covered[x] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto s : t.generators()) {
        for (auto y : {g.mul(s, queue[i]), g.mul(queue[i], s)}) {
          if (!covered[y]) {
            covered[y] = true;
            queue.push_back(y);
          }
        }
      }
    }
  }
  return true;
}

bool is_maximal_subgroup(const GroupPtr &d, const SubgroupHandle &t) {
  return is_maximal_subgroup(whole_group(d), t);
}

std::size_t element_order(const GroupTable &g, ElementId a) {
  return g.order(a);
}

std::vector<ElementId> conjugacy_class(const SubgroupHandle &h, ElementId r) {
  auto const &g = h.parent();
  std::vector<ElementId> orbit{r};
  std::vector<bool> seen(g.size(), false);
  seen[r] = true;
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (auto s : h.generators()) {
      auto y = g.conj(orbit[i], s);
      if (!seen[y]) {
        seen[y] = true;
        orbit.push_back(y);
      }
    }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

std::vector<std::vector<ElementId>> conjugacy_classes(const SubgroupHandle &h) {
  std::vector<std::vector<ElementId>> res;
  std::vector<bool> done(h.parent().size(), false);
  for (auto x : h.members()) {
    if (done[x])
      continue;
    auto cls = conjugacy_class(h, x);
    for (auto y : cls)
      done[y] = true;
    res.push_back(std::move(cls));
  }
  return res;
}

// --- CosetSpace -------------------------------------------------------------

CosetSpace::CosetSpace(SubgroupHandle ambient, SubgroupHandle normal)
  : ambient_(std::move(ambient)), normal_(std::move(normal)) {
  auto const &g = ambient_.parent();
  coset_of_.assign(g.size(), kNone);
  for (auto x : ambient_.members()) {
    if (coset_of_[x] != kNone)
      continue;
    auto c = static_cast<std::uint32_t>(reps_.size());
    reps_.push_back(x);
    std::vector<ElementId> mem;
    for (auto n : normal_.members()) {
      auto y = g.mul(x, n);
      coset_of_[y] = c;
      mem.push_back(y);
    }
    std::sort(mem.begin(), mem.end());
    members_.push_back(std::move(mem));
  }
}

std::uint32_t CosetSpace::mul(std::uint32_t a, std::uint32_t b) const {
  return coset_of_[ambient_.parent().mul(reps_[a], reps_[b])];
}

std::uint32_t CosetSpace::inv(std::uint32_t a) const {
  return coset_of_[ambient_.parent().inv(reps_[a])];
}

std::uint32_t CosetSpace::order(std::uint32_t c) const {
  std::uint32_t n = 1;
  for (auto x = c; x != 0; x = mul(x, c))
    ++n;
  return n;
}

std::string CosetSpace::name(std::uint32_t c) const {
  return ambient_.parent().word(reps_[c]);
}

CosetSpace coset_space(const SubgroupHandle &h, const SubgroupHandle &n) {
  return CosetSpace(h, n);
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e)
      f.push_back({p, e});
  }
  if (n > 1)
    f.push_back({n, 1});
  return f;
}

std::vector<std::uint64_t> abelian_invariants(const CosetSpace &q) {
  for (std::uint32_t a = 0; a < q.size(); ++a)
    for (std::uint32_t b = a + 1; b < q.size(); ++b)
      if (q.mul(a, b) != q.mul(b, a))
        throw Error(ErrorKind::Input, "quotient is not abelian");
  std::vector<std::uint64_t> res;
  for (auto [p, e] : factorize(q.size())) {
    // omega[k] = log_p #{x : x^(p^k) = 1}
    std::vector<unsigned> omega{0};
    std::uint64_t pk = 1;
    while (omega.back() < e) {
      pk *= p;
      std::uint64_t count = 0;
      for (std::uint32_t c = 0; c < q.size(); ++c)
        if (pk % q.order(c) == 0)
          ++count;
      unsigned lg = 0;
      while (count > 1) {
        count /= p;
        ++lg;
      }
      omega.push_back(lg);
    }
    // factors of exponent >= k: omega[k] - omega[k-1]
    std::uint64_t power = 1;
    for (std::size_t k = 1; k < omega.size(); ++k) {
      power *= p;
      unsigned ge_k = omega[k] - omega[k - 1];
      unsigned ge_k1 = k + 1 < omega.size() ? omega[k + 1] - omega[k] : 0;
      for (unsigned i = ge_k1; i < ge_k; ++i)
        res.push_back(power);
    }
  }
  std::sort(res.begin(), res.end());
  return res;
}

std::vector<CyclicSurjection>
enumerate_prime_power_surjections(const GroupPtr &d) {
  std::vector<CyclicSurjection> res;
  auto whole = whole_group(d);
  auto q = coset_space(whole, derived_subgroup(whole));
  std::uint64_t exponent = 1;
  for (std::uint32_t c = 0; c < q.size(); ++c)
    exponent = std::lcm(exponent, static_cast<std::uint64_t>(q.order(c)));
  auto const &gens = d->generators();
  std::size_t ng = gens.size();

  // spanning tree over right multiplication: value(x g) = value(x) + value(g)
  std::vector<std::pair<ElementId, std::size_t>> tree(d->size(), {0, 0});
  {
    std::vector<bool> seen(d->size(), false);
    std::vector<ElementId> order{0};
    seen[0] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t gi = 0; gi < ng; ++gi) {
        auto y = d->mul(order[i], gens[gi]);
        if (!seen[y]) {
          seen[y] = true;
          tree[y] = {order[i], gi};
          order.push_back(y);
        }
      }
    auto const &eval_order = order;
    for (auto [p, e] : factorize(exponent)) {
      std::uint64_t m = 1;
      for (unsigned k = 1; k <= e; ++k) {
        m *= p;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < ng; ++i) {
          total *= m;
          if (total > 1000000)
            throw Error(ErrorKind::BudgetExceeded,
                        "too many generator assignments for surjections");
        }
        std::vector<std::uint64_t> assign(ng, 0);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
          std::uint64_t t = idx;
          for (std::size_t i = ng; i-- > 0;) {
            assign[i] = t % m;
            t /= m;
          }
          bool unit = false;
          for (auto v : assign)
            if (v % p != 0)
              unit = true;
          if (!unit)
            continue;
          std::vector<std::uint64_t> val(d->size(), 0);
          for (auto x : eval_order)
            if (x != 0)
              val[x] = (val[tree[x].first] + assign[tree[x].second]) % m;
          bool hom = true;
          for (ElementId x = 0; x < d->size() && hom; ++x)
            for (std::size_t gi = 0; gi < ng; ++gi)
              if (val[d->mul(x, gens[gi])] != (val[x] + assign[gi]) % m) {
                hom = false;
                break;
              }
          if (!hom)
            continue;
          CyclicSurjection s;
          s.source = d;
          s.prime = p;
          s.modulus = m;
          s.value_of = std::move(val);
          s.generator_values = assign;
          res.push_back(std::move(s));
        }
      }
    }
  }
  std::stable_sort(res.begin(), res.end(), [](auto const &a, auto const &b) {
    return a.modulus < b.modulus;
  });
  return res;
}

} // namespace spinal
