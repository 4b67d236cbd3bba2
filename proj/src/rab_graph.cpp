#include "spinal/rab_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "spinal/errors.hpp"

namespace spinal {

RabGraph::RabGraph(const SpinalSpec &spec, DTuple d, std::vector<RabEdge> edges)
  : spec_(&spec), d_(std::move(d)), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  auto const &r = spec.rooted();
  for (auto v : d_)
    order_ = std::lcm(order_, r.order(v));
  out_.resize(vertex_count());
  for (CosetId v = 0; v < vertex_count(); ++v)
    out_[v].resize(m(v));
  for (auto const &e : edges_)
    out_[e.from][e.label].push_back(e.to);
}

const std::vector<CosetId> &RabGraph::targets(CosetId v,
                                              std::uint32_t label) const {
  static const std::vector<CosetId> none;
  if (v >= out_.size() || label == 0 || label >= out_[v].size())
    return none;
  return out_[v][label];
}

bool RabGraph::simply_labelled() const {
  for (CosetId v = 0; v < vertex_count(); ++v)
    for (std::uint32_t l = 1; l < m(v); ++l)
      if (out_[v][l].size() != 1)
        return false;
  return true;
}

std::string RabGraph::vertex_name(CosetId v) const {
  return spec_->rooted().word(cosets().rep(v));
}

RabGraph build_rab_graph(const SpinalSpec &spec, const DTuple &d,
                         const std::vector<ElementId> &reps) {
  auto const &r = spec.rooted();
  auto const &q = spec.rooted_ab();
  auto const &rd = spec.rooted_derived().members();
  std::vector<RabEdge> edges;
  for (CosetId c = 0; c < q.size(); ++c) {
    auto m = q.order(c);
    for (std::uint32_t l = 1; l < m; ++l)
      for (auto t : rd) {
        auto x = r.pow(r.mul(reps[c], t), l);
        edges.push_back({c, l, q.coset_of(spec.value_at(d, x))});
      }
  }
  return RabGraph(spec, d, std::move(edges));
}

RabGraph build_rab_graph(const SpinalSpec &spec, const DTuple &d) {
  return build_rab_graph(spec, d, spec.rooted_ab().reps());
}

std::size_t default_cycle_bound(const RabGraph &g) {
  return g.vertex_count() * g.vertex_count() + g.element_order();
}

namespace {

using Layers = std::vector<std::vector<bool>>;

// back[j][u]: some path of length j leads from u to v.
Layers back_layers(const RabGraph &g, CosetId v, std::size_t bound) {
  auto n = g.vertex_count();
  Layers back(bound + 1, std::vector<bool>(n, false));
  back[0][v] = true;
  for (std::size_t j = 1; j <= bound; ++j)
    for (auto const &e : g.edges())
      if (back[j - 1][e.to])
        back[j][e.from] = true;
  return back;
}

// Lexicographically least label path of length len from u to the target of
// `back`, optionally forcing the first label.
std::vector<std::uint32_t> least_path(const RabGraph &g, const Layers &back,
                                      CosetId u, std::size_t len,
                                      std::uint32_t first = 0) {
  std::vector<std::uint32_t> labels;
  for (std::size_t j = len; j > 0; --j) {
    bool moved = false;
    for (std::uint32_t l = first ? first : 1; l < g.m(u) && !moved; ++l) {
      for (auto w : g.targets(u, l))
        if (back[j - 1][w]) {
          labels.push_back(l);
          u = w;
          moved = true;
          break;
        }
      if (first)
        break;
    }
    first = 0;
    if (!moved)
      return {};
  }
  return labels;
}

} // namespace

ForkingSearch forking_points(const RabGraph &g, std::size_t cycle_bound) {
  ForkingSearch res;
  res.cycle_bound = cycle_bound ? cycle_bound : default_cycle_bound(g);
  auto bound = res.cycle_bound;
  auto ord = g.element_order();

  for (CosetId v = 0; v < g.vertex_count(); ++v) {
    auto m = g.m(v);
    if (m <= 2)
      continue;
    auto back = back_layers(g, v, bound);
    // base[k]: closed lengths starting with label k
    std::vector<std::vector<std::size_t>> base(m);
    std::vector<std::size_t> any;
    for (std::size_t len = 1; len <= bound; ++len) {
      bool hit = false;
      for (std::uint32_t k = 1; k < m; ++k) {
        bool ok = false;
        for (auto w : g.targets(v, k))
          ok = ok || back[len - 1][w];
        if (ok) {
          base[k].push_back(len);
          hit = true;
        }
      }
      if (hit)
        any.push_back(len);
    }
    // Extended lengths: a base path, optionally followed by one closed loop.
    // ext_a[k][len] is the shortest base part, 0 if len is not reachable.
    auto limit = 2 * bound;
    std::vector<bool> any_bit(bound + 1, false);
    std::size_t any_gcd = 0;
    for (auto c : any) {
      any_bit[c] = true;
      any_gcd = std::gcd(any_gcd, c);
    }
    auto ext_base = [&](std::uint32_t k, std::size_t len) -> std::size_t {
      for (auto a : base[k]) {
        if (a > len)
          break;
        if (a == len || (len - a <= bound && any_bit[len - a]))
          return a;
      }
      return 0;
    };
    std::size_t returning = 0;
    bool coprime_start = false;
    for (std::uint32_t k = 1; k < m; ++k)
      if (!base[k].empty()) {
        ++returning;
        coprime_start = coprime_start || std::gcd<std::size_t>(k, ord) == 1;
      }
    if (returning < 2 || !coprime_start)
      continue;

    auto base_gcd = [&](std::uint32_t k) {
      std::size_t g0 = any_gcd;
      for (auto a : base[k])
        g0 = std::gcd(g0, a);
      return g0;
    };
    std::optional<ForkingWitness> found;
    for (std::uint32_t k = 1; k < m && !found; ++k) {
      if (base[k].empty() || std::gcd<std::size_t>(k, ord) != 1)
        continue;
      for (std::uint32_t k2 = 1; k2 < m && !found; ++k2) {
        if (k2 == k || base[k2].empty())
          continue;
        if (std::gcd(base_gcd(k), base_gcd(k2)) != 1)
          continue;
        // smallest total length, then smallest first length
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t sum = 2; sum <= 2 * limit && !best; ++sum)
          for (std::size_t l1 = 1; l1 < sum && l1 <= limit; ++l1) {
            auto l2 = sum - l1;
            if (l2 > limit || std::gcd(l1, l2) != 1)
              continue;
            if (ext_base(k, l1) && ext_base(k2, l2)) {
              best = {l1, l2};
              break;
            }
          }
        if (!best)
          continue;
        auto build = [&](std::uint32_t first, std::size_t total) {
          auto a = ext_base(first, total);
          auto p = least_path(g, back, v, a, first);
          if (total > a) {
            auto loop = least_path(g, back, v, total - a);
            p.insert(p.end(), loop.begin(), loop.end());
          }
          return p;
        };
        ForkingWitness w;
        w.vertex = v;
        w.k = k;
        w.k2 = k2;
        w.path_a = build(k, best->first);
        w.path_b = build(k2, best->second);
        found = std::move(w);
      }
    }
    if (found)
      res.witnesses.push_back(std::move(*found));
    else
      res.undecided.push_back(v);
  }
  return res;
}

std::optional<CosetId> follow_path(const RabGraph &g, CosetId start,
                                   const std::vector<std::uint32_t> &labels) {
  CosetId cur = start;
  for (auto l : labels) {
    auto const &t = g.targets(cur, l);
    if (t.empty())
      return std::nullopt;
    cur = t.front();
  }
  return cur;
}

bool check_forking_witness(const RabGraph &g, const ForkingWitness &w) {
  auto closes = [&](const std::vector<std::uint32_t> &p) {
    CosetSet cur{w.vertex};
    for (auto l : p) {
      CosetSet next;
      for (auto v : cur)
        for (auto t : g.targets(v, l))
          next.insert(t);
      cur = std::move(next);
    }
    return cur.count(w.vertex) > 0;
  };
  return !w.path_a.empty() && !w.path_b.empty() && w.path_a[0] == w.k &&
         w.path_b[0] == w.k2 && w.k != w.k2 &&
         std::gcd<std::size_t>(w.k, g.element_order()) == 1 &&
         std::gcd(w.path_a.size(), w.path_b.size()) == 1 && closes(w.path_a) &&
         closes(w.path_b);
}

CosetSet reach(const RabGraph &g, const CosetSet &w) {
  CosetSet seen;
  std::vector<CosetId> stack;
  for (auto v : w)
    stack.push_back(v);
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (std::uint32_t l = 1; l < g.m(v); ++l)
      for (auto t : g.targets(v, l))
        if (seen.insert(t).second)
          stack.push_back(t);
  }
  return seen;
}

CosetSet coset_subgroup(const CosetSpace &q, const CosetSet &gens) {
  CosetSet s{q.identity()};
  std::vector<CosetId> frontier{q.identity()};
  while (!frontier.empty()) {
    auto x = frontier.back();
    frontier.pop_back();
    for (auto g : gens) {
      auto y = q.mul(x, g);
      if (s.insert(y).second)
        frontier.push_back(y);
    }
  }
  return s;
}

CosetSet reach_closure(const RabGraph &g, const CosetSet &w) {
  auto s = coset_subgroup(g.cosets(), w);
  for (;;) {
    auto grow = s;
    for (auto v : reach(g, s))
      grow.insert(v);
    auto next = coset_subgroup(g.cosets(), grow);
    if (next == s)
      return s;
    s = std::move(next);
  }
}

namespace {

struct LiftOutcome {
  bool decided = true; // false when the lift cap was hit
  bool generates = false;
  ConjugateCheck check;
};

LiftOutcome check_conjugate(const SpinalSpec &spec, const DTuple &t,
                            ElementId tid, const CosetSet &closure,
                            bool rooted_nilpotent, std::size_t lift_cap) {
  auto const &q = spec.rooted_ab();
  auto rp = spec.rooted_ptr();
  LiftOutcome out;
  out.check.t = tid;
  std::vector<std::vector<ElementId>> choices;
  bool constant = true;
  for (auto c : closure) {
    if (c == q.identity())
      continue;
    std::set<ElementId> vals;
    for (auto x : q.members(c))
      vals.insert(spec.value_at(t, x));
    constant = constant && vals.size() == 1;
    choices.emplace_back(vals.begin(), vals.end());
  }
  auto first_lift = [&] {
    std::vector<ElementId> g;
    for (auto const &c : choices)
      g.push_back(c.front());
    return g;
  };
  if (constant || rooted_nilpotent) {
    // every lift shares the cosets of its values; in a nilpotent group a set
    // generates iff its image generates the abelianisation
    out.check.strategy = constant ? "constant-on-cosets" : "nilpotent-rooted";
    out.check.lifts = 1;
    auto gens = first_lift();
    if (constant) {
      auto h = subgroup_generated(rp, gens);
      out.generates = h.is_whole();
      out.check.min_generated = h.size();
    } else {
      CosetSet cs;
      for (auto x : gens)
        cs.insert(q.coset_of(x));
      out.generates = coset_subgroup(q, cs).size() == q.size();
      out.check.min_generated =
          out.generates ? rp->size() : subgroup_generated(rp, gens).size();
    }
    return out;
  }
  out.check.strategy = "exhaustive";
  std::size_t count = 1;
  for (auto const &c : choices) {
    if (count > lift_cap / c.size() + 1) {
      count = lift_cap + 1;
      break;
    }
    count *= c.size();
  }
  if (count > lift_cap) {
    out.decided = false;
    return out;
  }
  std::vector<std::size_t> idx(choices.size(), 0);
  std::vector<ElementId> gens(choices.size());
  out.check.min_generated = rp->size();
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t i = 0; i < choices.size(); ++i)
      gens[i] = choices[i][idx[i]];
    auto h = subgroup_generated(rp, gens);
    ++out.check.lifts;
    out.check.min_generated = std::min(out.check.min_generated, h.size());
    if (!h.is_whole()) {
      out.generates = false;
      return out;
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (++idx[i] < choices[i].size())
        break;
      idx[i] = 0;
    }
  }
  out.generates = true;
  return out;
}

} // namespace

FillingResult is_filling(const SpinalSpec &spec, const DirectedGroup &dg,
                         ElementId d, const FillingCaps &caps) {
  auto tuple = dg.tuple(d);
  if (!is_compatible(spec, tuple))
    throw Error(ErrorKind::NotCompatible, "element is not compatible");
  auto graph = build_rab_graph(spec, tuple);
  auto fs = forking_points(graph, caps.cycle_bound);
  FillingResult res;
  res.cycle_bound = fs.cycle_bound;
  if (fs.witnesses.empty()) {
    if (fs.undecided.empty()) {
      res.status = FillingStatus::NotFilling;
      res.reason = "no forking points";
    } else {
      res.status = FillingStatus::Inconclusive;
      res.reason = "no coprime return lengths within cycle bound " +
                   std::to_string(fs.cycle_bound);
    }
    return res;
  }
  bool nilpotent = is_nilpotent(spec.rooted_ptr());
  auto klass = conjugacy_class_in_D(dg, d);
  bool open = !fs.undecided.empty();
  for (auto const &w : fs.witnesses) {
    FillingWitness fw;
    fw.fork = w;
    fw.closure = reach_closure(graph, {w.vertex});
    bool ok = true;
    for (auto t : klass) {
      auto o = check_conjugate(spec, dg.tuple(t), t, fw.closure, nilpotent,
                               caps.lift_cap);
      if (!o.decided) {
        open = true;
        ok = false;
        break;
      }
      fw.per_conjugate.push_back(o.check);
      if (!o.generates) {
        ok = false;
        break;
      }
    }
    if (ok) {
      res.status = FillingStatus::Filling;
      res.witness = std::move(fw);
      return res;
    }
  }
  res.status = open ? FillingStatus::Inconclusive : FillingStatus::NotFilling;
  res.reason = open ? "lift count exceeds cap or forking search incomplete"
                    : "no forking point lifts to a generating set";
  return res;
}

std::string export_dot(const RabGraph &g, const CosetSet &marks) {
  std::ostringstream os;
  os << "digraph rab {\n  node [shape=circle];\n";
  for (CosetId v = 0; v < g.vertex_count(); ++v) {
    os << "  \"" << g.vertex_name(v) << "\"";
    if (marks.count(v))
      os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (auto const &e : g.edges())
    os << "  \"" << g.vertex_name(e.from) << "\" -> \"" << g.vertex_name(e.to)
       << "\" [label=\"" << e.label << "\"];\n";
  os << "}\n";
  return os.str();
}

} // namespace spinal
