#include "spinal/catalog.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "spinal/certifier.hpp"
#include "spinal/errors.hpp"
#include "spinal/rab_graph.hpp"
#include "spinal/spec_io.hpp"
#include "spinal/tree.hpp"

namespace spinal {

Permutation cycles1(unsigned degree, std::vector<std::vector<unsigned>> cycles) {
  for (auto &c : cycles)
    for (auto &x : c) {
      if (x == 0)
        throw Error(ErrorKind::Input, "cycle points are 1-based");
      --x;
    }
  return Permutation::from_cycles(degree, cycles);
}

ElementId element_of(const GroupTable &g, const Permutation &p) {
  auto r = g.find(p.images());
  if (!r)
    throw Error(ErrorKind::Input, "permutation " + p.str() + " not in group");
  return *r;
}

namespace {

std::vector<unsigned> range1(unsigned from, unsigned to) {
  std::vector<unsigned> r;
  for (unsigned i = from; i <= to; ++i)
    r.push_back(i);
  return r;
}

// Standard generators of Alt(n) on points 1..n, shifted by offset.
std::pair<Permutation, Permutation> alt_generators(unsigned n, unsigned degree,
                                                   unsigned offset = 0) {
  auto shift = [offset](std::vector<unsigned> c) {
    for (auto &x : c)
      x += offset;
    return c;
  };
  auto three = cycles1(degree, {shift({1, 2, 3})});
  auto big = n % 2 ? cycles1(degree, {shift(range1(1, n))})
                   : cycles1(degree, {shift(range1(2, n))});
  return {three, big};
}

CatalogParams with_defaults(const CatalogParams &given,
                            const CatalogParams &defaults) {
  CatalogParams p = defaults;
  for (auto const &[k, v] : given) {
    if (!defaults.count(k))
      throw Error(ErrorKind::ParamOutOfRange, "unknown parameter " + k);
    p[k] = v;
  }
  return p;
}

SpinalSpec ggs_z4(const std::string &name, std::array<unsigned, 3> e,
                  Assumptions as = {}) {
  auto r = GroupTable::from_permutations(4, {{"a", cycles1(4, {{1, 2, 3, 4}})}});
  auto a = r->generators()[0];
  DirectedTable b{"b", {}};
  for (unsigned j = 1; j <= 3; ++j)
    b.sections[r->pow(a, j)] = r->pow(a, e[j - 1]);
  return SpinalSpec(name, r, {b}, {}, std::move(as));
}

SpinalSpec order21() {
  std::vector<std::uint32_t> a(7), t(7);
  for (unsigned x = 0; x < 7; ++x) {
    a[x] = (x + 1) % 7;
    t[x] = (2 * x) % 7;
  }
  auto r = GroupTable::from_permutations(
      7, {{"a", Permutation(a)}, {"t", Permutation(t)}});
  auto ga = r->generators()[0], gt = r->generators()[1];
  auto const &ab = [&]() -> const CosetSpace & {
    static thread_local CosetSpace q;
    q = coset_space(whole_group(r), derived_subgroup(r));
    return q;
  }();
  DirectedTable d{"d", {}};
  auto t2 = r->mul(gt, gt);
  for (ElementId x = 1; x < r->size(); ++x) {
    auto c = ab.coset_of(x);
    if (c == ab.coset_of(gt))
      d.sections[x] = r->conj(gt, ga);
    else if (c == ab.coset_of(t2))
      d.sections[x] = t2;
  }
  return SpinalSpec("order21", r, {d});
}

SpinalSpec heisenberg_f5() {
  // affine action (x, y) -> (x + alpha y + gamma, y + beta) on F5^2
  auto pt = [](unsigned x, unsigned y) { return 5 * (x % 5) + (y % 5); };
  std::vector<std::uint32_t> a(25), b(25);
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned y = 0; y < 5; ++y) {
      a[pt(x, y)] = pt(x + y, y);
      b[pt(x, y)] = pt(x, y + 1);
    }
  auto r = GroupTable::from_permutations(
      25, {{"a", Permutation(a)}, {"b", Permutation(b)}});
  auto ga = r->generators()[0], gb = r->generators()[1];
  auto q = coset_space(whole_group(r), derived_subgroup(r));
  auto elt = [&](unsigned i, unsigned j) {
    return r->mul(r->pow(ga, i), r->pow(gb, j));
  };
  // coset -> exponents (i, j)
  std::vector<std::pair<unsigned, unsigned>> exps(q.size());
  for (unsigned i = 0; i < 5; ++i)
    for (unsigned j = 0; j < 5; ++j)
      exps[q.coset_of(elt(i, j))] = {i, j};

  // label-1 edges of the d1 diagram, as exponent pairs
  static const std::map<std::pair<unsigned, unsigned>,
                        std::pair<unsigned, unsigned>>
      edges1 = {{{1, 0}, {1, 0}}, {{4, 0}, {4, 0}}, {{2, 0}, {0, 2}},
                {{3, 0}, {0, 3}}, {{0, 1}, {0, 1}}, {{0, 4}, {0, 4}},
                {{0, 2}, {2, 2}}, {{0, 3}, {3, 3}}, {{1, 1}, {1, 1}},
                {{4, 4}, {4, 4}}, {{2, 2}, {4, 2}}, {{3, 3}, {1, 3}},
                {{2, 1}, {2, 1}}, {{3, 4}, {3, 4}}, {{4, 2}, {1, 2}},
                {{1, 3}, {4, 3}}, {{3, 1}, {3, 1}}, {{2, 4}, {2, 4}},
                {{1, 2}, {3, 2}}, {{4, 3}, {2, 3}}, {{4, 1}, {4, 1}},
                {{1, 4}, {1, 4}}, {{3, 2}, {2, 0}}, {{2, 3}, {3, 0}}};
  DirectedTable d1{"d1", {}}, d2{"d2", {}};
  for (ElementId x = 1; x < r->size(); ++x) {
    auto e = exps[q.coset_of(x)];
    if (e == std::pair<unsigned, unsigned>{0, 0})
      continue;
    auto tgt = edges1.at(e);
    d1.sections[x] = elt(tgt.first, tgt.second);
    if (e == std::pair<unsigned, unsigned>{1, 0})
      d2.sections[x] = gb;
    else if (e == std::pair<unsigned, unsigned>{4, 0})
      d2.sections[x] = r->pow(gb, 4);
  }
  return SpinalSpec("heisenberg-f5", r, {d1, d2});
}

SpinalSpec mf_not_just_insol(long long n) {
  if (n != 5)
    throw Error(ErrorKind::ParamOutOfRange, "mf-not-just-insol supports n = 5");
  // C5 x C5 x Alt(5) on points 1-5, 6-10, 11-15
  unsigned deg = 15;
  auto r = GroupTable::from_permutations(
      deg, {{"e1", cycles1(deg, {{1, 2, 3, 4, 5}})},
            {"e2", cycles1(deg, {{6, 7, 8, 9, 10}})},
            {"s1", cycles1(deg, {{11, 12, 13, 14, 15}})},
            {"s2", cycles1(deg, {{11, 12, 14, 15, 13}})}});
  auto e1 = r->generators()[0], e2 = r->generators()[1];
  auto s1 = r->generators()[2], s2 = r->generators()[3];
  auto q = coset_space(whole_group(r), derived_subgroup(r));
  std::vector<ElementId> es{e1, e2}, ss{s1, s2};
  DirectedTable d{"d", {}};
  for (ElementId x = 1; x < r->size(); ++x) {
    auto c = q.coset_of(x);
    for (unsigned i = 0; i < 2; ++i) {
      auto ei = es[i], en = es[(i + 1) % 2];
      if (c == q.coset_of(ei))
        d.sections[x] = r->mul(ss[i], ei);
      else if (c == q.coset_of(r->pow(ei, 2)))
        d.sections[x] = en;
      else if (c == q.coset_of(r->pow(ei, 3)))
        d.sections[x] = r->pow(en, 4);
      else if (c == q.coset_of(r->pow(ei, 4)))
        d.sections[x] = r->pow(ei, 4);
    }
  }
  return SpinalSpec("mf-not-just-insol", r, {d});
}

SpinalSpec torsion(long long n) {
  if (n < 5 || n > 7)
    throw Error(ErrorKind::ParamOutOfRange, "torsion supports 5 <= n <= 7");
  unsigned N = static_cast<unsigned>(n) + 2, k = static_cast<unsigned>(n);
  auto [x, y] = alt_generators(N, N);
  auto r = GroupTable::from_permutations(N, {{"x", x}, {"y", y}});
  Permutation q0, q1;
  if (k % 2 == 0) {
    q0 = cycles1(N, {range1(1, k), {k + 1, k + 2}});
    q1 = cycles1(N, {range1(1, k - 1), {k, k + 1, k + 2}});
  } else {
    q0 = cycles1(N, {range1(1, k - 3), {k - 2, k - 1, k}, {k + 1, k + 2}});
    q1 = cycles1(N, {range1(1, k - 2), {k - 1, k}, {k + 1, k + 2}});
  }
  auto sigma = cycles1(N, {{1, k + 1}, {2, k + 2}});
  auto lq0 = element_of(*r, q0), lq1 = element_of(*r, q1);
  auto sg = element_of(*r, sigma);
  auto phi = [&](const std::string &name, const Permutation &p) {
    auto e = element_of(*r, p);
    auto es = r->conj(e, sg);
    DirectedTable d{name, {}};
    d.sections[lq0] = e;
    d.sections[r->inv(lq0)] = r->inv(e);
    d.sections[lq1] = es;
    d.sections[r->inv(lq1)] = r->inv(es);
    return d;
  };
  auto [u, v] = alt_generators(k, N);
  auto w = cycles1(N, {{k - 1, k, k + 1}});
  Word tu{Symbol::directed(0)}, tv{Symbol::directed(1)};
  return SpinalSpec("torsion", r, {phi("u", u), phi("v", v), phi("w", w)},
                    {SubgroupDef{"T", {tu, tv}}});
}

SpinalSpec chains(long long n, long long k) {
  if (n < 7 || n % 2 == 0 || n > 9)
    throw Error(ErrorKind::ParamOutOfRange, "chains supports odd 7 <= n <= 9");
  if (k < 7 || k > n || (k % 2 == 0 && k == n))
    throw Error(ErrorKind::ParamOutOfRange, "chains needs 7 <= k <= n");
  unsigned N = static_cast<unsigned>(n), K = static_cast<unsigned>(k);
  auto [x, y] = alt_generators(N, N);
  auto r = GroupTable::from_permutations(N, {{"x", x}, {"y", y}});
  auto s = element_of(*r, cycles1(N, {range1(1, 7)}));
  auto t = element_of(*r, cycles1(N, {{1, 2, 3}, {4, 5, 6}}));
  auto at = [&](const std::string &name, ElementId letter,
                const Permutation &p) {
    DirectedTable d{name, {}};
    d.sections[letter] = element_of(*r, p);
    return d;
  };
  std::vector<DirectedTable> dirs{
      at("a", t, cycles1(N, {{1, 2, 3}})),
      at("b", t, cycles1(N, {range1(3, N)})),
      at("c", s, cycles1(N, {{1, 2, 3}}))};
  if (K % 2)
    dirs.push_back(at("dk", s, cycles1(N, {range1(3, K)})));
  else {
    dirs.push_back(at("dk", s, cycles1(N, {range1(3, K - 1)})));
    dirs.push_back(at("dk~", s, cycles1(N, {range1(4, K)})));
  }
  return SpinalSpec("chains", r, dirs);
}

SpinalSpec no_csp() {
  auto r = alternating_group(5);
  auto c1 = element_of(*r, cycles1(5, {{1, 2, 3}}));
  auto c2 = element_of(*r, cycles1(5, {{3, 4, 5}}));
  auto b1 = element_of(*r, cycles1(5, {{1, 2}, {3, 4}}));
  auto b2 = element_of(*r, cycles1(5, {{1, 5}, {3, 4}}));
  DirectedTable t{"t", {{c1, c1}, {c2, c2}}};
  DirectedTable d{"d", {{c1, b1}, {c2, b2}}};
  Word wt{Symbol::directed(1)}; // names sort as d, t
  return SpinalSpec("no-csp", r, {t, d}, {SubgroupDef{"T", {wt}}});
}

SpinalSpec simple_no_csp() {
  auto r = alternating_group(5);
  auto a = element_of(*r, cycles1(5, {{1, 2, 3}}));
  auto b = element_of(*r, cycles1(5, {{3, 4, 5}}));
  auto s0 = element_of(*r, cycles1(5, {{1, 2, 3}}));
  auto s1 = element_of(*r, cycles1(5, {{1, 2, 3, 4, 5}}));
  DirectedTable d{"d", {{a, s0}, {b, s1}}};
  return SpinalSpec("simple-no-csp", r, {d});
}

SpinalSpec dsk_family() {
  auto r = alternating_group(5);
  std::vector<DirectedTable> dirs;
  for (ElementId s = 1; s < r->size(); ++s)
    for (ElementId k = 1; k < r->size(); ++k) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "d_%02u_%02u", s, k);
      dirs.push_back(DirectedTable{buf, {{s, k}}});
    }
  return SpinalSpec("dsk-family", r, dirs);
}

} // namespace

GroupPtr alternating_group(unsigned n, const std::string &a,
                           const std::string &b) {
  auto [x, y] = alt_generators(n, n);
  return GroupTable::from_permutations(n, {{a, x}, {b, y}});
}

const std::vector<CatalogInfo> &catalog_entries() {
  static const std::vector<CatalogInfo> entries = {
      {"ggs-z4-122", "GGS group over Z/4 with defining vector (1,2,2)", ""},
      {"ggs-z4-110", "GGS group over Z/4 with defining vector (1,1,0)", ""},
      {"ggs-z4-121", "GGS group over Z/4 with defining vector (1,2,1)", ""},
      {"order21", "rooted group of order 21, one directed generator of order 3",
       ""},
      {"heisenberg-f5", "Heisenberg group over F5 with directed d1, d2", "",
       "3 of the 8 listed witness paths have a one-edge slip; corrected "
       "versions replay"},
      {"mf-not-just-insol", "R = C5^2 x Alt(5), D cyclic of order 5", "n=5"},
      {"torsion", "R = Alt(n+2), D = phi(Alt(n+1)), T = phi(Alt(n))",
       "n in [5,7], default 5"},
      {"chains", "R = Alt(n), directed a, b, c, d_k", "n odd in [7,9], k in [7,n]"},
      {"no-csp", "R = Alt(5), D = Alt(4), T = <t>", "",
       "displayed sections of [t, t^(c2 c1^2)] mix d and t; recomputed"},
      {"simple-no-csp", "R = Alt(5), one directed d at letters a, b", ""},
      {"dsk-family", "R = Alt(5), directed d_{s,k} for all s, k != e", ""},
  };
  return entries;
}

SpinalSpec instantiate(const std::string &name, const CatalogParams &params) {
  if (name == "ggs-z4-122" || name == "ggs-z4-110" || name == "ggs-z4-121") {
    with_defaults(params, {});
    std::array<unsigned, 3> e{unsigned(name[7] - '0'), unsigned(name[8] - '0'),
                              unsigned(name[9] - '0')};
    Assumptions as;
    if (name == "ggs-z4-121") {
      as.asserted_periodic = true;
      as.note = "periodic GGS group by the known classification; the sigma "
                "criterion is inconclusive here";
    }
    return ggs_z4(name, e, std::move(as));
  }
  if (name == "order21") {
    with_defaults(params, {});
    return order21();
  }
  if (name == "heisenberg-f5") {
    with_defaults(params, {});
    return heisenberg_f5();
  }
  if (name == "mf-not-just-insol")
    return mf_not_just_insol(with_defaults(params, {{"n", 5}}).at("n"));
  if (name == "torsion")
    return torsion(with_defaults(params, {{"n", 5}}).at("n"));
  if (name == "chains") {
    auto p = with_defaults(params, {{"n", 7}, {"k", -1}});
    return chains(p["n"], p["k"] < 0 ? p["n"] : p["k"]);
  }
  if (name == "no-csp") {
    with_defaults(params, {});
    return no_csp();
  }
  if (name == "simple-no-csp") {
    with_defaults(params, {});
    return simple_no_csp();
  }
  if (name == "dsk-family") {
    with_defaults(params, {});
    return dsk_family();
  }
  throw Error(ErrorKind::UnknownEntry, "no catalog entry named " + name);
}

bool RegressionReport::all_passed() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](auto const &c) { return c.passed; });
}

const std::vector<HeisenbergPath> &heisenberg_listed_paths() {
  static const std::vector<HeisenbergPath> paths = {
      {1, {{1, 0, 1}}},
      {1, {{2, 2, 2}, {1, 4, 2}, {1, 1, 2}, {1, 3, 2}, {1, 2, 0}, {1, 0, 2},
           {3, 0, 1}}},
      {2, {{3, 0, 2}}},
      {2, {{1, 4, 4}, {1, 3, 3}, {1, 2, 1}, {1, 4, 2}, {1, 2, 4}, {1, 4, 3},
           {1, 4, 1}, {1, 3, 2}, {1, 4, 0}, {2, 0, 2}, {1, 0, 1}}},
      {3, {{2, 0, 3}}},
      {3, {{1, 4, 4}, {1, 2, 2}, {1, 2, 1}, {1, 1, 3}, {1, 2, 4}, {1, 1, 2},
           {1, 4, 1}, {1, 2, 3}, {1, 4, 0}, {3, 0, 1}, {1, 0, 3}}},
      {4, {{1, 0, 4}}},
      {4, {{3, 3, 3}, {1, 4, 2}, {1, 4, 3}, {1, 3, 2}, {1, 3, 0}, {1, 0, 2},
           {2, 0, 4}}},
  };
  return paths;
}

const std::vector<HeisenbergPath> &heisenberg_corrected_paths() {
  static const std::vector<HeisenbergPath> paths = [] {
    auto p = heisenberg_listed_paths();
    // a^4 -2-> b -1-> b^2: the listed display swaps b and b^2
    p[3].steps[9] = {2, 0, 1};
    p[3].steps[10] = {1, 0, 2};
    // (b^4)^4 = b, so the loop at b^4 needs label 4; b^2 -> b^4 needs label 3
    p[6].steps[0] = {4, 0, 4};
    p[7].steps[6] = {3, 0, 4};
    return p;
  }();
  return paths;
}

std::uint32_t heisenberg_coset(const SpinalSpec &spec, unsigned i, unsigned j) {
  auto const &r = spec.rooted();
  auto x = r.mul(r.pow(r.generators()[0], i), r.pow(r.generators()[1], j));
  return spec.rooted_ab().coset_of(x);
}

bool replay_heisenberg_path(const SpinalSpec &spec, const HeisenbergPath &p) {
  DTuple d = spec.generator_tuple(0);
  for (auto &x : d)
    x = spec.rooted().pow(x, p.k);
  auto g = build_rab_graph(spec, d);
  auto v = heisenberg_coset(spec, 0, p.k);
  for (auto const &st : p.steps) {
    if (st.label == 0 || st.label >= g.m(v))
      return false;
    auto const &ts = g.targets(v, st.label);
    auto to = heisenberg_coset(spec, st.i, st.j);
    if (std::find(ts.begin(), ts.end(), to) == ts.end())
      return false;
    v = to;
  }
  return true;
}

// --- regressions -----------------------------------------------------------------

namespace {

using Outcome = std::pair<bool, std::string>;

struct Claims {
  RegressionReport rep;

  void check(std::string op, std::string expected, std::string tag,
             const std::function<Outcome()> &f) {
    ClaimResult c{std::move(op), std::move(expected), std::move(tag), false, ""};
    try {
      auto [ok, detail] = f();
      c.passed = ok;
      c.detail = std::move(detail);
    } catch (const std::exception &e) {
      c.detail = std::string("threw: ") + e.what();
    }
    rep.claims.push_back(std::move(c));
  }
};

std::string status_str(const Verdict &v) { return status_name(v.status); }

Outcome status_is(const Verdict &v, Status want) {
  return {v.status == want, status_str(v)};
}

Outcome validates(const SpinalSpec &s) {
  auto rep = validate(s);
  bool ok = rep.gen_holds;
  for (auto const &[name, c] : rep.compatible_generators)
    ok = ok && c;
  return {ok, "gen " + std::string(rep.gen_holds ? "holds" : "fails")};
}

using EdgeSet = std::set<std::tuple<unsigned, unsigned, unsigned>>;

// Edges of a Z/4 GGS graph with cosets written as exponents of a.
EdgeSet z4_edges(const SpinalSpec &s, const RabGraph &g) {
  auto const &r = s.rooted();
  auto a = r.generators()[0];
  std::vector<unsigned> exp(4);
  for (unsigned i = 0; i < 4; ++i)
    exp[s.rooted_ab().coset_of(r.pow(a, i))] = i;
  EdgeSet out;
  for (auto const &e : g.edges())
    out.insert({exp[e.from], e.label, exp[e.to]});
  return out;
}

void ggs_claims(Claims &c, const SpinalSpec &s) {
  auto const &r = s.rooted();
  auto a = r.generators()[0];
  auto g = build_rab_graph(s, s.generator_tuple(0));
  auto vtx = [&](unsigned i) { return s.rooted_ab().coset_of(r.pow(a, i)); };
  c.check("validate", "gen holds, b compatible", "TRIVIAL",
          [&] { return validates(s); });
  if (s.name() == "ggs-z4-122") {
    c.check("graph edges", "(1,2,2) edge set as drawn", "PAPER", [&]() -> Outcome {
      EdgeSet want{{1, 1, 1}, {1, 2, 2}, {1, 3, 2}, {2, 1, 2},
                   {3, 1, 2}, {3, 2, 2}, {3, 3, 1}};
      return {z4_edges(s, g) == want, std::to_string(g.edges().size()) +
                                          " edges"};
    });
    c.check("forking points", "none", "PAPER", [&]() -> Outcome {
      auto f = forking_points(g);
      return {f.witnesses.empty() && f.undecided.empty(),
              std::to_string(f.witnesses.size()) + " found"};
    });
    c.check("periodicity", "Inconclusive", "DERIVED",
            [&] { return status_is(periodicity_certificate(s), Status::Inconclusive); });
    c.check("primary multi-GGS", "Inconclusive, d|_a generates R", "DERIVED",
            [&]() -> Outcome {
              auto v = primary_multi_ggs_check(s, periodicity_evidence(s));
              bool gen = false;
              for (auto const &h : v.hypotheses)
                gen = gen || (h.name == "some d|_x generates R" &&
                              h.outcome == "passed");
              return {v.status == Status::Inconclusive && gen, status_str(v)};
            });
  } else if (s.name() == "ggs-z4-110") {
    c.check("graph edges", "(1,1,0) edge set as drawn", "PAPER", [&]() -> Outcome {
      EdgeSet want{{1, 1, 1}, {1, 2, 1}, {1, 3, 0}, {2, 1, 1},
                   {3, 1, 0}, {3, 2, 1}, {3, 3, 1}};
      return {z4_edges(s, g) == want, std::to_string(g.edges().size()) +
                                          " edges"};
    });
    c.check("forking points", "{a}", "PAPER", [&]() -> Outcome {
      auto f = forking_points(g);
      bool ok = f.witnesses.size() == 1 && f.witnesses[0].vertex == vtx(1) &&
                check_forking_witness(g, f.witnesses[0]);
      return {ok, std::to_string(f.witnesses.size()) + " found"};
    });
    c.check("reach {a}", "{id, a}", "PAPER", [&]() -> Outcome {
      return {reach(g, {vtx(1)}) == CosetSet{vtx(0), vtx(1)}, ""};
    });
    c.check("reach closure {a}", "C4", "PAPER", [&]() -> Outcome {
      auto cl = reach_closure(g, {vtx(1)});
      return {cl.size() == 4, std::to_string(cl.size()) + " cosets"};
    });
    c.check("sigma trace from a^2", "first iterate is all of C4, cycles",
            "DERIVED", [&]() -> Outcome {
              auto v = periodicity_certificate(s);
              for (auto const &t : v.sigma)
                if (t.start == r.pow(a, 2))
                  return {t.iterates.size() > 1 && t.iterates[1].size() == 4 &&
                              t.outcome == SigmaOutcome::Cycled,
                          status_str(v)};
              return {false, "no trace from a^2"};
            });
    c.check("certify-mf", "Inconclusive", "DERIVED",
            [&] { return status_is(certify_mf(s), Status::Inconclusive); });
  } else {
    c.check("periodicity", "Inconclusive", "DERIVED",
            [&] { return status_is(periodicity_certificate(s), Status::Inconclusive); });
    c.check("primary multi-GGS", "Certified via asserted periodicity",
            "DERIVED", [&] {
              return status_is(primary_multi_ggs_check(s, periodicity_evidence(s)),
                               Status::Certified);
            });
  }
}

Outcome sigma_within(const Verdict &v, std::size_t steps) {
  bool ok = v.status == Status::Certified;
  std::size_t worst = 0;
  for (auto const &t : v.sigma) {
    ok = ok && t.outcome == SigmaOutcome::ReachedTrivial && t.steps <= steps;
    worst = std::max(worst, t.steps);
  }
  return {ok, status_str(v) + ", longest trace " + std::to_string(worst)};
}

void order21_claims(Claims &c, const SpinalSpec &s) {
  c.check("instantiate", "|R| = 21, |D| = 3", "PAPER", [&]() -> Outcome {
    auto dg = build_directed_group(s);
    return {s.rooted().size() == 21 && dg.group().size() == 3, ""};
  });
  c.check("validate", "gen holds, d compatible", "TRIVIAL",
          [&] { return validates(s); });
  c.check("certify-mf", "Certified, fork at tR' with paths of length 1 and 2",
          "PAPER", [&]() -> Outcome {
            auto v = certify_mf(s);
            auto t = s.rooted().generators()[1];
            bool ok = v.status == Status::Certified && v.surjection;
            if (ok)
              for (auto const &cl : v.surjection->classes) {
                auto const &f = cl.witness.fork;
                auto la = f.path_a.size(), lb = f.path_b.size();
                ok = ok && f.vertex == s.rooted_ab().coset_of(t) &&
                     std::min(la, lb) == 1 && std::max(la, lb) == 2;
              }
            return {ok, status_str(v)};
          });
  c.check("periodicity", "Certified, traces within 2 steps", "PAPER",
          [&] { return sigma_within(periodicity_certificate(s), 2); });
}

void heisenberg_claims(Claims &c, const SpinalSpec &s) {
  c.check("validate", "gen holds, d1 and d2 compatible", "TRIVIAL",
          [&] { return validates(s); });
  c.check("graph of d1", "25 vertices", "PAPER", [&]() -> Outcome {
    auto g = build_rab_graph(s, s.generator_tuple(0));
    return {g.vertex_count() == 25, std::to_string(g.vertex_count())};
  });
  auto const &listed = heisenberg_listed_paths();
  auto const &fixed = heisenberg_corrected_paths();
  for (std::size_t i = 0; i < listed.size(); ++i) {
    auto label = "path " + std::to_string(i) + " for d1^" +
                 std::to_string(listed[i].k);
    if (listed[i].steps.size() == fixed[i].steps.size() &&
        std::equal(listed[i].steps.begin(), listed[i].steps.end(),
                   fixed[i].steps.begin(), [](auto const &x, auto const &y) {
                     return x.label == y.label && x.i == y.i && x.j == y.j;
                   })) {
      c.check("listed " + label, "replays", "PAPER", [&, i]() -> Outcome {
        return {replay_heisenberg_path(s, listed[i]), ""};
      });
      continue;
    }
    // listed with a slip: the literal one is rejected, the fixed one replays
    c.check("listed " + label, "one edge missing from the graph", "DERIVED",
            [&, i]() -> Outcome {
              return {!replay_heisenberg_path(s, listed[i]), ""};
            });
    c.check("corrected " + label, "replays", "DERIVED", [&, i]() -> Outcome {
      return {replay_heisenberg_path(s, fixed[i]), ""};
    });
  }
  c.check("certify-mf", "Certified", "PAPER",
          [&] { return status_is(certify_mf(s), Status::Certified); });
}

void insol_claims(Claims &c, const SpinalSpec &s) {
  c.check("5-cycles s1, s2", "generate Alt(5)", "DERIVED", [&]() -> Outcome {
    auto const &rp = s.rooted_ptr();
    auto g = subgroup_generated(
        rp, std::vector<ElementId>{rp->generators()[2], rp->generators()[3]});
    return {g.size() == 60, "order " + std::to_string(g.size())};
  });
  c.check("validate", "gen holds, d compatible", "TRIVIAL",
          [&] { return validates(s); });
  c.check("periodicity", "Certified, traces within 2 steps", "PAPER",
          [&] { return sigma_within(periodicity_certificate(s), 2); });
  c.check("certify-mf", "Certified", "PAPER",
          [&] { return status_is(certify_mf(s), Status::Certified); });
}

// Section of w below the first layer when it is a single rooted one.
Outcome layered_witness(const SpinalSpec &s, const LayeredTarget &target,
                        const Word &w, const DirectedGroup *dg,
                        std::optional<std::pair<Letter, ElementId>> expect) {
  LayeredCertificate cert;
  cert.subject = target.subject;
  cert.witness = free_reduce(w, s.rooted());
  cert.normal_closure_full = true;
  std::size_t found = 0;
  for (Letter x = 0; x < s.alphabet_size(); ++x) {
    auto sec = section(s, cert.witness, {x});
    if (is_identity(s, sec))
      continue;
    ++found;
    cert.vertex = x;
    cert.target = top_permutation(s, sec);
  }
  if (found != 1)
    return {false, std::to_string(found) + " nontrivial sections"};
  std::string where = "section " + s.rooted().word(cert.target) + " at " +
                      s.rooted().word(cert.vertex);
  if (expect && (expect->first != cert.vertex || expect->second != cert.target))
    return {false, where};
  return {verify_layered(s, target, cert, dg), where};
}

LayeredCertificate found_layered(const Verdict &v, const std::string &subject) {
  for (auto const &l : v.layered)
    if (l.subject == subject)
      return l;
  throw Error(ErrorKind::MissingLayeredCertificate, "no certificate for " + subject);
}

void torsion_claims(Claims &c, const SpinalSpec &s, long long n) {
  auto const &r = s.rooted();
  c.check("instantiate", "|R| = (n+2)!/2, |D| = (n+1)!/2", "PAPER",
          [&]() -> Outcome {
            std::size_t fr = 1, fd = 1;
            for (long long i = 2; i <= n + 2; ++i)
              fr *= i;
            for (long long i = 2; i <= n + 1; ++i)
              fd *= i;
            auto dg = build_directed_group(s);
            return {r.size() == fr / 2 && dg.group().size() == fd / 2,
                    "|R| = " + std::to_string(r.size()) + ", |D| = " +
                        std::to_string(dg.group().size())};
          });
  c.check("validate", "gen holds, generators compatible", "TRIVIAL",
          [&] { return validates(s); });
  c.check("periodicity", "Certified, traces within 2 steps", "PAPER",
          [&] { return sigma_within(periodicity_certificate(s), 2); });
  auto dg = build_directed_group(s);
  unsigned N = static_cast<unsigned>(n) + 2, k = static_cast<unsigned>(n);
  c.check("listed witness [phi(r), phi(r)^(q0 q1^-1)]",
          "single section [r^sigma, r] at q1", "PAPER", [&]() -> Outcome {
            Permutation q0, q1;
            if (k % 2 == 0) {
              q0 = cycles1(N, {range1(1, k), {k + 1, k + 2}});
              q1 = cycles1(N, {range1(1, k - 1), {k, k + 1, k + 2}});
            } else {
              q0 = cycles1(N, {range1(1, k - 3), {k - 2, k - 1, k},
                               {k + 1, k + 2}});
              q1 = cycles1(N, {range1(1, k - 2), {k - 1, k}, {k + 1, k + 2}});
            }
            auto lq0 = element_of(r, q0), lq1 = element_of(r, q1);
            auto sg = element_of(r, cycles1(N, {{1, k + 1}, {2, k + 2}}));
            // r = u, the first generator of Alt(n)
            auto u = element_of(r, alt_generators(k, N).first);
            Word phi{Symbol::directed(0)};
            auto w = commutator(
                phi, conjugate(phi, {Symbol::rooted(r.mul(lq0, r.inv(lq1)))}, r),
                r);
            auto target = r.commutator(r.conj(u, sg), u);
            return layered_witness(s, special_target(*s.subgroup("T")), w, &dg,
                                   std::pair{lq1, target});
          });
  Verdict mv;
  c.check("certify-maximal T", "Certified", "PAPER", [&] {
    mv = certify_maximal_infinite_index(s, dg, *s.subgroup("T"));
    return status_is(mv, Status::Certified);
  });
  c.check("layered-csp", "Certified (R, D perfect)", "PAPER", [&] {
    auto cert = found_layered(mv, "G");
    return status_is(layered_csp(s, &cert), Status::Certified);
  });
}

void chains_claims(Claims &c, const SpinalSpec &s) {
  auto const &r = s.rooted();
  unsigned n = static_cast<unsigned>(r.permutation(r.identity()).degree());
  c.check("validate", "gen holds, generators compatible", "TRIVIAL",
          [&] { return validates(s); });
  c.check("check_perfect", "R and D perfect", "PAPER",
          [&]() -> Outcome { return {check_perfect(s), ""}; });
  c.check("T D' = D", "holds since D is perfect", "TRIVIAL",
          [&]() -> Outcome { return {check_perfect(s), "D' = D"}; });
  LayeredCertificate cert;
  c.check("listed witness [(cb)^r, cb], r = t s^-1",
          "single section [(3 4 ... n), (1 2 3)] at s", "PAPER",
          [&]() -> Outcome {
            auto sl = element_of(r, cycles1(n, {range1(1, 7)}));
            auto tl = element_of(r, cycles1(n, {{1, 2, 3}, {4, 5, 6}}));
            Word cb{Symbol::directed(*s.directed_index("c")),
                    Symbol::directed(*s.directed_index("b"))};
            auto w = commutator(
                conjugate(cb, {Symbol::rooted(r.mul(tl, r.inv(sl)))}, r), cb, r);
            auto target = r.commutator(element_of(r, cycles1(n, {range1(3, n)})),
                                       element_of(r, cycles1(n, {{1, 2, 3}})));
            auto out = layered_witness(s, whole_group_target(s), w, nullptr,
                                       std::pair{sl, target});
            if (out.first) {
              cert.subject = "G";
              cert.witness = free_reduce(w, r);
              cert.vertex = sl;
              cert.target = target;
              cert.normal_closure_full = true;
            }
            return out;
          });
  c.check("layered-csp", "Certified", "PAPER", [&] {
    return status_is(layered_csp(s, &cert), Status::Certified);
  });
}

void no_csp_claims(Claims &c, const SpinalSpec &s) {
  auto const &r = s.rooted();
  auto dg = build_directed_group(s);
  c.check("instantiate", "|D| = 12", "PAPER", [&]() -> Outcome {
    return {dg.group().size() == 12, std::to_string(dg.group().size())};
  });
  c.check("validate", "gen holds, generators compatible", "TRIVIAL",
          [&] { return validates(s); });
  // the displayed sections mix d and t; the engine recomputes them
  c.check("listed witness [t, t^(c2 c1^2)]", "single rooted section", "DERIVED",
          [&]() -> Outcome {
            auto c1 = element_of(r, cycles1(5, {{1, 2, 3}}));
            auto c2 = element_of(r, cycles1(5, {{3, 4, 5}}));
            Word t{Symbol::directed(*s.directed_index("t"))};
            auto w = commutator(
                t, conjugate(t, {Symbol::rooted(r.mul(c2, r.mul(c1, c1)))}, r),
                r);
            return layered_witness(s, special_target(*s.subgroup("T")), w, &dg,
                                   std::nullopt);
          });
  Verdict mv;
  c.check("certify-maximal T", "Certified", "PAPER", [&] {
    mv = certify_maximal_infinite_index(s, dg, *s.subgroup("T"));
    return status_is(mv, Status::Certified);
  });
  c.check("layered-csp", "Refuted (D = Alt(4) not perfect)", "PAPER", [&] {
    auto cert = found_layered(mv, "G");
    return status_is(layered_csp(s, &cert), Status::Refuted);
  });
  c.check("just-infinite", "Certified", "PAPER", [&] {
    auto cert = found_layered(mv, "G");
    return status_is(just_infinite(s, &cert), Status::Certified);
  });
}

void simple_no_csp_claims(Claims &c, const SpinalSpec &s) {
  auto const &r = s.rooted();
  auto const &tab = s.directed()[0].sections;
  auto a = tab.begin()->first, b = std::next(tab.begin())->first;
  auto s0 = tab.at(a), s1 = tab.at(b);
  auto e = r.identity();
  c.check("letters a, b", "stated inequations hold", "DERIVED",
          [&]() -> Outcome {
            auto q = r.mul(r.inv(a), b);
            bool ok = a != e && b != e && a != b && r.mul(q, q) != e &&
                      r.mul(a, a) != b && r.mul(b, b) != a;
            auto ba = r.mul(b, r.inv(a)), bab = r.mul(ba, b);
            for (auto x : {ba, bab})
              ok = ok && x != e && x != a && x != b;
            return {ok, "a = " + r.word(a) + ", b = " + r.word(b)};
          });
  c.check("s0, s1", "generate R", "DERIVED", [&]() -> Outcome {
    auto g = subgroup_generated(s.rooted_ptr(), std::vector<ElementId>{s0, s1});
    return {g.is_whole(), "order " + std::to_string(g.size())};
  });
  c.check("validate", "gen holds", "TRIVIAL", [&]() -> Outcome {
    return {validate(s).gen_holds, ""};
  });
  LayeredCertificate cert;
  c.check("listed witness [d, d^(b a^-1)]", "single section [s0, s1] at a",
          "PAPER", [&]() -> Outcome {
            Word d{Symbol::directed(0)};
            auto w = commutator(
                d, conjugate(d, {Symbol::rooted(r.mul(b, r.inv(a)))}, r), r);
            auto out = layered_witness(s, whole_group_target(s), w, nullptr,
                                       std::pair{a, r.commutator(s0, s1)});
            if (out.first)
              cert = {"G", free_reduce(w, r), a, r.commutator(s0, s1), true};
            return out;
          });
  c.check("layered-csp", "Refuted (D cyclic)", "PAPER", [&] {
    return status_is(layered_csp(s, &cert), Status::Refuted);
  });
}

void dsk_claims(Claims &c, const SpinalSpec &s) {
  c.check("instantiate", "(|R| - 1)^2 directed generators", "PAPER",
          [&]() -> Outcome {
            auto n = s.rooted().size() - 1;
            return {s.directed().size() == n * n,
                    std::to_string(s.directed().size())};
          });
  c.check("validate", "D over the enumeration cap", "PAPER", [&]() -> Outcome {
    auto rep = validate(s);
    return {rep.gen_holds && !rep.d_order, rep.d_order ? "enumerated" : "cap exceeded"};
  });
}

} // namespace

RegressionReport run_regressions(const std::string &name,
                                 const CatalogParams &params) {
  auto s = instantiate(name, params);
  Claims c;
  c.rep.entry = name;
  if (name.rfind("ggs-z4-", 0) == 0)
    ggs_claims(c, s);
  else if (name == "order21")
    order21_claims(c, s);
  else if (name == "heisenberg-f5")
    heisenberg_claims(c, s);
  else if (name == "mf-not-just-insol")
    insol_claims(c, s);
  else if (name == "torsion")
    torsion_claims(c, s, with_defaults(params, {{"n", 5}}).at("n"));
  else if (name == "chains")
    chains_claims(c, s);
  else if (name == "no-csp")
    no_csp_claims(c, s);
  else if (name == "simple-no-csp")
    simple_no_csp_claims(c, s);
  else if (name == "dsk-family")
    dsk_claims(c, s);
  return c.rep;
}

} // namespace spinal
