#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spinal/certifier.hpp"
#include "spinal/errors.hpp"
#include "spinal/rab_graph.hpp"

using namespace fx;

namespace {

oracle::Perm perm_of(const GroupTable &r, ElementId x) {
  auto im = r.permutation(x).images();
  return {im.begin(), im.end()};
}

ElementId id_of(const GroupTable &r, const oracle::Perm &p) {
  std::vector<std::uint32_t> k(p.begin(), p.end());
  return *r.find(k);
}

ElementId table_value(const SpinalSpec &s, std::uint32_t d, Letter x) {
  auto const &t = s.directed()[d].sections;
  auto f = t.find(x);
  return f == t.end() ? s.rooted().identity() : f->second;
}

// Sigma of a set straight from the formula, on permutations.
RSubset oracle_sigma(const SpinalSpec &s, const RSubset &in) {
  auto const &r = s.rooted();
  auto n = r.permutation(r.identity()).degree();
  std::set<ElementId> out;
  for (auto x : in) {
    std::set<ElementId> cls;
    for (ElementId g = 0; g < r.size(); ++g)
      cls.insert(id_of(r, oracle::compose(
                              oracle::compose(oracle::inverse(perm_of(r, g)),
                                              perm_of(r, x)),
                              perm_of(r, g))));
    for (auto c : cls) {
      auto pc = perm_of(r, c);
      std::vector<oracle::Perm> prods, factors;
      std::size_t ord = 1;
      for (auto p = pc; p != oracle::identity(n); p = oracle::compose(p, pc))
        ++ord;
      for (std::uint32_t d = 0; d < s.directed().size(); ++d) {
        auto prod = oracle::identity(n);
        auto p = pc;
        for (std::size_t i = 1; i < ord; ++i) {
          auto v = perm_of(r, table_value(s, d, id_of(r, p)));
          factors.push_back(v);
          prod = oracle::compose(prod, v);
          p = oracle::compose(p, pc);
        }
        prods.push_back(prod);
      }
      auto a = oracle::closure(n, prods);
      auto b = oracle::derived(oracle::closure(n, factors));
      for (auto const &u : a)
        for (auto const &v : b)
          out.insert(id_of(r, oracle::compose(u, v)));
    }
  }
  return {out.begin(), out.end()};
}

RSubset random_subset(std::size_t n, std::mt19937_64 &rng) {
  RSubset s;
  auto k = 1 + rng() % 3;
  for (std::size_t i = 0; i < k; ++i)
    s.push_back(static_cast<ElementId>(rng() % n));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

const SigmaTrace &trace_from(const Verdict &v, ElementId x) {
  for (auto const &t : v.sigma)
    if (t.start == x)
      return t;
  throw std::runtime_error("no trace");
}

std::string hyp_outcome(const Verdict &v, const std::string &name) {
  for (auto const &h : v.hypotheses)
    if (h.name == name)
      return h.outcome;
  return "";
}

} // namespace

// --- Sigma -------------------------------------------------------------------

TEST(Sigma, Examples) {
  auto o21 = instantiate("order21");
  auto t = directed_generators(o21);
  auto id = o21.rooted().identity();
  EXPECT_EQ(sigma_step(o21, t, {id}), RSubset{id});
  EXPECT_TRUE(sigma_step(o21, t, {}).empty());

  auto tg = rgen(o21, 1);
  auto img = sigma_step(o21, t, {tg});
  auto const &der = o21.rooted_derived();
  for (auto x : img)
    EXPECT_TRUE(der.contains(x));
  EXPECT_EQ(der.size(), 7u);

  auto g = instantiate("ggs-z4-110");
  auto a = rgen(g);
  auto c4 = sigma_step(g, directed_generators(g), {g.rooted().pow(a, 2)});
  EXPECT_EQ(c4.size(), 4u);
}

TEST(SigmaProps, MatchesFormulaOracle) {
  std::mt19937_64 rng(kSeed);
  std::vector<SpinalSpec> specs;
  for (auto name : {"ggs-z4-110", "ggs-z4-122", "order21", "no-csp",
                    "simple-no-csp", "heisenberg-f5"})
    specs.push_back(instantiate(name));
  std::size_t cases = 0;
  for (int it = 0; it < 120; ++it) {
    auto const &s = specs[it % specs.size()];
    auto in = random_subset(s.alphabet_size(), rng);
    ASSERT_EQ(sigma_step(s, directed_generators(s), in), oracle_sigma(s, in))
        << s.name();
    ++cases;
  }
  EXPECT_GE(cases, 100u);
}

TEST(SigmaProps, MonotoneAndFixesIdentity) {
  std::mt19937_64 rng(kSeed);
  std::vector<SpinalSpec> specs;
  for (auto name : {"order21", "heisenberg-f5", "no-csp", "torsion",
                    "mf-not-just-insol"})
    specs.push_back(instantiate(name));
  std::vector<SigmaMap> maps;
  for (auto const &s : specs)
    maps.emplace_back(s, directed_generators(s));
  for (int it = 0; it < 150; ++it) {
    auto const &m = maps[it % maps.size()];
    auto n = m.spec().alphabet_size();
    auto small = random_subset(n, rng);
    auto big = small;
    for (int k = 0; k < 3; ++k)
      big.push_back(static_cast<ElementId>(rng() % n));
    std::sort(big.begin(), big.end());
    big.erase(std::unique(big.begin(), big.end()), big.end());
    auto a = m.step(small), b = m.step(big);
    ASSERT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    ASSERT_EQ(m.step({0}), RSubset{0});
  }
}

TEST(Sigma, TraceOutcomes) {
  auto g = instantiate("ggs-z4-110");
  SigmaMap m(g, directed_generators(g));
  auto a = rgen(g);
  auto tr = sigma_trace(m, g.rooted().pow(a, 2), 10);
  EXPECT_EQ(tr.outcome, SigmaOutcome::Cycled);
  EXPECT_EQ(tr.iterates[1].size(), 4u);
  EXPECT_EQ(tr.cycle_at.size(), 4u);
  for (std::size_t i = 0; i + 1 < tr.iterates.size(); ++i)
    EXPECT_EQ(tr.iterates[i + 1], m.step(tr.iterates[i]));

  auto tb = sigma_trace(m, a, 1);
  EXPECT_EQ(tb.outcome, SigmaOutcome::BudgetExceeded);
  EXPECT_EQ(sigma_trace(m, 0, 0).outcome, SigmaOutcome::ReachedTrivial);
}

// --- periodicity and MF --------------------------------------------------------

TEST(Periodicity, Examples) {
  auto o21 = instantiate("order21");
  auto v = periodicity_certificate(o21);
  EXPECT_EQ(v.status, Status::Certified);
  EXPECT_EQ(v.theorem, "stabilised-nucleus");
  for (auto const &t : v.sigma) {
    EXPECT_EQ(t.outcome, SigmaOutcome::ReachedTrivial);
    EXPECT_LE(t.steps, 2u);
  }

  auto tor = instantiate("torsion");
  auto vt = periodicity_certificate(tor);
  EXPECT_EQ(vt.status, Status::Certified);
  for (auto const &t : vt.sigma)
    EXPECT_LE(t.steps, 2u);

  auto g = instantiate("ggs-z4-110");
  auto vg = periodicity_certificate(g);
  EXPECT_EQ(vg.status, Status::Inconclusive);
  auto const &tr = trace_from(vg, g.rooted().pow(rgen(g), 2));
  EXPECT_EQ(tr.iterates[1].size(), 4u);
  EXPECT_EQ(tr.outcome, SigmaOutcome::Cycled);
}

TEST(CertifyMf, Examples) {
  auto o21 = instantiate("order21");
  auto v = certify_mf(o21);
  ASSERT_EQ(v.status, Status::Certified);
  ASSERT_TRUE(v.surjection);
  EXPECT_EQ(v.surjection->modulus, 3u);
  auto tcoset = o21.rooted_ab().coset_of(rgen(o21, 1));
  for (auto const &c : v.surjection->classes) {
    EXPECT_EQ(c.witness.fork.vertex, tcoset);
    auto la = c.witness.fork.path_a.size(), lb = c.witness.fork.path_b.size();
    EXPECT_EQ(std::min(la, lb), 1u);
    EXPECT_EQ(std::max(la, lb), 2u);
  }

  EXPECT_EQ(certify_mf(instantiate("heisenberg-f5")).status, Status::Certified);

  auto g = instantiate("ggs-z4-110");
  auto vg = certify_mf(g);
  EXPECT_EQ(vg.status, Status::Inconclusive);
  EXPECT_EQ(hyp_outcome(vg, "stabilised nucleus is D"), "failed");
  EXPECT_FALSE(vg.surjection);
}

TEST(CertifyMf, NeverRefuted) {
  for (auto name : {"ggs-z4-122", "ggs-z4-110", "ggs-z4-121", "order21",
                    "no-csp", "simple-no-csp", "torsion", "dsk-family"}) {
    auto s = instantiate(name);
    EXPECT_NE(certify_mf(s).status, Status::Refuted) << name;
  }
}

TEST(CertifyMf, BudgetSurfacesAsInconclusive) {
  auto s = instantiate("dsk-family");
  auto v = certify_mf(s);
  EXPECT_EQ(v.status, Status::Inconclusive);
  EXPECT_EQ(hyp_outcome(v, "D enumerable"), "budget-exceeded");
}

TEST(CertifyMf, AssertedPeriodicityIsRecorded) {
  auto s = instantiate("ggs-z4-121");
  auto v = certify_mf(s);
  EXPECT_NE(v.status, Status::Refuted);
  ASSERT_TRUE(v.asserted_periodic);
  EXPECT_EQ(*v.asserted_periodic, s.assumptions().note);
  EXPECT_NE(verdict_json(s, v).find(s.assumptions().note), std::string::npos);
}

TEST(CertifyMf, ThreadCountDoesNotChangeReport) {
  for (auto name : {"order21", "heisenberg-f5", "ggs-z4-110"}) {
    auto s = instantiate(name);
    Caps one, four;
    four.threads = 4;
    EXPECT_EQ(verdict_json(s, certify_mf(s, one)),
              verdict_json(s, certify_mf(s, four)))
        << name;
  }
}

TEST(PrimaryMultiGgs, Examples) {
  auto s121 = instantiate("ggs-z4-121");
  auto ev = periodicity_evidence(s121);
  EXPECT_FALSE(ev.sigma_certified);
  EXPECT_TRUE(ev.asserted);
  auto v = primary_multi_ggs_check(s121, ev);
  EXPECT_EQ(v.status, Status::Certified);
  EXPECT_EQ(hyp_outcome(v, "periodic"), "asserted");

  auto s122 = instantiate("ggs-z4-122");
  auto v2 = primary_multi_ggs_check(s122, periodicity_evidence(s122));
  EXPECT_EQ(v2.status, Status::Inconclusive);
  EXPECT_EQ(hyp_outcome(v2, "some d|_x generates R"), "passed");

  auto o21 = instantiate("order21");
  try {
    primary_multi_ggs_check(o21, periodicity_evidence(o21));
    FAIL() << "expected NotPrimaryCyclic";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPrimaryCyclic);
  }
}

// --- layered, maximality, CSP ---------------------------------------------------

TEST(Layered, GivenWitness) {
  auto s = instantiate("simple-no-csp");
  auto const &r = s.rooted();
  auto const &tab = s.directed()[0].sections;
  auto a = tab.begin()->first, b = std::next(tab.begin())->first;
  Word d{Dg(0)};
  auto w = free_reduce(
      commutator(d, conjugate(d, {R(r.mul(b, r.inv(a)))}, r), r), r);
  auto target = r.commutator(tab.at(a), tab.at(b));
  LayeredCertificate c{"G", w, a, target, true};
  EXPECT_TRUE(verify_layered(s, whole_group_target(s), c));

  auto dg = build_directed_group(s);
  auto v = check_layered(s, dg, whole_group_target(s), c);
  EXPECT_EQ(v.status, Status::Certified);

  auto wrong = c;
  wrong.vertex = b;
  EXPECT_FALSE(verify_layered(s, whole_group_target(s), wrong));
  wrong = c;
  wrong.witness = d;
  EXPECT_FALSE(verify_layered(s, whole_group_target(s), wrong));
  EXPECT_EQ(check_layered(s, dg, whole_group_target(s), wrong).status,
            Status::Inconclusive);
}

TEST(Layered, SearchFindsWitnesses) {
  auto s = instantiate("no-csp");
  auto dg = build_directed_group(s);
  auto vg = check_layered(s, dg, whole_group_target(s), std::nullopt);
  ASSERT_EQ(vg.status, Status::Certified);
  auto vt = check_layered(s, dg, special_target(*s.subgroup("T")), std::nullopt);
  ASSERT_EQ(vt.status, Status::Certified);
  EXPECT_TRUE(verify_layered(s, special_target(*s.subgroup("T")),
                             vt.layered.front(), &dg));
  // the witness for T uses only t
  for (auto const &sym : vt.layered.front().witness)
    if (!sym.is_rooted())
      EXPECT_EQ(s.directed()[sym.id].name, "t");
}

TEST(Layered, TinyBudgetIsReported) {
  auto s = instantiate("no-csp");
  auto dg = build_directed_group(s);
  auto v = check_layered(s, dg, whole_group_target(s), std::nullopt, 3);
  EXPECT_EQ(v.status, Status::Inconclusive);
  EXPECT_TRUE(v.budget_exceeded);
}

TEST(Maximality, NoCsp) {
  auto s = instantiate("no-csp");
  auto dg = build_directed_group(s);
  auto v = certify_maximal_infinite_index(s, dg, *s.subgroup("T"));
  ASSERT_EQ(v.status, Status::Certified);
  ASSERT_TRUE(v.maximality);
  EXPECT_EQ(v.maximality->d_order, 12u);
  EXPECT_EQ(v.maximality->t_order, 3u);
  EXPECT_EQ(v.maximality->t_dprime_order, 12u);
  EXPECT_TRUE(v.maximality->maximal);
  EXPECT_EQ(v.layered.size(), 2u);
}

TEST(Maximality, WholeDIsRefuted) {
  auto s = instantiate("no-csp");
  auto dg = build_directed_group(s);
  SubgroupDef all{"D", {{Dg(0)}, {Dg(1)}}};
  auto v = certify_maximal_infinite_index(s, dg, all);
  EXPECT_EQ(v.status, Status::Refuted);
  EXPECT_EQ(hyp_outcome(v, "T proper"), "failed");
}

TEST(Maximality, ObstructionRefutes) {
  // T = <d> in no-csp: d^D D' is the Klein four group, not D
  auto s = instantiate("no-csp");
  auto dg = build_directed_group(s);
  SubgroupDef td{"Td", {{Dg(*s.directed_index("d"))}}};
  auto v = certify_maximal_infinite_index(s, dg, td);
  EXPECT_EQ(v.status, Status::Refuted);
  EXPECT_EQ(hyp_outcome(v, "T^D D' = D"), "failed");
}

TEST(Csp, Examples) {
  auto s = instantiate("no-csp");
  try {
    layered_csp(s, nullptr);
    FAIL() << "expected MissingLayeredCertificate";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingLayeredCertificate);
  }
  EXPECT_THROW(just_infinite(s, nullptr), Error);

  auto dg = build_directed_group(s);
  auto lg = check_layered(s, dg, whole_group_target(s), std::nullopt);
  ASSERT_EQ(lg.status, Status::Certified);
  auto c = lg.layered.front();
  EXPECT_EQ(layered_csp(s, &c).status, Status::Refuted);
  EXPECT_EQ(just_infinite(s, &c).status, Status::Certified);
  EXPECT_FALSE(check_perfect(s));

  auto bad = c;
  bad.witness = {Dg(0)};
  EXPECT_EQ(layered_csp(s, &bad).status, Status::Inconclusive);
}

TEST(Csp, PerfectEntries) {
  EXPECT_TRUE(check_perfect(instantiate("torsion")));
  EXPECT_TRUE(check_perfect(instantiate("chains")));
  EXPECT_FALSE(check_perfect(instantiate("simple-no-csp")));
  EXPECT_FALSE(check_perfect(instantiate("order21")));
}

namespace {

// G acting on the second layer, as permutations of X^2 (point x*n + y).
GroupPtr depth_two_quotient(const SpinalSpec &s, std::size_t cap) {
  auto const &r = s.rooted();
  auto n = static_cast<unsigned>(r.size());
  std::vector<std::pair<std::string, Permutation>> gens;
  for (std::size_t i = 0; i < r.generators().size(); ++i) {
    std::vector<std::uint32_t> im(n * n);
    for (unsigned x = 0; x < n; ++x)
      for (unsigned y = 0; y < n; ++y)
        im[x * n + y] = r.mul(r.generators()[i], x) * n + y;
    gens.emplace_back("r" + std::to_string(i), Permutation(im));
  }
  for (std::uint32_t d = 0; d < s.directed().size(); ++d) {
    std::vector<std::uint32_t> im(n * n);
    for (unsigned x = 0; x < n; ++x)
      for (unsigned y = 0; y < n; ++y)
        im[x * n + y] =
            x == r.identity() ? x * n + y : x * n + r.mul(table_value(s, d, x), y);
    gens.emplace_back("d" + std::to_string(d), Permutation(im));
  }
  return GroupTable::from_permutations(n * n, gens, cap);
}

} // namespace

// Only the Z/4 GGS entries have an enumerable second-layer quotient; for
// perfect R every layered entry gives a perfect quotient, D perfect or not.
TEST(Csp, CheckPerfectAgainstDepthTwoQuotient) {
  for (auto name : {"ggs-z4-122", "ggs-z4-110", "ggs-z4-121"}) {
    auto s = instantiate(name);
    auto q = depth_two_quotient(s, 100000);
    EXPECT_EQ(check_perfect(s), is_perfect(q)) << name;
  }
}

// --- reports and replay ---------------------------------------------------------

TEST(Report, FieldOrder) {
  auto s = instantiate("order21");
  auto j = verdict_json(s, certify_mf(s));
  auto pos = [&](const char *k) { return j.find(std::string("\"") + k + "\""); };
  EXPECT_LT(pos("status"), pos("theorem"));
  EXPECT_LT(pos("theorem"), pos("hypotheses"));
  EXPECT_LT(pos("hypotheses"), pos("witnesses"));
  EXPECT_LT(pos("witnesses"), pos("caps"));
  EXPECT_EQ(j.find("threads"), std::string::npos);
  EXPECT_EQ(j, verdict_json(s, certify_mf(s)));
  EXPECT_NE(verdict_text(s, certify_mf(s)).find("Certified"), std::string::npos);
}

TEST(Replay, CertifiedVerdictsReplay) {
  std::vector<std::pair<SpinalSpec, Verdict>> runs;
  for (auto name : {"order21", "heisenberg-f5", "mf-not-just-insol"}) {
    auto s = instantiate(name);
    auto v = certify_mf(s);
    runs.emplace_back(s, v);
    runs.emplace_back(s, periodicity_certificate(s));
  }
  auto nc = instantiate("no-csp");
  auto dg = build_directed_group(nc);
  auto mv = certify_maximal_infinite_index(nc, dg, *nc.subgroup("T"));
  runs.emplace_back(nc, mv);
  runs.emplace_back(nc, just_infinite(nc, &mv.layered.front()));
  runs.emplace_back(nc, layered_csp(nc, &mv.layered.front()));
  auto g121 = instantiate("ggs-z4-121");
  runs.emplace_back(g121,
                    primary_multi_ggs_check(g121, periodicity_evidence(g121)));
  runs.emplace_back(nc, check_layered(nc, dg, special_target(*nc.subgroup("T")),
                                      std::nullopt));
  for (auto const &[s, v] : runs)
    EXPECT_TRUE(replay(s, v)) << s.name() << " " << v.theorem;
}

TEST(Replay, TamperedVerdictsFail) {
  auto s = instantiate("order21");
  auto v = certify_mf(s);
  auto t = v;
  t.surjection->classes.front().witness.fork.path_a.push_back(1);
  EXPECT_FALSE(replay(s, t));
  t = v;
  t.hypotheses.back().detail += "!";
  EXPECT_FALSE(replay(s, t));

  auto nc = instantiate("no-csp");
  auto dg = build_directed_group(nc);
  auto mv = certify_maximal_infinite_index(nc, dg, *nc.subgroup("T"));
  auto bad = mv;
  bad.layered.back().target = nc.rooted().identity();
  EXPECT_FALSE(replay(nc, bad));
  bad = mv;
  bad.theorem = "nonsense";
  EXPECT_FALSE(replay(nc, bad));
}
