#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "spinal/errors.hpp"

using namespace spinal;
using namespace fx;

namespace {

GroupPtr z4() {
  return GroupTable::from_permutations(4, {{"a", cycles1(4, {{1, 2, 3, 4}})}});
}

} // namespace

TEST(SpinalSpec, GenHoldsForGgs122) {
  auto s = instantiate("ggs-z4-122");
  auto rep = validate(s);
  EXPECT_TRUE(rep.gen_holds);
  EXPECT_EQ(rep.reached_order, 4u);
  EXPECT_EQ(rep.d_order, 4u);
}

TEST(SpinalSpec, GenFailsForSquareTable) {
  auto r = z4();
  auto a2 = r->pow(r->generators()[0], 2);
  DirectedTable b{"b", {}};
  for (ElementId x = 1; x < 4; ++x)
    b.sections[x] = a2;
  SpinalSpec s("sq", r, {b});
  auto rep = validate(s);
  EXPECT_FALSE(rep.gen_holds);
  EXPECT_EQ(rep.reached_order, 2u);
  EXPECT_FALSE(rep.notes.empty());
}

TEST(SpinalSpec, Order21) {
  auto s = instantiate("order21");
  EXPECT_EQ(s.alphabet_size(), 21u);
  EXPECT_EQ(s.rooted_derived().size(), 7u);
  auto rep = validate(s);
  EXPECT_TRUE(rep.gen_holds);
  EXPECT_EQ(rep.d_order, 3u);
  ASSERT_EQ(rep.compatible_generators.size(), 1u);
  EXPECT_TRUE(rep.compatible_generators[0].second);
}

TEST(SpinalSpec, Order21PerturbedIsNotCompatible) {
  auto s = instantiate("order21");
  auto const &r = s.rooted();
  auto a = r.generators()[0], t = r.generators()[1];
  auto ta = r.mul(t, a);
  // same R'-coset as t
  ASSERT_EQ(s.rooted_ab().coset_of(ta), s.rooted_ab().coset_of(t));
  auto tab = s.directed()[0];
  ASSERT_EQ(tab.sections.at(t), r.conj(t, a));
  tab.sections[ta] = r.mul(t, t);
  // oracle: t^a lies in tR', t^2 does not
  EXPECT_EQ(s.rooted_ab().coset_of(r.conj(t, a)), s.rooted_ab().coset_of(t));
  EXPECT_NE(s.rooted_ab().coset_of(r.mul(t, t)), s.rooted_ab().coset_of(t));
  SpinalSpec p("perturbed", s.rooted_ptr(), {tab});
  EXPECT_FALSE(is_compatible(p, p.generator_tuple(0)));
}

TEST(SpinalSpec, AbelianRootedAlwaysCompatible) {
  for (auto name : {"ggs-z4-122", "ggs-z4-110", "ggs-z4-121"}) {
    auto s = instantiate(name);
    EXPECT_TRUE(is_compatible(s, s.generator_tuple(0))) << name;
  }
}

TEST(SpinalSpec, DirectedGroupOrders) {
  auto nc = instantiate("no-csp");
  auto d = build_directed_group(nc);
  EXPECT_EQ(d.table->size(), 12u);
  EXPECT_FALSE(is_perfect(d.table));
  EXPECT_EQ(d.derived.size(), 4u);

  auto tor = instantiate("torsion", {{"n", 5}});
  EXPECT_EQ(tor.alphabet_size(), 2520u);
  auto dt = build_directed_group(tor);
  EXPECT_EQ(dt.table->size(), 360u);
  EXPECT_TRUE(is_perfect(dt.table));
}

TEST(SpinalSpec, ConjugacyClassInD) {
  auto nc = instantiate("no-csp");
  auto d = build_directed_group(nc);
  auto t = d.id_of(nc.generator_tuple(*nc.directed_index("t")));
  EXPECT_EQ(conjugacy_class_in_D(d, t).size(), 4u);
  EXPECT_EQ(conjugacy_class_in_D(d, d.table->identity()),
            std::vector<ElementId>{d.table->identity()});
  auto g = instantiate("ggs-z4-110");
  auto dg = build_directed_group(g);
  for (ElementId x = 0; x < dg.table->size(); ++x)
    EXPECT_EQ(conjugacy_class_in_D(dg, x).size(), 1u);
}

TEST(SpinalSpec, RejectsEntryAtE) {
  auto r = z4();
  DirectedTable b{"b", {{0, r->generators()[0]}}};
  EXPECT_THROW(SpinalSpec("bad", r, {b}), Error);
  DirectedTable a{"a", {{1, 1}}};
  EXPECT_THROW(SpinalSpec("clash", r, {a}), Error);
}

TEST(SpinalSpec, SpecialSubgroups) {
  auto nc = instantiate("no-csp");
  auto d = build_directed_group(nc);
  auto t = special_subgroup(nc, d, *nc.subgroup("T"));
  EXPECT_EQ(t.t.size(), 3u);
  EXPECT_TRUE(t.gen_holds);

  auto tor = instantiate("torsion");
  auto dt = build_directed_group(tor);
  auto tt = special_subgroup(tor, dt, *tor.subgroup("T"));
  EXPECT_EQ(tt.t.size(), 60u);
  EXPECT_TRUE(tt.gen_holds);
}

TEST(SpinalSpec, CatalogEntriesValidate) {
  for (auto const &e : catalog_entries()) {
    if (e.name == "dsk-family" || e.name == "chains")
      continue;
    auto s = instantiate(e.name);
    auto rep = validate(s);
    EXPECT_TRUE(rep.gen_holds) << e.name;
    EXPECT_TRUE(rep.d_order.has_value()) << e.name;
  }
}

TEST(SpinalSpec, CatalogErrors) {
  EXPECT_THROW(instantiate("nope"), Error);
  try {
    instantiate("torsion", {{"n", 3}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParamOutOfRange);
  }
  try {
    instantiate("order21", {{"n", 3}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParamOutOfRange);
  }
}

TEST(SpinalSpec, ChainsDefinitionOnly) {
  auto s = instantiate("chains");
  auto rep = validate(s, 200000);
  EXPECT_TRUE(rep.gen_holds);
  EXPECT_FALSE(rep.d_order.has_value());
  auto blocks = directed_blocks(s);
  std::size_t total = 1;
  for (auto const &b : blocks) {
    total *= b.order;
    EXPECT_TRUE(b.perfect);
  }
  // Alt(7) x Alt(7)
  EXPECT_EQ(total, 2520u * 2520u);
}

TEST(SpinalSpec, DskFamilyExceedsCap) {
  auto s = instantiate("dsk-family");
  EXPECT_EQ(s.directed().size(), 59u * 59u);
  auto rep = validate(s, 100000);
  EXPECT_TRUE(rep.gen_holds);
  EXPECT_FALSE(rep.d_order.has_value());
}

TEST(SpinalSpecProps, CompatibleClosedUnderProducts) {
  std::mt19937_64 rng(kSeed);
  std::vector<SpinalSpec> bases{instantiate("order21"),
                                instantiate("heisenberg-f5"),
                                instantiate("no-csp")};
  int cases = 0;
  for (int it = 0; it < 120; ++it) {
    auto const &base = bases[it % bases.size()];
    auto const &r = base.rooted();
    auto const &ab = base.rooted_ab();
    auto random_compatible = [&](const std::string &name) {
      DirectedTable t{name, {}};
      for (std::uint32_t c = 0; c < ab.size(); ++c) {
        auto target = rng() % ab.size();
        auto const &vals = ab.members(static_cast<std::uint32_t>(target));
        for (auto x : ab.members(c))
          if (x != base.root_letter())
            t.sections[x] = vals[rng() % vals.size()];
      }
      return t;
    };
    SpinalSpec s("rand", base.rooted_ptr(),
                 {random_compatible("p"), random_compatible("q")});
    auto p = s.generator_tuple(0), q = s.generator_tuple(1);
    ASSERT_TRUE(is_compatible(s, p));
    ASSERT_TRUE(is_compatible(s, q));
    EXPECT_TRUE(is_compatible(s, s.tuple_mul(p, q)));
    EXPECT_TRUE(is_compatible(s, s.tuple_inv(p)));
    // commutators have values in R'
    DTuple c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      c[i] = r.commutator(p[i], q[i]);
      EXPECT_TRUE(base.rooted_derived().contains(c[i]));
    }
    EXPECT_TRUE(is_compatible(s, c));
    EXPECT_TRUE(is_compatible(s, s.tuple_mul(p, c)));
    ++cases;
  }
  EXPECT_GE(cases, 100);
}

TEST(SpinalSpecProps, TablesModRConstantOnDCosets) {
  for (auto name : {"order21", "no-csp", "mf-not-just-insol"}) {
    auto s = instantiate(name);
    auto d = build_directed_group(s);
    auto const &ab = s.rooted_ab();
    for (std::uint32_t c = 0; c < d.ab.size(); ++c) {
      auto const &mem = d.ab.members(c);
      auto first = d.tuple(mem[0]);
      for (auto m : mem) {
        auto t = d.tuple(m);
        for (std::size_t i = 0; i < t.size(); ++i)
          ASSERT_EQ(ab.coset_of(t[i]), ab.coset_of(first[i])) << name;
      }
    }
  }
}

TEST(SpinalSpecProps, GeneratorSectionsRoundTrip) {
  for (auto name : {"ggs-z4-110", "order21", "heisenberg-f5", "no-csp"}) {
    auto s = instantiate(name);
    for (std::uint32_t i = 0; i < s.directed().size(); ++i) {
      Word d{Dg(i)};
      EXPECT_EQ(section(s, d, {s.root_letter()}), d);
      for (Letter x = 1; x < s.alphabet_size(); ++x) {
        auto v = s.value_at(s.generator_tuple(i), x);
        Word expect;
        if (v != s.rooted().identity())
          expect.push_back(R(v));
        EXPECT_EQ(section(s, d, {x}), expect) << name;
      }
    }
  }
}
