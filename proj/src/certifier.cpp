#include "spinal/certifier.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spinal/errors.hpp"
#include "spinal/spec_io.hpp"

namespace spinal {

using nlohmann::ordered_json;

const char *status_name(Status s) {
  switch (s) {
  case Status::Certified: return "Certified";
  case Status::Refuted: return "Refuted";
  case Status::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<DTuple> directed_generators(const SpinalSpec &spec) {
  std::vector<DTuple> t;
  for (std::uint32_t i = 0; i < spec.directed().size(); ++i)
    t.push_back(spec.generator_tuple(i));
  return t;
}

// --- Sigma -------------------------------------------------------------------

SigmaMap::SigmaMap(const SpinalSpec &spec, std::vector<DTuple> t)
  : spec_(&spec) {
  auto const &rp = spec.rooted_ptr();
  auto const &r = *rp;
  auto classes = conjugacy_classes(whole_group(rp));
  class_of_.assign(r.size(), 0);
  // keyed on (factor set, products): the subgroup only depends on these
  std::map<std::pair<RSubset, RSubset>, RSubset> memo;
  for (std::uint32_t ci = 0; ci < classes.size(); ++ci) {
    auto const &cls = classes[ci];
    reps_.push_back(cls.front());
    std::vector<bool> mask(r.size(), false);
    mask[r.identity()] = true;
    for (auto s : cls) {
      class_of_[s] = ci;
      auto o = r.order(s);
      std::set<ElementId> factors;
      RSubset prods;
      for (auto const &d : t) {
        ElementId prod = r.identity(), x = s;
        for (std::size_t i = 1; i < o; ++i) {
          auto v = spec.value_at(d, x);
          factors.insert(v);
          prod = r.mul(prod, v);
          x = r.mul(x, s);
        }
        prods.push_back(prod);
      }
      std::sort(prods.begin(), prods.end());
      prods.erase(std::unique(prods.begin(), prods.end()), prods.end());
      std::pair<RSubset, RSubset> key{{factors.begin(), factors.end()}, prods};
      auto it = memo.find(key);
      if (it == memo.end()) {
        auto b = derived_subgroup(subgroup_generated(rp, key.first));
        auto gens = prods;
        gens.insert(gens.end(), b.generators().begin(), b.generators().end());
        it = memo.emplace(key, subgroup_generated(rp, gens).members()).first;
      }
      for (auto x : it->second)
        mask[x] = true;
    }
    RSubset out;
    for (ElementId x = 0; x < r.size(); ++x)
      if (mask[x])
        out.push_back(x);
    per_class_.push_back(std::move(out));
  }
}

RSubset SigmaMap::step(const RSubset &s) const {
  std::vector<bool> done(per_class_.size(), false);
  std::vector<bool> mask(spec_->alphabet_size(), false);
  bool any = false;
  for (auto r : s) {
    auto c = class_of_[r];
    if (done[c])
      continue;
    done[c] = true;
    any = true;
    for (auto x : per_class_[c])
      mask[x] = true;
  }
  RSubset out;
  if (!any)
    return out;
  for (ElementId x = 0; x < mask.size(); ++x)
    if (mask[x])
      out.push_back(x);
  return out;
}

RSubset sigma_step(const SpinalSpec &spec, const std::vector<DTuple> &t,
                   const RSubset &s) {
  return SigmaMap(spec, t).step(s);
}

SigmaTrace sigma_trace(const SigmaMap &sigma, ElementId start,
                       std::size_t max_iter) {
  SigmaTrace tr;
  tr.start = start;
  tr.iterates.push_back({start});
  RSubset trivial{sigma.spec().rooted().identity()};
  std::set<RSubset> seen{tr.iterates.back()};
  if (tr.iterates.back() == trivial) {
    tr.outcome = SigmaOutcome::ReachedTrivial;
    return tr;
  }
  for (std::size_t n = 1; n <= max_iter; ++n) {
    auto next = sigma.step(tr.iterates.back());
    tr.iterates.push_back(next);
    if (next == trivial) {
      tr.outcome = SigmaOutcome::ReachedTrivial;
      tr.steps = n;
      return tr;
    }
    if (!seen.insert(next).second) {
      tr.outcome = SigmaOutcome::Cycled;
      tr.cycle_at = next;
      return tr;
    }
  }
  tr.outcome = SigmaOutcome::BudgetExceeded;
  return tr;
}

namespace {

const char *outcome_name(SigmaOutcome o) {
  switch (o) {
  case SigmaOutcome::ReachedTrivial: return "ReachedTrivial";
  case SigmaOutcome::Cycled: return "Cycled";
  case SigmaOutcome::BudgetExceeded: return "BudgetExceeded";
  }
  return "";
}

std::size_t default_sigma_iter(const SpinalSpec &spec, std::size_t given) {
  return given ? given : spec.alphabet_size() + 2;
}

} // namespace

Verdict periodicity_certificate(const SpinalSpec &spec,
                                const std::vector<DTuple> &t,
                                std::size_t max_iter) {
  Verdict v;
  v.theorem = "stabilised-nucleus";
  v.caps.sigma_max_iter = max_iter;
  max_iter = default_sigma_iter(spec, max_iter);
  SigmaMap sigma(spec, t);
  std::size_t longest = 0;
  const SigmaTrace *bad = nullptr;
  for (auto r : sigma.class_reps())
    v.sigma.push_back(sigma_trace(sigma, r, max_iter));
  for (auto const &tr : v.sigma) {
    if (tr.outcome != SigmaOutcome::ReachedTrivial) {
      bad = &tr;
      break;
    }
    longest = std::max(longest, tr.steps);
  }
  auto const &r = spec.rooted();
  if (!bad) {
    v.status = Status::Certified;
    v.hypotheses.push_back(
        {"sigma-eventually-trivial", "passed",
         "all " + std::to_string(v.sigma.size()) +
             " conjugacy classes reach {id} within " + std::to_string(longest) +
             " steps"});
  } else {
    v.status = Status::Inconclusive;
    std::string d = "trace from " + r.word(bad->start) + " ";
    if (bad->outcome == SigmaOutcome::Cycled)
      d += "cycles at a subset of size " + std::to_string(bad->cycle_at.size());
    else
      d += "did not settle within " + std::to_string(max_iter) + " steps";
    v.budget_exceeded = bad->outcome == SigmaOutcome::BudgetExceeded;
    v.hypotheses.push_back({"sigma-eventually-trivial",
                            v.budget_exceeded ? "budget-exceeded" : "failed",
                            d});
  }
  return v;
}

Verdict periodicity_certificate(const SpinalSpec &spec, const Caps &caps) {
  auto v = periodicity_certificate(spec, directed_generators(spec),
                                   caps.sigma_max_iter);
  v.caps = caps;
  return v;
}

// --- MF ----------------------------------------------------------------------

Verdict certify_mf(const SpinalSpec &spec, const Caps &caps) {
  Verdict v;
  v.theorem = "mf-filling";
  v.caps = caps;
  v.status = Status::Inconclusive;
  auto hyp = [&](std::string name, std::string outcome, std::string detail) {
    v.hypotheses.push_back({std::move(name), std::move(outcome),
                            std::move(detail)});
  };

  DirectedGroup dg;
  try {
    dg = build_directed_group(spec, caps.d_cap);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::BudgetExceeded)
      throw;
    v.budget_exceeded = true;
    hyp("D enumerable", "budget-exceeded",
        "more than " + std::to_string(caps.d_cap) + " elements");
    return v;
  }
  auto const &d = dg.group();
  hyp("D enumerable", "passed", "|D| = " + std::to_string(d.size()));

  for (ElementId x = 0; x < d.size(); ++x)
    if (!is_compatible(spec, dg.tuple(x))) {
      hyp("D compatible", "failed", d.word(x) + " is not compatible");
      return v;
    }
  hyp("D compatible", "passed", "all " + std::to_string(d.size()) + " elements");

  if (!is_nilpotent(dg.table)) {
    hyp("D nilpotent", "failed", "");
    return v;
  }
  hyp("D nilpotent", "passed", "");

  auto pv = periodicity_certificate(spec, caps);
  v.sigma = pv.sigma;
  if (pv.status == Status::Certified) {
    hyp("stabilised nucleus is D", "passed",
        "sigma criterion: " + pv.hypotheses.front().detail);
  } else if (spec.assumptions().asserted_periodic.value_or(false)) {
    v.asserted_periodic = spec.assumptions().note;
    hyp("stabilised nucleus is D", "asserted", spec.assumptions().note);
  } else {
    v.budget_exceeded = pv.budget_exceeded;
    hyp("stabilised nucleus is D", pv.hypotheses.front().outcome,
        "sigma criterion: " + pv.hypotheses.front().detail);
    return v;
  }

  auto surj = enumerate_prime_power_surjections(dg.table);
  std::sort(surj.begin(), surj.end(), [](auto const &a, auto const &b) {
    return std::tie(a.modulus, a.prime, a.generator_values) <
           std::tie(b.modulus, b.prime, b.generator_values);
  });
  if (surj.empty()) {
    hyp("unit preimage filling", "failed", "D has no cyclic p-power quotient");
    return v;
  }

  auto classes = conjugacy_classes(whole_group(dg.table));
  std::vector<std::uint32_t> class_of(d.size());
  for (std::uint32_t c = 0; c < classes.size(); ++c)
    for (auto x : classes[c])
      class_of[x] = c;
  std::map<std::uint32_t, FillingResult> memo;
  FillingCaps fc{caps.cycle_bound, caps.lift_cap};

  auto compute = [&](const std::vector<std::uint32_t> &todo) {
    std::vector<FillingResult> out(todo.size());
    std::vector<std::string> errors(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next++) < todo.size();) {
        try {
          out[i] = is_filling(spec, dg, classes[todo[i]].front(), fc);
        } catch (const Error &e) {
          errors[i] = e.what();
          out[i].status = FillingStatus::Inconclusive;
          out[i].reason = e.what();
        }
      }
    };
    auto n = std::max(1u, std::min<unsigned>(caps.threads, todo.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t)
      pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
      t.join();
    for (std::size_t i = 0; i < todo.size(); ++i)
      memo.emplace(todo[i], std::move(out[i]));
  };

  std::string last_reason;
  bool inconclusive = false;
  for (auto const &s : surj) {
    std::set<std::uint32_t> needed;
    std::size_t units = 0;
    for (ElementId x = 0; x < d.size(); ++x)
      if (s.is_unit(x)) {
        ++units;
        needed.insert(class_of[x]);
      }
    std::vector<std::uint32_t> todo;
    for (auto c : needed)
      if (!memo.count(c))
        todo.push_back(c);
    compute(todo);

    bool all = true;
    for (auto c : needed) {
      auto const &fr = memo.at(c);
      if (fr.status == FillingStatus::Filling)
        continue;
      all = false;
      auto where = d.word(classes[c].front());
      if (fr.status == FillingStatus::Inconclusive) {
        inconclusive = true;
        last_reason = "Z/" + std::to_string(s.modulus) + ": " + where + ": " +
                      fr.reason;
      } else if (last_reason.empty() || !inconclusive) {
        last_reason = "Z/" + std::to_string(s.modulus) + ": " + where +
                      " is not filling (" + fr.reason + ")";
      }
      break;
    }
    if (!all)
      continue;
    SurjectionWitness w;
    w.prime = s.prime;
    w.modulus = s.modulus;
    w.generator_values = s.generator_values;
    w.unit_elements = units;
    for (auto c : needed)
      w.classes.push_back(
          {classes[c].front(), classes[c].size(), *memo.at(c).witness});
    v.surjection = std::move(w);
    v.status = Status::Certified;
    hyp("unit preimage filling", "passed",
        "onto Z/" + std::to_string(s.modulus) + ", " + std::to_string(units) +
            " unit elements in " + std::to_string(needed.size()) + " classes");
    return v;
  }
  hyp("unit preimage filling", "failed", last_reason);
  return v;
}

// --- primary multi-GGS ---------------------------------------------------------

PeriodicityEvidence periodicity_evidence(const SpinalSpec &spec,
                                         const Caps &caps) {
  PeriodicityEvidence e;
  e.sigma_certified =
      periodicity_certificate(spec, caps).status == Status::Certified;
  e.asserted = spec.assumptions().asserted_periodic.value_or(false);
  e.note = spec.assumptions().note;
  return e;
}

Verdict primary_multi_ggs_check(const SpinalSpec &spec,
                                const PeriodicityEvidence &evidence) {
  auto const &r = spec.rooted();
  auto n = r.size();
  auto f = factorize(n);
  std::optional<ElementId> cyc;
  for (ElementId x = 0; x < n && !cyc; ++x)
    if (r.order(x) == n)
      cyc = x;
  if (f.size() != 1 || !cyc)
    throw Error(ErrorKind::NotPrimaryCyclic,
                "rooted group is not cyclic of prime-power order");
  Verdict v;
  v.theorem = "primary-multi-ggs";
  v.status = Status::Inconclusive;
  if (evidence.sigma_certified)
    v.hypotheses.push_back({"periodic", "passed", "sigma criterion"});
  else if (evidence.asserted) {
    v.asserted_periodic = evidence.note;
    v.hypotheses.push_back({"periodic", "asserted", evidence.note});
  } else
    v.hypotheses.push_back(
        {"periodic", "failed", "no sigma certificate and no assertion"});

  std::string found;
  for (std::uint32_t i = 0; i < spec.directed().size() && found.empty(); ++i)
    for (ElementId x = 0; x < n; ++x)
      if (r.order(x) == n &&
          r.order(spec.value_at(spec.generator_tuple(i), x)) == n) {
        found = spec.directed()[i].name + "|_" + r.word(x) + " = " +
                r.word(spec.value_at(spec.generator_tuple(i), x));
        break;
      }
  v.hypotheses.push_back({"some d|_x generates R", found.empty() ? "failed"
                                                                 : "passed",
                          found});
  if (!found.empty() && (evidence.sigma_certified || evidence.asserted))
    v.status = Status::Certified;
  return v;
}

// --- layered -----------------------------------------------------------------

LayeredTarget whole_group_target(const SpinalSpec &spec) {
  LayeredTarget t;
  for (std::uint32_t i = 0; i < spec.directed().size(); ++i)
    t.generators.push_back({Symbol::directed(i)});
  return t;
}

LayeredTarget special_target(const SubgroupDef &def) {
  return {def.name, def.generators};
}

namespace {

bool is_whole_target(const LayeredTarget &t) { return t.subject == "G"; }

SubgroupHandle target_subgroup(const SpinalSpec &spec, const DirectedGroup &dg,
                               const LayeredTarget &t) {
  std::vector<ElementId> gens;
  for (auto const &w : t.generators)
    gens.push_back(dg.id_of(spec.tuple_of(w)));
  return subgroup_generated(dg.table, gens);
}

// Every maximal run of directed symbols lies in T.
bool blocks_in(const SpinalSpec &spec, const DirectedGroup &dg,
               const SubgroupHandle &t, const Word &w) {
  Word block;
  auto flush = [&] {
    if (block.empty())
      return true;
    auto ok = t.contains(dg.id_of(spec.tuple_of(block)));
    block.clear();
    return ok;
  };
  for (auto const &s : w) {
    if (s.is_rooted()) {
      if (s.id == spec.rooted().identity())
        continue;
      if (!flush())
        return false;
    } else {
      block.push_back(s);
    }
  }
  return flush();
}

} // namespace

bool verify_layered(const SpinalSpec &spec, const LayeredTarget &target,
                    const LayeredCertificate &c, const DirectedGroup *dg) {
  auto const &r = spec.rooted();
  if (!is_whole_target(target)) {
    if (!dg)
      throw Error(ErrorKind::Input, "subgroup witness needs D");
    if (!blocks_in(spec, *dg, target_subgroup(spec, *dg, target), c.witness))
      return false;
  }
  if (top_permutation(spec, c.witness) != r.identity())
    return false;
  std::optional<Letter> at;
  for (Letter x = 0; x < spec.alphabet_size(); ++x) {
    auto sec = section(spec, c.witness, {x});
    if (is_identity(spec, sec))
      continue;
    if (at)
      return false;
    at = x;
    if (!is_rooted_element(spec, sec) ||
        top_permutation(spec, sec) != c.target)
      return false;
  }
  if (!at || *at != c.vertex)
    return false;
  ElementId t[] = {c.target};
  return normal_closure(spec.rooted_ptr(), t).is_whole() ==
             c.normal_closure_full &&
         c.normal_closure_full;
}

Verdict check_layered(const SpinalSpec &spec, const DirectedGroup &dg,
                      const LayeredTarget &target,
                      const std::optional<LayeredCertificate> &witness,
                      std::size_t search_budget) {
  Verdict v;
  v.theorem = "layered";
  v.subject = target.subject;
  v.caps.search_budget = search_budget;
  v.status = Status::Inconclusive;
  if (witness) {
    auto c = *witness;
    c.subject = target.subject;
    bool ok = verify_layered(spec, target, c, &dg);
    v.hypotheses.push_back({"single rooted section normally generating R",
                            ok ? "passed" : "failed",
                            word_str(spec, c.witness)});
    if (ok) {
      v.status = Status::Certified;
      v.layered.push_back(c);
    }
    return v;
  }

  auto const &rp = spec.rooted_ptr();
  auto const &r = *rp;
  auto const &d = dg.group();
  // T elements with spelling words, breadth first over the generator words
  std::vector<std::pair<ElementId, Word>> elems;
  std::vector<bool> seen(d.size(), false);
  std::vector<std::pair<ElementId, Word>> gens;
  for (auto const &w : target.generators)
    gens.push_back({dg.id_of(spec.tuple_of(w)), w});
  elems.push_back({d.identity(), {}});
  seen[d.identity()] = true;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (auto const &[g, w] : gens) {
      auto y = d.mul(elems[i].first, g);
      if (!seen[y]) {
        seen[y] = true;
        elems.push_back({y, concat(elems[i].second, w)});
      }
    }

  std::vector<std::int8_t> full(r.size(), -1);
  auto normally_generates = [&](ElementId x) {
    if (full[x] < 0) {
      ElementId t[] = {x};
      full[x] = normal_closure(rp, t).is_whole() ? 1 : 0;
    }
    return full[x] == 1;
  };
  std::vector<Letter> support = spec.support();
  std::size_t examined = 0;
  std::set<std::pair<ElementId, ElementId>> tried;
  auto try_pair = [&](const std::pair<ElementId, Word> &a,
                      const std::pair<ElementId, Word> &b)
      -> std::optional<LayeredCertificate> {
    if (a.first == d.identity() || b.first == d.identity() ||
        !tried.insert({a.first, b.first}).second)
      return std::nullopt;
    auto ta = dg.tuple(a.first), tb = dg.tuple(b.first);
    for (ElementId u = 1; u < r.size(); ++u) {
      if (++examined > search_budget)
        return std::nullopt;
      if (spec.value_at(tb, u) != r.identity() ||
          spec.value_at(ta, r.inv(u)) != r.identity())
        continue;
      std::optional<std::pair<Letter, ElementId>> single;
      bool many = false;
      for (auto x : support) {
        auto ax = spec.value_at(ta, x);
        if (ax == r.identity())
          continue;
        auto ux = r.mul(u, x);
        if (ux == r.identity())
          continue;
        auto c = r.commutator(ax, spec.value_at(tb, ux));
        if (c == r.identity())
          continue;
        if (single) {
          many = true;
          break;
        }
        single = {x, c};
      }
      if (many || !single || !normally_generates(single->second))
        continue;
      LayeredCertificate cert;
      cert.subject = target.subject;
      cert.witness = free_reduce(
          commutator(a.second, conjugate(b.second, {Symbol::rooted(u)}, r), r),
          r);
      cert.vertex = single->first;
      cert.target = single->second;
      cert.normal_closure_full = true;
      if (verify_layered(spec, target, cert, &dg))
        return cert;
    }
    return std::nullopt;
  };

  std::optional<LayeredCertificate> found;
  for (auto const &a : gens)
    for (auto const &b : gens)
      if (!found)
        found = try_pair(a, b);
  for (std::size_t i = 0; i < elems.size() && !found; ++i)
    for (std::size_t j = 0; j < elems.size() && !found; ++j) {
      if (examined > search_budget)
        break;
      found = try_pair(elems[i], elems[j]);
    }
  if (found) {
    v.status = Status::Certified;
    v.layered.push_back(*found);
    v.hypotheses.push_back({"single rooted section normally generating R",
                            "passed", word_str(spec, found->witness)});
  } else {
    v.budget_exceeded = examined > search_budget;
    v.hypotheses.push_back(
        {"single rooted section normally generating R",
         v.budget_exceeded ? "budget-exceeded" : "failed",
         "no commutator [a, b^u] found among " + std::to_string(examined) +
             " candidates"});
  }
  return v;
}

// --- maximality ----------------------------------------------------------------

Verdict certify_maximal_infinite_index(const SpinalSpec &spec,
                                       const DirectedGroup &dg,
                                       const SubgroupDef &tdef,
                                       const MaximalityWitnesses &w,
                                       const Caps &caps) {
  Verdict v;
  v.theorem = "maximal-infinite-index";
  v.subject = tdef.name;
  v.caps = caps;
  v.status = Status::Inconclusive;
  auto hyp = [&](std::string name, std::string outcome, std::string detail) {
    v.hypotheses.push_back({std::move(name), std::move(outcome),
                            std::move(detail)});
  };
  auto special = special_subgroup(spec, dg, tdef);
  auto const &t = special.t;
  auto const &dp = dg.table;
  MaximalityData m;
  m.d_order = dp->size();
  m.t_order = t.size();
  if (t.is_whole()) {
    v.status = Status::Refuted;
    hyp("T proper", "failed", "T = D");
    v.maximality = m;
    return v;
  }
  hyp("T proper", "passed",
      "|T| = " + std::to_string(t.size()) + ", |D| = " +
          std::to_string(dp->size()));

  auto nc = normal_closure(dp, t.generators());
  std::vector<ElementId> gens = nc.generators();
  gens.insert(gens.end(), dg.derived.generators().begin(),
              dg.derived.generators().end());
  m.obstruction_order = subgroup_generated(dp, gens).size();
  if (m.obstruction_order != dp->size()) {
    v.status = Status::Refuted;
    hyp("T^D D' = D", "failed",
        "|<T^D, D'>| = " + std::to_string(m.obstruction_order));
    v.maximality = m;
    return v;
  }
  hyp("T^D D' = D", "passed", "");

  auto finish = [&] {
    v.maximality = m;
    return v;
  };
  auto gl = check_layered(spec, dg, whole_group_target(spec), w.g,
                          caps.search_budget);
  v.layered.insert(v.layered.end(), gl.layered.begin(), gl.layered.end());
  if (gl.status != Status::Certified) {
    v.budget_exceeded = gl.budget_exceeded;
    hyp("G layered", gl.hypotheses.front().outcome,
        gl.hypotheses.front().detail);
    return finish();
  }
  hyp("G layered", "passed", word_str(spec, gl.layered.front().witness));

  if (!special.gen_holds) {
    hyp("H layered", "failed", "(Gen) fails for T");
    return finish();
  }
  auto hl = check_layered(spec, dg, special_target(tdef), w.h,
                          caps.search_budget);
  v.layered.insert(v.layered.end(), hl.layered.begin(), hl.layered.end());
  if (hl.status != Status::Certified) {
    v.budget_exceeded = hl.budget_exceeded;
    hyp("H layered", hl.hypotheses.front().outcome,
        hl.hypotheses.front().detail);
    return finish();
  }
  hyp("H layered", "passed", word_str(spec, hl.layered.front().witness));

  gens = t.generators();
  gens.insert(gens.end(), dg.derived.generators().begin(),
              dg.derived.generators().end());
  m.t_dprime_order = subgroup_generated(dp, gens).size();
  if (m.t_dprime_order != dp->size()) {
    hyp("T D' = D", "failed", "|T D'| = " + std::to_string(m.t_dprime_order));
    return finish();
  }
  hyp("T D' = D", "passed", "");

  m.maximal = is_maximal_subgroup(dp, t);
  if (!m.maximal) {
    hyp("T maximal in D", "failed", "");
    return finish();
  }
  hyp("T maximal in D", "passed", "");
  v.status = Status::Certified;
  return finish();
}

// --- perfect, CSP, just-infinite ---------------------------------------------

bool check_perfect(const SpinalSpec &spec) {
  if (!is_perfect(spec.rooted_ptr()))
    return false;
  try {
    auto dg = build_directed_group(spec);
    return is_perfect(dg.table);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::BudgetExceeded)
      throw;
  }
  for (auto const &b : directed_blocks(spec))
    if (!b.perfect)
      return false;
  return true;
}

namespace {

Verdict layered_based(const SpinalSpec &spec, const LayeredCertificate *cert,
                      const char *theorem) {
  if (!cert)
    throw Error(ErrorKind::MissingLayeredCertificate,
                std::string(theorem) + " needs a layered certificate");
  Verdict v;
  v.theorem = theorem;
  v.status = Status::Inconclusive;
  auto c = *cert;
  c.subject = "G";
  bool ok = verify_layered(spec, whole_group_target(spec), c);
  v.hypotheses.push_back({"G layered", ok ? "passed" : "failed",
                          word_str(spec, c.witness)});
  if (ok)
    v.layered.push_back(c);
  return v;
}

} // namespace

Verdict layered_csp(const SpinalSpec &spec, const LayeredCertificate *cert) {
  auto v = layered_based(spec, cert, "csp");
  if (v.layered.empty())
    return v;
  bool perfect = check_perfect(spec);
  v.hypotheses.push_back({"G perfect", perfect ? "passed" : "failed",
                          "R perfect and D perfect"});
  v.status = perfect ? Status::Certified : Status::Refuted;
  return v;
}

Verdict just_infinite(const SpinalSpec &spec, const LayeredCertificate *cert) {
  auto v = layered_based(spec, cert, "just-infinite");
  if (!v.layered.empty())
    v.status = Status::Certified;
  return v;
}

// --- reports -------------------------------------------------------------------

namespace {

ordered_json subset_json(const GroupTable &r, const RSubset &s) {
  ordered_json j;
  j["size"] = s.size();
  if (s.size() <= 64) {
    ordered_json e = ordered_json::array();
    for (auto x : s)
      e.push_back(r.word(x));
    j["elements"] = e;
  }
  return j;
}

ordered_json build_json(const SpinalSpec &spec, const Verdict &v) {
  auto const &r = spec.rooted();
  ordered_json j;
  j["status"] = status_name(v.status);
  j["theorem"] = v.theorem;
  ordered_json hs = ordered_json::array();
  for (auto const &h : v.hypotheses)
    hs.push_back({{"name", h.name}, {"outcome", h.outcome},
                  {"detail", h.detail}});
  j["hypotheses"] = hs;

  ordered_json w = ordered_json::object();
  if (!v.subject.empty())
    w["subject"] = v.subject;
  if (v.asserted_periodic)
    w["assertedPeriodic"] = *v.asserted_periodic;
  if (!v.sigma.empty()) {
    ordered_json ts = ordered_json::array();
    for (auto const &t : v.sigma) {
      ordered_json tj;
      tj["start"] = r.word(t.start);
      tj["outcome"] = outcome_name(t.outcome);
      if (t.outcome == SigmaOutcome::ReachedTrivial)
        tj["steps"] = t.steps;
      ordered_json it = ordered_json::array();
      for (auto const &s : t.iterates)
        it.push_back(subset_json(r, s));
      tj["iterates"] = it;
      if (t.outcome == SigmaOutcome::Cycled)
        tj["cycleAt"] = subset_json(r, t.cycle_at);
      ts.push_back(tj);
    }
    w["sigma"] = ts;
  }
  if (v.surjection) {
    auto const &s = *v.surjection;
    // D words: D is rebuilt only to name elements
    auto dg = build_directed_group(spec, v.caps.d_cap);
    auto const &d = dg.group();
    auto const &q = spec.rooted_ab();
    ordered_json sj;
    sj["prime"] = s.prime;
    sj["modulus"] = s.modulus;
    ordered_json gv = ordered_json::object();
    for (std::size_t i = 0; i < s.generator_values.size(); ++i)
      gv[d.generator_names()[i]] = s.generator_values[i];
    sj["generatorValues"] = gv;
    sj["unitElements"] = s.unit_elements;
    ordered_json cs = ordered_json::array();
    for (auto const &c : s.classes) {
      ordered_json cj;
      cj["element"] = d.word(c.rep);
      cj["classSize"] = c.class_size;
      auto const &f = c.witness.fork;
      cj["forkingPoint"] = r.word(q.rep(f.vertex));
      cj["k"] = f.k;
      cj["k2"] = f.k2;
      cj["pathA"] = f.path_a;
      cj["pathB"] = f.path_b;
      ordered_json cl = ordered_json::array();
      for (auto x : c.witness.closure)
        cl.push_back(r.word(q.rep(x)));
      cj["reachClosure"] = cl;
      ordered_json pc = ordered_json::array();
      for (auto const &p : c.witness.per_conjugate)
        pc.push_back({{"element", d.word(p.t)},
                      {"strategy", p.strategy},
                      {"lifts", p.lifts}});
      cj["conjugates"] = pc;
      cs.push_back(cj);
    }
    sj["classes"] = cs;
    w["surjection"] = sj;
  }
  if (!v.layered.empty()) {
    ordered_json ls = ordered_json::array();
    for (auto const &c : v.layered)
      ls.push_back({{"subject", c.subject},
                    {"word", word_str(spec, c.witness)},
                    {"vertex", r.word(c.vertex)},
                    {"section", r.word(c.target)},
                    {"normalClosureFull", c.normal_closure_full}});
    w["layered"] = ls;
  }
  if (v.maximality) {
    auto const &m = *v.maximality;
    w["maximality"] = {{"orderD", m.d_order},
                       {"orderT", m.t_order},
                       {"orderObstruction", m.obstruction_order},
                       {"orderTDprime", m.t_dprime_order},
                       {"maximal", m.maximal}};
  }
  j["witnesses"] = w;
  j["caps"] = {{"cycleBound", v.caps.cycle_bound},
               {"liftCap", v.caps.lift_cap},
               {"sigmaMaxIter", v.caps.sigma_max_iter},
               {"dCap", v.caps.d_cap},
               {"searchBudget", v.caps.search_budget}};
  return j;
}

} // namespace

std::string verdict_json(const SpinalSpec &spec, const Verdict &v) {
  return build_json(spec, v).dump(2) + "\n";
}

std::string verdict_text(const SpinalSpec &spec, const Verdict &v) {
  auto const &r = spec.rooted();
  std::ostringstream os;
  os << v.theorem << ": " << status_name(v.status) << "\n";
  for (auto const &h : v.hypotheses) {
    os << "  [" << h.outcome << "] " << h.name;
    if (!h.detail.empty())
      os << ": " << h.detail;
    os << "\n";
  }
  for (auto const &t : v.sigma)
    if (t.outcome != SigmaOutcome::ReachedTrivial) {
      os << "  sigma trace from " << r.word(t.start) << ":";
      for (auto const &s : t.iterates)
        os << " |" << s.size() << "|";
      os << " " << outcome_name(t.outcome) << "\n";
      break;
    }
  if (v.surjection) {
    auto const &q = spec.rooted_ab();
    for (auto const &c : v.surjection->classes) {
      auto const &f = c.witness.fork;
      os << "  forking point " << r.word(q.rep(f.vertex)) << " paths";
      for (auto const *p : {&f.path_a, &f.path_b}) {
        os << " [";
        for (std::size_t i = 0; i < p->size(); ++i)
          os << (i ? "," : "") << (*p)[i];
        os << "]";
      }
      os << "\n";
    }
  }
  for (auto const &c : v.layered)
    os << "  layered " << c.subject << ": " << word_str(spec, c.witness)
       << " has section " << r.word(c.target) << " at " << r.word(c.vertex)
       << "\n";
  return os.str();
}

bool replay(const SpinalSpec &spec, const Verdict &v) {
  auto find_layered = [&](const std::string &subject)
      -> std::optional<LayeredCertificate> {
    for (auto const &c : v.layered)
      if (c.subject == subject)
        return c;
    return std::nullopt;
  };
  Verdict again;
  if (v.theorem == "stabilised-nucleus") {
    again = periodicity_certificate(spec, v.caps);
  } else if (v.theorem == "mf-filling") {
    again = certify_mf(spec, v.caps);
    if (v.surjection) {
      auto dg = build_directed_group(spec, v.caps.d_cap);
      for (auto const &c : v.surjection->classes) {
        auto g = build_rab_graph(spec, dg.tuple(c.rep));
        if (!check_forking_witness(g, c.witness.fork))
          return false;
        if (reach_closure(g, {c.witness.fork.vertex}) != c.witness.closure)
          return false;
      }
    }
  } else if (v.theorem == "primary-multi-ggs") {
    again = primary_multi_ggs_check(spec, periodicity_evidence(spec, v.caps));
  } else if (v.theorem == "layered") {
    auto dg = build_directed_group(spec, v.caps.d_cap);
    LayeredTarget t = whole_group_target(spec);
    if (v.subject != "G") {
      auto def = spec.subgroup(v.subject);
      if (!def)
        return false;
      t = special_target(*def);
    }
    again = check_layered(spec, dg, t, find_layered(v.subject),
                          v.caps.search_budget);
  } else if (v.theorem == "maximal-infinite-index") {
    auto dg = build_directed_group(spec, v.caps.d_cap);
    auto def = spec.subgroup(v.subject);
    if (!def)
      return false;
    again = certify_maximal_infinite_index(
        spec, dg, *def, {find_layered("G"), find_layered(v.subject)}, v.caps);
  } else if (v.theorem == "csp" || v.theorem == "just-infinite") {
    auto c = find_layered("G");
    if (!c)
      return false;
    again = v.theorem == "csp" ? layered_csp(spec, &*c) : just_infinite(spec, &*c);
  } else {
    return false;
  }
  if (v.status == Status::Certified) {
    std::optional<DirectedGroup> dg;
    for (auto const &c : v.layered) {
      LayeredTarget t = whole_group_target(spec);
      if (c.subject != "G") {
        auto def = spec.subgroup(c.subject);
        if (!def)
          return false;
        t = special_target(*def);
        if (!dg)
          dg = build_directed_group(spec, v.caps.d_cap);
      }
      if (!verify_layered(spec, t, c, dg ? &*dg : nullptr))
        return false;
    }
  }
  again.caps.threads = v.caps.threads;
  return verdict_json(spec, again) == verdict_json(spec, v);
}

} // namespace spinal
