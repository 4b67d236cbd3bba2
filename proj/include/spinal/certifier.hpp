#ifndef SPINAL_CERTIFIER_HPP
#define SPINAL_CERTIFIER_HPP

#include <optional>
#include <string>
#include <vector>

#include "spinal/rab_graph.hpp"
#include "spinal/spinal_spec.hpp"
#include "spinal/tree.hpp"

namespace spinal {

enum class Status { Certified, Refuted, Inconclusive };
const char *status_name(Status s);

// Sorted subset of R.
using RSubset = std::vector<ElementId>;

// Sigma_T of single elements, memoised per conjugacy class of R.
class SigmaMap {
public:
  SigmaMap(const SpinalSpec &spec, std::vector<DTuple> t);

  const SpinalSpec &spec() const { return *spec_; }
  const RSubset &of(ElementId r) const { return per_class_[class_of_[r]]; }
  RSubset step(const RSubset &s) const;
  // smallest element of each class, ascending
  const std::vector<ElementId> &class_reps() const { return reps_; }

private:
  const SpinalSpec *spec_;
  std::vector<std::uint32_t> class_of_;
  std::vector<RSubset> per_class_;
  std::vector<ElementId> reps_;
};

// T given as tuples; the default is the directed generators.
RSubset sigma_step(const SpinalSpec &spec, const std::vector<DTuple> &t,
                   const RSubset &s);
std::vector<DTuple> directed_generators(const SpinalSpec &spec);

enum class SigmaOutcome { ReachedTrivial, Cycled, BudgetExceeded };

struct SigmaTrace {
  ElementId start = 0;
  std::vector<RSubset> iterates; // iterates[0] = {start}
  SigmaOutcome outcome = SigmaOutcome::BudgetExceeded;
  std::size_t steps = 0; // for ReachedTrivial
  RSubset cycle_at;      // for Cycled
};

SigmaTrace sigma_trace(const SigmaMap &sigma, ElementId start,
                       std::size_t max_iter);

struct Caps {
  std::size_t cycle_bound = 0;    // 0: |V|^2 + ord(d) per graph
  std::size_t lift_cap = 1000000;
  std::size_t sigma_max_iter = 0; // 0: |R| + 2
  std::size_t d_cap = kDefaultDirectedCap;
  std::size_t search_budget = 5000000; // layered (a, b, v) candidates
  unsigned threads = 1;
};

struct Hypothesis {
  std::string name;
  std::string outcome; // passed, failed, asserted, budget-exceeded, skipped
  std::string detail;
};

struct ClassFilling {
  ElementId rep = 0; // element of D
  std::size_t class_size = 0;
  FillingWitness witness;
};

struct SurjectionWitness {
  std::uint64_t prime = 0, modulus = 0;
  std::vector<std::uint64_t> generator_values;
  std::size_t unit_elements = 0;
  std::vector<ClassFilling> classes;
};

struct LayeredCertificate {
  std::string subject; // "G" or the subgroup name
  Word witness;
  Letter vertex = 0;
  ElementId target = 0;
  bool normal_closure_full = false;
};

struct MaximalityData {
  std::size_t d_order = 0, t_order = 0;
  std::size_t obstruction_order = 0; // |<T^D u D'>|
  std::size_t t_dprime_order = 0;    // |T D'|
  bool maximal = false;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::string theorem;
  std::string subject; // subgroup name for maximality, else empty
  std::vector<Hypothesis> hypotheses;
  std::vector<SigmaTrace> sigma;
  std::optional<SurjectionWitness> surjection;
  std::vector<LayeredCertificate> layered;
  std::optional<MaximalityData> maximality;
  std::optional<std::string> asserted_periodic; // note, verbatim
  Caps caps;
  bool budget_exceeded = false;
};

Verdict periodicity_certificate(const SpinalSpec &spec,
                                const std::vector<DTuple> &t,
                                std::size_t max_iter = 0);
Verdict periodicity_certificate(const SpinalSpec &spec, const Caps &caps = {});

// Never returns Refuted.
Verdict certify_mf(const SpinalSpec &spec, const Caps &caps = {});

struct PeriodicityEvidence {
  bool sigma_certified = false;
  bool asserted = false;
  std::string note;
};
PeriodicityEvidence periodicity_evidence(const SpinalSpec &spec,
                                         const Caps &caps = {});
// Throws NotPrimaryCyclic.
Verdict primary_multi_ggs_check(const SpinalSpec &spec,
                                const PeriodicityEvidence &evidence);

// Directed part to search over: the whole D (all generators) or a special
// subgroup T. Witness words for T may only use T elements as directed blocks.
struct LayeredTarget {
  std::string subject = "G";
  std::vector<Word> generators; // words over directed generators
};
LayeredTarget whole_group_target(const SpinalSpec &spec);
LayeredTarget special_target(const SubgroupDef &def);

// dg is needed only when the target is a proper subgroup.
bool verify_layered(const SpinalSpec &spec, const LayeredTarget &target,
                    const LayeredCertificate &c,
                    const DirectedGroup *dg = nullptr);
Verdict check_layered(const SpinalSpec &spec, const DirectedGroup &dg,
                      const LayeredTarget &target,
                      const std::optional<LayeredCertificate> &witness,
                      std::size_t search_budget = Caps{}.search_budget);

struct MaximalityWitnesses {
  std::optional<LayeredCertificate> g, h;
};
Verdict certify_maximal_infinite_index(const SpinalSpec &spec,
                                       const DirectedGroup &dg,
                                       const SubgroupDef &t,
                                       const MaximalityWitnesses &w = {},
                                       const Caps &caps = {});

// R and D perfect; D via its direct factors when over the cap.
bool check_perfect(const SpinalSpec &spec);
// Throw MissingLayeredCertificate when cert is null.
Verdict layered_csp(const SpinalSpec &spec, const LayeredCertificate *cert);
Verdict just_infinite(const SpinalSpec &spec, const LayeredCertificate *cert);

// Report JSON: {status, theorem, hypotheses, witnesses, caps}.
std::string verdict_json(const SpinalSpec &spec, const Verdict &v);
std::string verdict_text(const SpinalSpec &spec, const Verdict &v);
// Re-runs the pipeline named by the verdict on its caps and stored
// witnesses, re-checks the cited witnesses and compares report bytes.
bool replay(const SpinalSpec &spec, const Verdict &v);

} // namespace spinal

#endif // SPINAL_CERTIFIER_HPP
