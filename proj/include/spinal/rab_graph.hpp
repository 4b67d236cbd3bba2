#ifndef SPINAL_RAB_GRAPH_HPP
#define SPINAL_RAB_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spinal/spinal_spec.hpp"

namespace spinal {

using CosetId = std::uint32_t;
using CosetSet = std::set<CosetId>;

struct RabEdge {
  CosetId from = 0;
  std::uint32_t label = 0;
  CosetId to = 0;
  auto operator<=>(const RabEdge &) const = default;
};

// The abelianised section graph of a directed element on R/R'.
class RabGraph {
public:
  RabGraph(const SpinalSpec &spec, DTuple d, std::vector<RabEdge> edges);

  const SpinalSpec &spec() const { return *spec_; }
  const CosetSpace &cosets() const { return spec_->rooted_ab(); }
  std::size_t vertex_count() const { return cosets().size(); }
  const DTuple &element() const { return d_; }
  std::size_t element_order() const { return order_; }
  std::uint32_t m(CosetId v) const { return cosets().order(v); }

  // Sorted by (from, label, to).
  const std::vector<RabEdge> &edges() const { return edges_; }
  // Targets of edges leaving v with the given label, ascending.
  const std::vector<CosetId> &targets(CosetId v, std::uint32_t label) const;
  bool simply_labelled() const;

  std::string vertex_name(CosetId v) const;

private:
  const SpinalSpec *spec_;
  DTuple d_;
  std::size_t order_ = 1;
  std::vector<RabEdge> edges_;
  // out_[v][label] -> targets; label 0 unused
  std::vector<std::vector<std::vector<CosetId>>> out_;
};

RabGraph build_rab_graph(const SpinalSpec &spec, const DTuple &d);
// Same graph, built from the given coset representatives; used to check
// that the edge set does not depend on the choice.
RabGraph build_rab_graph(const SpinalSpec &spec, const DTuple &d,
                         const std::vector<ElementId> &reps);

struct ForkingWitness {
  CosetId vertex = 0;
  std::uint32_t k = 0, k2 = 0;
  std::vector<std::uint32_t> path_a, path_b; // label sequences from vertex
};

struct ForkingSearch {
  std::vector<ForkingWitness> witnesses;
  std::size_t cycle_bound = 0;
  // Vertices with two returning first labels but no coprime pair within
  // the bound; the answer there is open.
  std::vector<CosetId> undecided;
};

std::size_t default_cycle_bound(const RabGraph &g);
ForkingSearch forking_points(const RabGraph &g, std::size_t cycle_bound = 0);

// End vertex of a label path, or nullopt when some label has no edge.
// For graphs that are not simply labelled the first target is followed.
std::optional<CosetId> follow_path(const RabGraph &g, CosetId start,
                                   const std::vector<std::uint32_t> &labels);
// Checks the witness invariants against the graph.
bool check_forking_witness(const RabGraph &g, const ForkingWitness &w);

// Vertices reached from W by paths of positive length.
CosetSet reach(const RabGraph &g, const CosetSet &w);
CosetSet reach_closure(const RabGraph &g, const CosetSet &w);
// Subgroup of R/R' generated by a set of cosets.
CosetSet coset_subgroup(const CosetSpace &q, const CosetSet &gens);

struct FillingCaps {
  std::size_t cycle_bound = 0; // 0: default per graph
  std::size_t lift_cap = 1000000;
};

struct ConjugateCheck {
  ElementId t = 0;       // element of D
  std::string strategy;  // constant-on-cosets, nilpotent-rooted, exhaustive
  std::size_t lifts = 0; // lifts examined
  std::size_t min_generated = 0;
};

struct FillingWitness {
  ForkingWitness fork;
  CosetSet closure;
  std::vector<ConjugateCheck> per_conjugate;
};

enum class FillingStatus { Filling, NotFilling, Inconclusive };

struct FillingResult {
  FillingStatus status = FillingStatus::Inconclusive;
  std::optional<FillingWitness> witness;
  std::size_t cycle_bound = 0;
  std::string reason;
};

// d is an element of the enumerated D. Throws NotCompatible.
FillingResult is_filling(const SpinalSpec &spec, const DirectedGroup &dg,
                         ElementId d, const FillingCaps &caps = {});

std::string export_dot(const RabGraph &g, const CosetSet &marks = {});

} // namespace spinal

#endif // SPINAL_RAB_GRAPH_HPP
