#ifndef SPINAL_CATALOG_HPP
#define SPINAL_CATALOG_HPP

#include <map>
#include <string>
#include <vector>

#include "spinal/spinal_spec.hpp"

namespace spinal {

using CatalogParams = std::map<std::string, long long>;

struct CatalogInfo {
  std::string name;
  std::string summary;
  std::string params; // documented parameter range, empty if none
  std::string note = {}; // known discrepancies in the listed data
};

const std::vector<CatalogInfo> &catalog_entries();

// Throws UnknownEntry or ParamOutOfRange.
SpinalSpec instantiate(const std::string &name, const CatalogParams &params = {});

struct ClaimResult {
  std::string operation;
  std::string expected;
  std::string tag; // PAPER, TRIVIAL or DERIVED
  bool passed = false;
  std::string detail;
};

struct RegressionReport {
  std::string entry;
  std::vector<ClaimResult> claims;
  bool all_passed() const;
};

RegressionReport run_regressions(const std::string &name,
                                 const CatalogParams &params = {});

// Label paths listed for the Heisenberg entry: the graph of d1^k, starting at
// the coset of b^k, each step (label, i, j) landing on a^i b^j R'.
struct LabelledStep {
  std::uint32_t label;
  unsigned i, j;
};
struct HeisenbergPath {
  unsigned k;
  std::vector<LabelledStep> steps;
};
const std::vector<HeisenbergPath> &heisenberg_listed_paths();
// The same list with the three steps that do not exist in the graphs
// replaced by engine-found ones (indices 3, 6, 7).
const std::vector<HeisenbergPath> &heisenberg_corrected_paths();
// Coset of a^i b^j in the Heisenberg entry.
std::uint32_t heisenberg_coset(const SpinalSpec &spec, unsigned i, unsigned j);
// Checks every step of p against the graph of d1^k.
bool replay_heisenberg_path(const SpinalSpec &spec, const HeisenbergPath &p);

// Helpers shared with tests.
GroupPtr alternating_group(unsigned n, const std::string &a = "x",
                           const std::string &b = "y");
ElementId element_of(const GroupTable &g, const Permutation &p);
// 1-based cycles
Permutation cycles1(unsigned degree, std::vector<std::vector<unsigned>> cycles);

} // namespace spinal

#endif // SPINAL_CATALOG_HPP
