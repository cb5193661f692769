#ifndef CONVLAB_RADII_HPP
#define CONVLAB_RADII_HPP

#include "convlab/diffmod.hpp"
#include "convlab/newton.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace convlab {

enum class Certainty { exact, lower_bound_only };

// Intrinsic subsidiary radii in log units: irlog = -log IR >= 0. A
// lower_bound_only entry only asserts irlog <= value (IR at least the bound).
struct RadiiEntry {
  Q irlog;
  long mult;
  Certainty certainty;
  friend bool operator==(const RadiiEntry&, const RadiiEntry&) = default;
};

struct RadiiMultiset {
  // Sorted by irlog descending (smallest radius first), exact before bounds.
  std::vector<RadiiEntry> entries;

  void add(const Q& irlog, long mult, Certainty c);
  void add(const RadiiMultiset& o);
  long rank() const;
  bool fully_exact() const;
  // irlog values with multiplicity, descending; requires fully_exact().
  std::vector<Q> expanded() const;
  std::string str() const;
  friend bool operator==(const RadiiMultiset&, const RadiiMultiset&) = default;
};

RadiiMultiset christol_dwork(const NewtonPolygon& np, const Q& r, const FieldMode& mode);

// Forward descendant law in log units on an exact multiset.
RadiiMultiset descendant_law(const RadiiMultiset& m, long p);
// Unique preimage under the law. Lower-bound entries below p*c_omega invert to
// lower bounds; a lower-bound entry at or above p*c_omega is ambiguous.
RadiiMultiset invert_descendant_multiset(const RadiiMultiset& desc, long p);

// Companion data for one block of a module, reusable for every r.
struct BlockData {
  std::vector<size_t> indices;
  DiffModule module; // ddt form of the block
  bool robba = false;
  std::vector<LaurentPoly> companion; // c_0..c_n
  long cyclic_attempts = 0;
};

// Caches the per-block companion data of a module and of its descendants so
// that repeated evaluation at many r is cheap. Thread-safe.
class RadiiEngine {
public:
  explicit RadiiEngine(const DiffModule& m, long cyclic_budget = 64);
  RadiiMultiset radii(const Q& r, long depth);
  const DiffModule& module() const { return module_; }
  size_t block_count() const { return blocks_.size(); }

private:
  RadiiMultiset block_radii(size_t b, const Q& r, long depth);
  RadiiEngine& descendant(size_t b);

  DiffModule module_;
  long budget_;
  std::vector<BlockData> blocks_;
  std::mutex mu_;
  std::map<size_t, std::unique_ptr<RadiiEngine>> desc_;
};

// Radii of M at r, resolving non-visible mass by up to `depth` descendant steps.
RadiiMultiset module_radii(const DiffModule& m, const Q& r, long depth = 2);

// One point of the oracle schedule: hi is a certified upper bound on the top
// irlog; lo is the uncertified estimate max(0, c_omega - r - w_r(N_j)/j) with
// j the largest multiple of the rank not above k.
struct OracleStep {
  long k;
  Q lo;
  Q hi;
};
// Steps at k = n, 2n, 4n, ... below k_max, and at k_max itself.
std::vector<OracleStep> spectral_radius_oracle(const DiffModule& m, const Q& r, long k_max);

} // namespace convlab

#endif
