#ifndef CONVLAB_PROFILE_HPP
#define CONVLAB_PROFILE_HPP

#include "convlab/radii.hpp"

#include <string>
#include <vector>

namespace convlab {

struct AffinePiece {
  Q slope;
  Q intercept;
  bool certified = true;
  Q at(const Q& r) const { return slope * r + intercept; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

// Continuous piecewise affine function on [breakpoints.front(), breakpoints.back()].
struct PAFunction {
  std::vector<Q> breakpoints; // pieces.size() + 1 entries, ascending
  std::vector<AffinePiece> pieces;

  // Appends the piece on [a, b]; a must equal the current right end. Merges
  // with the previous piece when both lines and flags agree.
  void append(const Q& a, const Q& b, const AffinePiece& piece);
  Q operator()(const Q& r) const;
  bool certified() const;
  Q left() const { return breakpoints.front(); }
  Q right() const { return breakpoints.back(); }
  friend bool operator==(const PAFunction&, const PAFunction&) = default;
};

// Pointwise sum on the common refinement; a piece is certified when both are.
PAFunction pa_sum(const PAFunction& a, const PAFunction& b);

struct ProfileOptions {
  long grid = 16;   // number of initial subintervals
  long refine = 2;  // bisection levels for spans without an affine fit
  long depth = 2;   // descendant depth per sample
  long threads = 0; // 0: CONVLAB_THREADS or the hardware concurrency
};

struct Profile {
  std::vector<PAFunction> f; // f_1 >= ... >= f_n
  long spans = 0;
  long certified_spans = 0;
  std::vector<std::string> flags;
  bool flagged() const { return !flags.empty(); }
};

// f_i(r) = r + irlog_i(r) reconstructed from samples of module_radii.
Profile radii_profile(const DiffModule& m, const Q& r1, const Q& r2, const ProfileOptions& opt = {});

enum class VariationContext { disc, annulus };

struct PropertyCheck {
  std::string name;
  long checked = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

struct VariationReport {
  std::vector<PropertyCheck> checks;
  bool pass() const;
  const PropertyCheck& get(const std::string& name) const;
};

// Checks certified pieces only: convexity of F_i, integral slopes of F_n (and
// of F_i where f_i > f_{i+1}), slopes of f_i and F_i in the union of (1/b)Z
// for b <= n, and in disc context nonpositive F_i slopes where f_i > r.
VariationReport variation_check(const std::vector<PAFunction>& f, VariationContext ctx);

// Number of worker threads from CONVLAB_THREADS, else the hardware concurrency.
long default_thread_count();

} // namespace convlab

#endif
