#ifndef CONVLAB_EXPO_HPP
#define CONVLAB_EXPO_HPP

#include "convlab/diffmod.hpp"
#include "convlab/qlinalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace convlab {

// Finite multiset of rationals, kept sorted.
class ExponentMultiset {
public:
  ExponentMultiset() = default;
  explicit ExponentMultiset(std::vector<Q> entries);

  const std::vector<Q>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  // Throws not_in_zp when some denominator is divisible by p.
  void check_zp(long p) const;
  std::string str() const;

  friend bool operator==(const ExponentMultiset&, const ExponentMultiset&) = default;

private:
  std::vector<Q> entries_;
};

// Distance from x to the nearest integer.
Q frac_dist(const Q& x);

// p^m <a / p^m> for a in Z_p: |r| for the representative r of a mod p^m
// nearest to 0.
Z residue_dist(const Q& a, long p, long m);

enum class LiouvilleStatus { integer, rational_non_liouville, undecided };

const char* liouville_status_name(LiouvilleStatus s);

struct LiouvilleVerdict {
  LiouvilleStatus status;
  long depth = 0; // m_max for undecided
  std::vector<std::pair<long, Z>> profile;
  std::string note;
};

LiouvilleVerdict liouville_profile(const Q& a, long p, long m_max);

// Hall violator at a refuted depth: no admissible matching exists because the
// B entries `b` are only adjacent to the strictly smaller set `a` of A entries.
struct HallWitness {
  std::vector<size_t> b;
  std::vector<size_t> a;
};

struct WeakEquivalence {
  bool consistent = false;
  long depth = 0; // m_max when consistent, the refuting m otherwise
  // sigma[m-1][i] is the index of the A entry matched to b_i at depth m.
  std::vector<std::vector<size_t>> sigma;
  HallWitness witness;
  std::string str() const;
};

// Is there, for each m <= m_max, a permutation with
// p^m <(a_sigma(i) - b_i) / p^m> <= c m for all i?
WeakEquivalence weakly_equivalent(const ExponentMultiset& a, const ExponentMultiset& b, long p, const Q& c = 1,
                                  long m_max = 12);

struct LiouvillePartition {
  // Indices into the input entries; parts ordered by first element.
  std::vector<std::vector<size_t>> parts;
  bool exact = true;
};

LiouvillePartition liouville_partition(const ExponentMultiset& a, long p, const Q& c = 1, long m_max = 12);

// No two entries differ by a nonzero integer.
bool prepared(const ExponentMultiset& a);

// Eigenvalues of the constant term of the t_ddt matrix of a module regular at
// t = 0. In p-adic mode the entries must lie in Z_p.
ExponentMultiset residue_exponent(const DiffModule& m);

enum class ShearTarget { down, up };

struct ShearResult {
  DiffModule module;
  PolyMatrix gauge; // module == change_basis(input, gauge)
  ExponentMultiset before;
  ExponentMultiset after;
  long steps = 0;
};

// Moves every Z-coset of the residue exponent onto its minimum (down) or
// maximum (up) by constant block diagonalization and t^{-+1} shears.
ShearResult shear(const DiffModule& m, ShearTarget target = ShearTarget::down);

struct FuchsResult {
  PolyMatrix basis;  // columns are the new basis vectors mod t^order
  PolyMatrix matrix; // constant matrix of D on the new basis
  long order = 0;
  long steps = 0;
};

// Iterates e_{i,m} = prod_{j<=m} P(D - j) Q_j(D) e_i modulo t^order, with
// P the characteristic polynomial of N_0 and Q_j = P(T - j)^{-1} mod P(T).
FuchsResult fuchs_basis(const DiffModule& m, long order, long step_budget = 256);

struct ConstantBasisResult {
  // U and U^{-1}(N U + D U) for t d/dt, both known up to monomials of
  // valuation >= cap on the interval.
  PolyMatrix gauge;
  PolyMatrix matrix;
  Q gap;                        // initial valuation of N - N_0 on the interval
  ExtQ cap;                     // terms of valuation >= cap are discarded
  std::vector<ExtQ> residuals;  // valuation of N_l - N_{l,0}, l = 0..iterations
  long iterations = 0;
};

// Kills the nonconstant Fourier modes of N on a closed annulus by
// U_{l+1} = U_l (I + X_l), X_l solving the modewise Sylvester equations.
ConstantBasisResult constant_basis(const DiffModule& m, long iterations);

// The linear map X -> N0 X - X N0 + i X on n x n matrices, vec by rows.
QMatrix sylvester_operator(const QMatrix& n0, long i);

} // namespace convlab

#endif
