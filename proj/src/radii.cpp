#include "convlab/radii.hpp"

#include "convlab/errors.hpp"
#include "convlab/qlinalg.hpp"

#include <algorithm>
#include <numeric>

namespace convlab {

void RadiiMultiset::add(const Q& irlog, long mult, Certainty c) {
  if (mult <= 0)
    return;
  for (auto& e : entries)
    if (e.irlog == irlog && e.certainty == c) {
      e.mult += mult;
      return;
    }
  entries.push_back({irlog, mult, c});
  std::sort(entries.begin(), entries.end(), [](const RadiiEntry& a, const RadiiEntry& b) {
    if (a.irlog != b.irlog)
      return a.irlog > b.irlog;
    return a.certainty < b.certainty;
  });
}

void RadiiMultiset::add(const RadiiMultiset& o) {
  for (const auto& e : o.entries)
    add(e.irlog, e.mult, e.certainty);
}

long RadiiMultiset::rank() const {
  long n = 0;
  for (const auto& e : entries)
    n += e.mult;
  return n;
}

bool RadiiMultiset::fully_exact() const {
  return std::all_of(entries.begin(), entries.end(), [](const RadiiEntry& e) { return e.certainty == Certainty::exact; });
}

std::vector<Q> RadiiMultiset::expanded() const {
  std::vector<Q> v;
  for (const auto& e : entries)
    for (long i = 0; i < e.mult; ++i)
      v.push_back(e.irlog);
  return v;
}

std::string RadiiMultiset::str() const {
  std::string s = "{";
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    s += (i ? ", (" : "(") + q_str(e.irlog) + ", " + std::to_string(e.mult) +
         (e.certainty == Certainty::exact ? ")" : ", lower-bound)");
  }
  return s + "}";
}

RadiiMultiset christol_dwork(const NewtonPolygon& np, const Q& r, const FieldMode& mode) {
  RadiiMultiset out;
  Q c = mode.c_omega();
  for (const auto& s : np.segments) {
    if (s.root_val < ExtQ(Q(-r))) {
      out.add(c - r - s.root_val.value(), s.mult, Certainty::exact);
    } else if (mode.is_padic()) {
      out.add(c, s.mult, Certainty::lower_bound_only);
    } else {
      out.add(Q(0), s.mult, Certainty::exact);
    }
  }
  return out;
}

RadiiMultiset descendant_law(const RadiiMultiset& m, long p) {
  if (!m.fully_exact())
    fail(Errc::parameter, "descendant law needs exact radii");
  Q c(1, p - 1);
  RadiiMultiset out;
  for (const auto& e : m.entries) {
    if (e.irlog < c) {
      out.add(e.irlog * p, e.mult, Certainty::exact);
      out.add(c * p, e.mult * (p - 1), Certainty::exact);
    } else {
      out.add(e.irlog + 1, e.mult * p, Certainty::exact);
    }
  }
  return out;
}

RadiiMultiset invert_descendant_multiset(const RadiiMultiset& desc, long p) {
  if (desc.rank() % p != 0)
    fail(Errc::inversion_infeasible, "total multiplicity " + std::to_string(desc.rank()) + " is not divisible by p");
  Q c(1, p - 1);
  Q pc = c * p;
  RadiiMultiset out;
  long small = 0, at_boundary = 0;
  for (const auto& e : desc.entries) {
    if (e.certainty == Certainty::lower_bound_only) {
      if (e.irlog >= pc)
        fail(Errc::ambiguous_inversion, "lower bound " + q_str(e.irlog) + " does not separate the branches at " + q_str(pc));
      out.add(e.irlog / p, e.mult, Certainty::lower_bound_only);
      small += e.mult;
    } else if (e.irlog < pc) {
      out.add(e.irlog / p, e.mult, Certainty::exact);
      small += e.mult;
    } else if (e.irlog == pc) {
      at_boundary += e.mult;
    } else {
      if (e.mult % p != 0)
        fail(Errc::inversion_infeasible, "entry " + q_str(e.irlog) + " has multiplicity " + std::to_string(e.mult) +
                                             " not divisible by p");
      out.add(e.irlog - 1, e.mult / p, Certainty::exact);
    }
  }
  long rest = at_boundary - small * (p - 1);
  if (rest < 0 || rest % p != 0)
    fail(Errc::inversion_infeasible, std::to_string(at_boundary) + " entries at " + q_str(pc) + " cannot come from " +
                                         std::to_string(small) + " large radii");
  out.add(c, rest / p, Certainty::exact);
  return out;
}

namespace {

// Connected components of the sparsity pattern of N.
std::vector<std::vector<size_t>> blocks_of(const PolyMatrix& n) {
  size_t k = n.rows();
  std::vector<size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      if (!n(i, j).is_zero())
        parent[find(i)] = find(j);
  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < k; ++i)
    groups[find(i)].push_back(i);
  std::vector<std::vector<size_t>> out;
  for (auto& [root, idx] : groups)
    out.push_back(idx);
  std::sort(out.begin(), out.end());
  return out;
}

// The block's t d/dt matrix is a constant rational matrix whose eigenvalues
// all lie in Z_(p); then t^A trivializes it on every open disc of the annulus.
bool robba_certificate(const DiffModule& m) {
  if (!m.mode.is_padic())
    return false;
  size_t n = m.rank();
  QMatrix a(n, std::vector<Q>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const LaurentPoly& e = m.matrix(i, j);
      if (e.is_zero())
        continue;
      if (!e.is_monomial() || e.terms()[0].first != -1)
        return false;
      a[i][j] = e.terms()[0].second.padic_value();
    }
  auto roots = rational_roots(char_poly(a));
  if (!roots)
    return false;
  long total = 0;
  for (const auto& [x, mult] : *roots) {
    if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(m.mode.p())))
      return false;
    total += mult;
  }
  return total == static_cast<long>(n);
}

} // namespace

RadiiEngine::RadiiEngine(const DiffModule& m, long cyclic_budget) : module_(as_ddt(m)), budget_(cyclic_budget) {
  const FieldMode& f = module_.mode;
  for (const auto& idx : blocks_of(module_.matrix)) {
    PolyMatrix sub(f, idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j)
        sub(i, j) = module_.matrix(idx[i], idx[j]);
    BlockData b{idx, DiffModule(f, Derivation::ddt, module_.interval, std::move(sub)), false, {}, 0};
    b.robba = robba_certificate(b.module);
    if (!b.robba) {
      CompanionData c = cyclic_vector(b.module, Q(0), budget_);
      b.companion = companion_polynomial(c);
      b.cyclic_attempts = c.attempts;
    }
    blocks_.push_back(std::move(b));
  }
}

RadiiEngine& RadiiEngine::descendant(size_t b) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = desc_.find(b);
  if (it == desc_.end())
    it = desc_.emplace(b, std::make_unique<RadiiEngine>(frobenius_descendant(blocks_[b].module), budget_)).first;
  return *it->second;
}

RadiiMultiset RadiiEngine::block_radii(size_t b, const Q& r, long depth) {
  const BlockData& blk = blocks_[b];
  const FieldMode& f = module_.mode;
  RadiiMultiset cd;
  if (blk.robba) {
    cd.add(Q(0), static_cast<long>(blk.indices.size()), Certainty::exact);
    return cd;
  }
  cd = christol_dwork(newton_polygon(blk.companion, r), r, f);
  if (!f.is_padic() || cd.fully_exact() || depth <= 0)
    return cd;
  long p = f.p();
  RadiiMultiset desc = descendant(b).radii(r * p, depth - 1);
  RadiiMultiset inv = invert_descendant_multiset(desc, p);
  Q c = f.c_omega();
  RadiiMultiset out, visible, hidden;
  long hidden_count = 0;
  for (const auto& e : cd.entries)
    if (e.certainty == Certainty::exact)
      visible.add(e.irlog, e.mult, e.certainty);
    else
      hidden_count += e.mult;
  RadiiMultiset inv_visible;
  for (const auto& e : inv.entries) {
    if (e.certainty == Certainty::exact && e.irlog > c)
      inv_visible.add(e.irlog, e.mult, e.certainty);
    else
      hidden.add(e.irlog, e.mult, e.certainty);
  }
  if (!(inv_visible == visible) || hidden.rank() != hidden_count)
    fail(Errc::inversion_infeasible, "descendant radii " + desc.str() + " disagree with visible radii " + cd.str());
  out.add(visible);
  out.add(hidden);
  return out;
}

RadiiMultiset RadiiEngine::radii(const Q& r, long depth) {
  RadiiMultiset out;
  for (size_t b = 0; b < blocks_.size(); ++b)
    out.add(block_radii(b, r, depth));
  return out;
}

RadiiMultiset module_radii(const DiffModule& m, const Q& r, long depth) {
  if (!m.interval.contains(r))
    fail(Errc::domain, "r = " + q_str(r) + " lies outside the module's interval");
  if (m.rank() == 0)
    return {};
  RadiiEngine eng(m);
  return eng.radii(r, depth);
}

std::vector<OracleStep> spectral_radius_oracle(const DiffModule& m0, const Q& r, long k_max) {
  if (k_max < 1)
    fail(Errc::parameter, "k_max must be at least 1");
  DiffModule m = as_ddt(m0);
  const FieldMode& f = m.mode;
  size_t n = m.rank();
  Q c = f.c_omega();
  unsigned long p = f.is_padic() ? static_cast<unsigned long>(f.p()) : 0;
  auto fval = [p](long k) { return p ? factorial_val(k, p) : 0L; };

  std::vector<long> schedule;
  for (long k = static_cast<long>(std::max<size_t>(n, 1)); k <= k_max; k *= 2)
    schedule.push_back(k);
  if (schedule.empty() || schedule.back() != k_max)
    schedule.push_back(k_max);

  // w[i] = w_r(N_i), N_0 = I.
  std::vector<ExtQ> w{ExtQ(0)};
  PolyMatrix nk = PolyMatrix::identity(f, n);
  std::vector<OracleStep> out;
  bool have_lb = false, have_lo = false;
  Q best_lb, best_lo;
  size_t next = 0;
  for (long k = 1; k <= schedule.back(); ++k) {
    nk = m.matrix * nk + derive(nk, Derivation::ddt);
    w.push_back(nk.gauss_val(r));
    // |D^k| <= max_i |C(k,i)| |d^{k-i}| |N_i| with |d^j| = |j!| rho^{-j}.
    ExtQ lb = ExtQ::inf();
    for (long i = 0; i <= k; ++i) {
      long binom = fval(k) - fval(i) - fval(k - i);
      ExtQ term = ExtQ(Q(binom + fval(k - i))) - ExtQ(Q(r * (k - i))) + w[static_cast<size_t>(i)];
      lb = min(lb, term);
    }
    Q lbk = lb.value() / k;
    if (!have_lb || lbk > best_lb)
      best_lb = lbk;
    have_lb = true;
    if (k == schedule[next]) {
      // The estimate is taken at a multiple of the rank, where block-periodic
      // matrices such as N_{lambda,h,e,m} do not overshoot.
      long kn = n ? k / static_cast<long>(n) * static_cast<long>(n) : k;
      Q lo = 0;
      if (kn > 0 && w[static_cast<size_t>(kn)].finite())
        lo = std::max(Q(0), Q(c - r - w[static_cast<size_t>(kn)].value() / kn));
      if (!have_lo || lo > best_lo)
        best_lo = lo;
      have_lo = true;
      Q hi = c - r - best_lb;
      out.push_back({k, best_lo, hi});
      ++next;
    }
  }
  return out;
}

} // namespace convlab
