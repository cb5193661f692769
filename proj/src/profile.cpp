#include "convlab/profile.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <thread>

namespace convlab {

void PAFunction::append(const Q& a, const Q& b, const AffinePiece& piece) {
  if (breakpoints.empty()) {
    breakpoints = {a, b};
    pieces = {piece};
    return;
  }
  if (a != breakpoints.back() || b <= a)
    fail(Errc::interval_order, "piece [" + q_str(a) + ", " + q_str(b) + "] does not continue the function");
  if (pieces.back() == piece) {
    breakpoints.back() = b;
    return;
  }
  breakpoints.push_back(b);
  pieces.push_back(piece);
}

Q PAFunction::operator()(const Q& r) const {
  if (pieces.empty() || r < left() || r > right())
    fail(Errc::domain, "r = " + q_str(r) + " outside the profile domain");
  auto it = std::upper_bound(breakpoints.begin() + 1, breakpoints.end() - 1, r);
  size_t k = static_cast<size_t>(it - breakpoints.begin()) - 1;
  return pieces[k].at(r);
}

bool PAFunction::certified() const {
  return std::all_of(pieces.begin(), pieces.end(), [](const AffinePiece& p) { return p.certified; });
}

namespace {

// Index of the piece containing the open cell (x, y).
size_t piece_index(const PAFunction& f, const Q& mid) {
  auto it = std::upper_bound(f.breakpoints.begin() + 1, f.breakpoints.end() - 1, mid);
  return static_cast<size_t>(it - f.breakpoints.begin()) - 1;
}

std::vector<Q> common_breakpoints(const std::vector<const PAFunction*>& fs) {
  std::set<Q> s;
  for (const auto* f : fs)
    s.insert(f->breakpoints.begin(), f->breakpoints.end());
  return {s.begin(), s.end()};
}

} // namespace

PAFunction pa_sum(const PAFunction& a, const PAFunction& b) {
  if (a.pieces.empty() || a.left() != b.left() || a.right() != b.right())
    fail(Errc::domain, "profile domains differ");
  std::vector<Q> xs = common_breakpoints({&a, &b});
  PAFunction out;
  for (size_t k = 0; k + 1 < xs.size(); ++k) {
    Q mid = (xs[k] + xs[k + 1]) / 2;
    const AffinePiece& pa = a.pieces[piece_index(a, mid)];
    const AffinePiece& pb = b.pieces[piece_index(b, mid)];
    out.append(xs[k], xs[k + 1], {pa.slope + pb.slope, pa.intercept + pb.intercept, pa.certified && pb.certified});
  }
  return out;
}

long default_thread_count() {
  if (const char* env = std::getenv("CONVLAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<long>(hw) : 1;
}

namespace {

struct Sample {
  std::vector<Q> f;
  bool exact = true;
};

class Sampler {
public:
  Sampler(const DiffModule& m, long depth, long threads) : eng_(m), depth_(depth), threads_(threads) {}

  const Sample& at(const Q& r) {
    auto it = cache_.find(r);
    if (it != cache_.end())
      return it->second;
    return cache_.emplace(r, evaluate(r)).first->second;
  }

  // Evaluates the uncached points in parallel; results merge into the cache in
  // ascending order of r so the outcome does not depend on scheduling.
  void prefetch(const std::vector<Q>& rs) {
    std::vector<Q> todo;
    for (const Q& r : std::set<Q>(rs.begin(), rs.end()))
      if (!cache_.count(r))
        todo.push_back(r);
    std::vector<Sample> out(todo.size());
    std::vector<std::exception_ptr> err(todo.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next++; i < todo.size(); i = next++) {
        try {
          out[i] = evaluate(todo[i]);
        } catch (...) {
          err[i] = std::current_exception();
        }
      }
    };
    size_t nt = std::min(todo.size(), static_cast<size_t>(std::max(1L, threads_)));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < nt; ++t)
      pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
      th.join();
    for (size_t i = 0; i < todo.size(); ++i) {
      if (err[i])
        std::rethrow_exception(err[i]);
      cache_.emplace(todo[i], std::move(out[i]));
    }
  }

private:
  Sample evaluate(const Q& r) {
    RadiiMultiset ms;
    try {
      ms = eng_.radii(r, depth_);
    } catch (const Error& e) {
      if (e.code() != Errc::ambiguous_inversion)
        throw;
      ms = eng_.radii(r, 0);
    }
    Sample s;
    s.exact = ms.fully_exact();
    for (const auto& e : ms.entries)
      for (long k = 0; k < e.mult; ++k)
        s.f.push_back(r + e.irlog);
    return s;
  }

  RadiiEngine eng_;
  long depth_;
  long threads_;
  std::map<Q, Sample> cache_;
};

class Fitter {
public:
  Fitter(Sampler& s, size_t n, long refine, Profile& out) : s_(s), n_(n), refine_(refine), out_(out) {
    out_.f.assign(n, PAFunction{});
  }

  bool fit(const Q& a, const Q& b, long level) {
    const Sample& sa = s_.at(a);
    const Sample& sb = s_.at(b);
    if (!sa.exact || !sb.exact) {
      for (size_t i = 0; i < n_; ++i)
        out_.f[i].append(a, b, chord(i, a, b, false));
      flag(a, b, "lower-bound radii at a sample point");
      return false;
    }
    Q mid = (a + b) / 2;
    const Sample& sm = s_.at(mid);
    std::vector<std::vector<std::pair<Q, AffinePiece>>> local(n_);
    size_t done = 0;
    for (size_t i = 0; i < n_; ++i) {
      AffinePiece line = chord(i, a, b, true);
      if (sm.exact && sm.f[i] == line.at(mid) && slope_ok(line.slope)) {
        local[i] = {{b, line}};
        ++done;
      } else if (sm.exact && kink(i, a, b, local[i])) {
        ++done;
      }
    }
    if (done < n_ && level < refine_) {
      bool left = fit(a, mid, level + 1);
      bool right = fit(mid, b, level + 1);
      return left && right;
    }
    for (size_t i = 0; i < n_; ++i) {
      if (local[i].empty()) {
        out_.f[i].append(a, b, chord(i, a, b, false));
        continue;
      }
      Q x = a;
      for (const auto& [y, piece] : local[i]) {
        out_.f[i].append(x, y, piece);
        x = y;
      }
    }
    if (done < n_) {
      flag(a, b, "no affine fit within the refinement budget");
      return false;
    }
    return true;
  }

private:
  AffinePiece chord(size_t i, const Q& a, const Q& b, bool certified) {
    Q fa = s_.at(a).f[i], fb = s_.at(b).f[i];
    Q slope = (fb - fa) / (b - a);
    return {slope, fa - slope * a, certified};
  }

  bool slope_ok(const Q& s) const { return s.get_den() <= static_cast<unsigned long>(n_); }

  // Single kink: lines through the samples nearest each end, validated at the
  // intersection and at the midpoints of both halves.
  bool kink(size_t i, const Q& a, const Q& b, std::vector<std::pair<Q, AffinePiece>>& out) {
    for (long k : {4L, 16L}) {
      Q eps = (b - a) / k;
      const Sample& sl = s_.at(a + eps);
      const Sample& sr = s_.at(b - eps);
      if (!sl.exact || !sr.exact)
        return false;
      AffinePiece left = chord(i, a, a + eps, true);
      AffinePiece right = chord(i, b - eps, b, true);
      if (left.slope == right.slope || !slope_ok(left.slope) || !slope_ok(right.slope))
        continue;
      Q x = (right.intercept - left.intercept) / (left.slope - right.slope);
      if (x < a + eps || x > b - eps)
        continue;
      bool ok = true;
      for (const Q& y : {x, Q((a + x) / 2), Q((x + b) / 2)}) {
        const Sample& sy = s_.at(y);
        Q want = y <= x ? left.at(y) : right.at(y);
        if (!sy.exact || sy.f[i] != want)
          ok = false;
      }
      if (!ok)
        continue;
      out = {{x, left}, {b, right}};
      return true;
    }
    return false;
  }

  void flag(const Q& a, const Q& b, const std::string& why) {
    out_.flags.push_back("uncertified span [" + q_str(a) + ", " + q_str(b) + "]: " + why);
  }

  Sampler& s_;
  size_t n_;
  long refine_;
  Profile& out_;
};

} // namespace

Profile radii_profile(const DiffModule& m, const Q& r1, const Q& r2, const ProfileOptions& opt) {
  if (opt.grid < 2)
    fail(Errc::parameter, "grid must be at least 2");
  if (opt.refine < 0 || opt.depth < 0)
    fail(Errc::parameter, "refine and depth must be nonnegative");
  if (!(r1 < r2))
    fail(Errc::interval_order, "profile needs r1 < r2");
  if (!m.interval.contains(r1) || !m.interval.contains(r2))
    fail(Errc::domain, "[" + q_str(r1) + ", " + q_str(r2) + "] is not inside the module's interval");
  Profile out;
  if (m.rank() == 0)
    return out;
  long threads = opt.threads > 0 ? opt.threads : default_thread_count();
  Sampler s(m, opt.depth, threads);
  Q h = (r2 - r1) / opt.grid;
  std::vector<Q> pts;
  for (long k = 0; k < opt.grid; ++k) {
    Q a = r1 + h * k;
    for (long j = 0; j < 4; ++j)
      pts.push_back(a + h * j / 4);
  }
  pts.push_back(r2);
  s.prefetch(pts);
  Fitter fit(s, m.rank(), opt.refine, out);
  for (long k = 0; k < opt.grid; ++k) {
    ++out.spans;
    if (fit.fit(r1 + h * k, k + 1 == opt.grid ? r2 : r1 + h * (k + 1), 0))
      ++out.certified_spans;
  }
  return out;
}

bool VariationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass(); });
}

const PropertyCheck& VariationReport::get(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name)
      return c;
  fail(Errc::parameter, "no check named " + name);
}

VariationReport variation_check(const std::vector<PAFunction>& f, VariationContext ctx) {
  PropertyCheck convex{"convexity"}, integral{"integrality"}, slopes{"slope-set"}, mono{"monotonicity"};
  size_t n = f.size();
  if (n > 0) {
    std::vector<const PAFunction*> ptrs;
    for (const auto& g : f)
      ptrs.push_back(&g);
    std::vector<Q> xs = common_breakpoints(ptrs);
    size_t cells = xs.size() - 1;
    // slope[i][k], value at the cell midpoint, certification; for f_i and F_i.
    std::vector<std::vector<Q>> fs(n, std::vector<Q>(cells)), fv(n, std::vector<Q>(cells));
    std::vector<std::vector<Q>> Fs(n, std::vector<Q>(cells));
    std::vector<std::vector<bool>> cert(n, std::vector<bool>(cells));
    for (size_t k = 0; k < cells; ++k) {
      Q mid = (xs[k] + xs[k + 1]) / 2;
      Q acc = 0;
      bool ok = true;
      for (size_t i = 0; i < n; ++i) {
        const AffinePiece& p = f[i].pieces[piece_index(f[i], mid)];
        fs[i][k] = p.slope;
        fv[i][k] = p.at(mid);
        acc += p.slope;
        Fs[i][k] = acc;
        ok = ok && p.certified;
        cert[i][k] = ok;
      }
    }
    auto name = [](const char* pre, size_t i) { return std::string(pre) + "_" + std::to_string(i + 1); };
    auto cell = [&](size_t k) { return "[" + q_str(xs[k]) + ", " + q_str(xs[k + 1]) + "]"; };
    auto den_ok = [n](const Q& s) { return s.get_den() <= static_cast<unsigned long>(n); };
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < cells; ++k) {
        if (!cert[i][k])
          continue;
        Q mid = (xs[k] + xs[k + 1]) / 2;
        ++slopes.checked;
        if (!den_ok(fs[i][k]))
          slopes.violations.push_back(name("f", i) + " slope " + q_str(fs[i][k]) + " on " + cell(k));
        if (!den_ok(Fs[i][k]))
          slopes.violations.push_back(name("F", i) + " slope " + q_str(Fs[i][k]) + " on " + cell(k));
        if (i + 1 == n || fv[i][k] > fv[i + 1][k]) {
          ++integral.checked;
          if (!q_is_integer(Fs[i][k]))
            integral.violations.push_back(name("F", i) + " slope " + q_str(Fs[i][k]) + " on " + cell(k));
        }
        if (k + 1 < cells && cert[i][k + 1]) {
          ++convex.checked;
          if (Fs[i][k] > Fs[i][k + 1])
            convex.violations.push_back(name("F", i) + " slope drops from " + q_str(Fs[i][k]) + " to " +
                                        q_str(Fs[i][k + 1]) + " at r = " + q_str(xs[k + 1]));
        }
        if (ctx == VariationContext::disc && fv[i][k] > mid) {
          ++mono.checked;
          if (Fs[i][k] > 0)
            mono.violations.push_back(name("F", i) + " slope " + q_str(Fs[i][k]) + " > 0 on " + cell(k) +
                                      " where " + name("f", i) + " > r");
        }
      }
  }
  VariationReport rep;
  rep.checks = {convex, integral, slopes};
  if (ctx == VariationContext::disc)
    rep.checks.push_back(mono);
  return rep;
}

} // namespace convlab
