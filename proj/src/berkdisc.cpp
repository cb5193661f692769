#include "convlab/berkdisc.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace convlab {

const char* point_type_name(PointType t) {
  switch (t) {
  case PointType::t1:
    return "T1";
  case PointType::t2:
    return "T2";
  case PointType::t3:
    return "T3";
  case PointType::t4:
    return "T4";
  }
  return "?";
}

namespace {

ExtQ val_diff(const Scalar& a, const Scalar& b) { return (a - b).val(); }

[[noreturn]] void unsupported(const std::string& what) { fail(Errc::unsupported_point, what); }

} // namespace

Scalar canonical_center(const Scalar& z, const ExtQ& r) {
  if (r.is_inf())
    return z;
  const FieldMode& f = z.field();
  Z k = q_ceil(r.value());
  if (f.is_padic()) {
    if (z.is_zero())
      return z;
    long p = f.p();
    long v = padic_val(z.padic_value(), static_cast<unsigned long>(p));
    if (Z(v) >= k)
      return Scalar(f, 0);
    // z = p^v a/b with a, b prime to p; keep a b^{-1} mod p^{k-v} in [0, p^{k-v}).
    Q pv = 1;
    Z pz = p;
    for (long i = 0; i < std::abs(v); ++i)
      pv = v > 0 ? Q(pv * p) : Q(pv / p);
    Q u = z.padic_value() / pv;
    Z mod;
    mpz_pow_ui(mod.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(Z(k - v).get_si()));
    Z inv;
    mpz_invert(inv.get_mpz_t(), u.get_den_mpz_t(), mod.get_mpz_t());
    Z rep = u.get_num() * inv;
    mpz_mod(rep.get_mpz_t(), rep.get_mpz_t(), mod.get_mpz_t());
    return Scalar(f, Q(rep) * pv);
  }
  if (Z(z.prec()) < k)
    fail(Errc::precision_exhausted, "center known only to order " + std::to_string(z.prec()));
  std::vector<Scalar::Term> kept;
  for (const auto& t : z.terms())
    if (Z(t.first) < k)
      kept.push_back(t);
  return Scalar::u_series(f, std::move(kept));
}

DiscPoint DiscPoint::classical(const Scalar& z) {
  if (!z.is_exact())
    fail(Errc::precision_exhausted, "a classical point needs an exact center");
  return DiscPoint(PointType::t1, z);
}

DiscPoint DiscPoint::gauss(const Scalar& z, const Q& r) {
  DiscPoint x(PointType::t2, z);
  x.r_ = r;
  return x;
}

DiscPoint DiscPoint::irrational(const Scalar& z, const Q& lo, const Q& hi) {
  if (!(lo < hi))
    fail(Errc::interval_order, "type-3 bracket needs lo < hi");
  DiscPoint x(PointType::t3, z);
  x.bracket_ = {lo, hi};
  return x;
}

DiscPoint DiscPoint::nested(std::vector<std::pair<Scalar, Q>> chain, const Q& limit) {
  if (chain.empty())
    fail(Errc::parameter, "type-4 chain is empty");
  for (size_t k = 0; k < chain.size(); ++k) {
    if (!(chain[k].second < limit))
      fail(Errc::parameter, "chain radius " + q_str(chain[k].second) + " does not exceed the declared limit");
    if (k == 0)
      continue;
    if (!(chain[k - 1].second < chain[k].second))
      fail(Errc::parameter, "chain radii must strictly decrease");
    if (val_diff(chain[k].first, chain[k - 1].first) < ExtQ(chain[k - 1].second))
      fail(Errc::parameter, "chain disc " + std::to_string(k) + " is not inside its predecessor");
  }
  DiscPoint x(PointType::t4, chain.back().first);
  x.r_ = limit;
  x.chain_ = std::move(chain);
  return x;
}

ExtQ DiscPoint::r() const {
  switch (type_) {
  case PointType::t1:
    return ExtQ::inf();
  case PointType::t3:
    unsupported("type-3 marker has no rational radius");
  default:
    return ExtQ(r_);
  }
}

Scalar DiscPoint::canonical_center() const {
  switch (type_) {
  case PointType::t3:
    return convlab::canonical_center(center_, ExtQ(bracket_.second));
  case PointType::t4:
    return convlab::canonical_center(center_, ExtQ(chain_.back().second));
  default:
    return convlab::canonical_center(center_, r());
  }
}

std::string DiscPoint::str() const {
  std::string z = canonical_center().str();
  switch (type_) {
  case PointType::t1:
    return "zeta(" + z + ", inf)";
  case PointType::t2:
    return "zeta(" + z + ", " + q_str(r_) + ")";
  case PointType::t3:
    return "zeta3(" + z + ", (" + q_str(bracket_.first) + ", " + q_str(bracket_.second) + "))";
  case PointType::t4:
    return "zeta4(" + z + ", " + q_str(r_) + ", chain " + std::to_string(chain_.size()) + ")";
  }
  return "?";
}

bool operator==(const DiscPoint& a, const DiscPoint& b) {
  if (a.type_ != b.type_ || !(a.field() == b.field()))
    return false;
  switch (a.type_) {
  case PointType::t1:
    return a.center_ == b.center_;
  case PointType::t2:
    return a.r_ == b.r_ && val_diff(a.center_, b.center_) >= ExtQ(a.r_);
  case PointType::t3:
    return a.bracket_ == b.bracket_ && val_diff(a.center_, b.center_) >= ExtQ(a.bracket_.second);
  case PointType::t4:
    if (a.r_ != b.r_ || a.chain_.size() != b.chain_.size())
      return false;
    for (size_t k = 0; k < a.chain_.size(); ++k)
      if (a.chain_[k].second != b.chain_[k].second ||
          val_diff(a.chain_[k].first, b.chain_[k].first) < ExtQ(a.chain_[k].second))
        return false;
    return true;
  }
  return false;
}

bool operator<(const DiscPoint& a, const DiscPoint& b) {
  auto key = [](const DiscPoint& x) {
    ExtQ r = x.type_ == PointType::t3 ? ExtQ(x.bracket_.first) : x.r();
    return std::make_tuple(r, static_cast<int>(x.type_), x.canonical_center().str());
  };
  return key(a) < key(b);
}

ExtQ diameter(const DiscPoint& x) { return x.r(); }

namespace {

// Center z with H(x, s) = zeta_{z,s}, for s strictly below the diameter.
Scalar center_at(const DiscPoint& x, const Q& s) {
  switch (x.type()) {
  case PointType::t3:
    if (s > x.bracket().first)
      unsupported("level " + q_str(s) + " inside the type-3 bracket");
    return x.center();
  case PointType::t4:
    for (const auto& [z, rk] : x.chain())
      if (rk >= s)
        return z;
    unsupported("type-4 chain too short to resolve level " + q_str(s));
  default:
    return x.center();
  }
}

// Is s >= diameter(x)? (H(x, s) = x.)
bool at_or_below_point(const DiscPoint& x, const Q& s) {
  if (x.type() == PointType::t3) {
    if (s >= x.bracket().second)
      return true;
    if (s <= x.bracket().first)
      return false;
    unsupported("level " + q_str(s) + " inside the type-3 bracket");
  }
  return ExtQ(s) >= x.r();
}

} // namespace

bool in_disc(const DiscPoint& x, const Q& r_beta) {
  if (val_diff(x.center(), Scalar(x.field(), 0)) < ExtQ(r_beta))
    return false;
  switch (x.type()) {
  case PointType::t3:
    return x.bracket().first >= r_beta;
  case PointType::t4:
    return x.chain().front().second >= r_beta && val_diff(x.chain().front().first, Scalar(x.field(), 0)) >= ExtQ(r_beta);
  default:
    return x.r() >= ExtQ(r_beta);
  }
}

DiscPoint homotopy(const DiscPoint& x, const Q& s, const Q& r_beta) {
  if (s < r_beta)
    fail(Errc::containment, "radius p^-" + q_str(s) + " exceeds the ambient disc");
  if (!in_disc(x, r_beta))
    fail(Errc::containment, x.str() + " is not in the ambient disc");
  if (at_or_below_point(x, s))
    return x;
  return DiscPoint::gauss(center_at(x, s), s);
}

bool dominates(const DiscPoint& y, const DiscPoint& x) {
  if (y == x)
    return true;
  switch (y.type()) {
  case PointType::t1:
  case PointType::t4:
    return false;
  case PointType::t2: {
    Q s = y.r().value();
    if (at_or_below_point(x, s))
      return false;
    return val_diff(center_at(x, s), y.center()) >= ExtQ(s);
  }
  case PointType::t3: {
    const auto& [lo, hi] = y.bracket();
    if (x.type() == PointType::t3) {
      if (lo >= x.bracket().second)
        return false;
      if (hi > x.bracket().first)
        unsupported("type-3 brackets overlap");
    } else if (ExtQ(hi) > x.r()) {
      if (ExtQ(lo) >= x.r())
        return false;
      unsupported("diameter of " + x.str() + " lies inside the type-3 bracket");
    }
    ExtQ v = val_diff(center_at(x, hi), y.center());
    if (v >= ExtQ(hi))
      return true;
    if (v <= ExtQ(lo))
      return false;
    unsupported("center distance lies inside the type-3 bracket");
  }
  }
  return false;
}

ExtQ path_agreement(const DiscPoint& x, const DiscPoint& y) {
  if (x.type() == PointType::t4 || y.type() == PointType::t4) {
    const DiscPoint& c = x.type() == PointType::t4 ? x : y;
    const DiscPoint& o = x.type() == PointType::t4 ? y : x;
    if (o == c)
      return c.r();
    ExtQ best = ExtQ::neg_inf();
    for (const auto& [z, rk] : c.chain()) {
      ExtQ a = min(ExtQ(rk), path_agreement(DiscPoint::gauss(z, rk), o));
      best = max(best, a);
    }
    const auto& last = c.chain().back();
    if (best == ExtQ(last.second)) {
      ExtQ further = o.type() == PointType::t4 ? ExtQ::inf() : min(o.r(), val_diff(o.center(), last.first));
      if (further > ExtQ(last.second))
        unsupported("type-4 chain too short to separate it from " + o.str());
    }
    return best;
  }
  if (x.type() == PointType::t3 || y.type() == PointType::t3) {
    const DiscPoint& c = x.type() == PointType::t3 ? x : y;
    const DiscPoint& o = x.type() == PointType::t3 ? y : x;
    if (o == c)
      unsupported("type-3 marker has no rational radius");
    ExtQ a = val_diff(c.center(), o.center());
    if (o.type() == PointType::t3)
      a = min(a, ExtQ(std::min(c.bracket().first, o.bracket().first)));
    else
      a = min(a, o.r());
    if (a <= ExtQ(c.bracket().first))
      return a;
    unsupported("root paths separate inside the type-3 bracket");
  }
  return min(min(x.r(), y.r()), val_diff(x.center(), y.center()));
}

Skeleton::Skeleton(std::vector<DiscPoint> generators, const Q& r_beta) : r_beta_(r_beta) {
  if (generators.empty())
    fail(Errc::parameter, "a skeleton needs at least one generator");
  const FieldMode& f = generators.front().field();
  for (const auto& g : generators) {
    if (!(g.field() == f))
      fail(Errc::mode_mismatch, "generators live over different fields");
    if (g.type() == PointType::t3)
      unsupported("type-3 markers cannot generate a skeleton");
    if (!in_disc(g, r_beta))
      fail(Errc::containment, g.str() + " is not in the ambient disc");
  }
  std::sort(generators.begin(), generators.end());
  for (auto& g : generators)
    if (std::find(gens_.begin(), gens_.end(), g) == gens_.end())
      gens_.push_back(std::move(g));

  auto vertex_index = [this](const DiscPoint& v) {
    auto it = std::find(vertices_.begin(), vertices_.end(), v);
    if (it != vertices_.end())
      return static_cast<size_t>(it - vertices_.begin());
    vertices_.push_back(v);
    return vertices_.size() - 1;
  };
  vertex_index(root());
  std::set<std::pair<size_t, size_t>> seen;
  for (size_t i = 0; i < gens_.size(); ++i) {
    std::vector<ExtQ> lv = levels(i);
    std::vector<size_t> idx;
    for (const auto& s : lv)
      idx.push_back(vertex_index(s == gens_[i].r() ? gens_[i] : homotopy(gens_[i], s.value(), r_beta_)));
    for (size_t k = 0; k + 1 < idx.size(); ++k)
      if (seen.insert({idx[k], idx[k + 1]}).second)
        edges_.push_back({idx[k], idx[k + 1], lv[k].value(), lv[k + 1], i});
  }
}

DiscPoint Skeleton::root() const { return DiscPoint::gauss(Scalar(gens_.front().field(), 0), r_beta_); }

std::vector<ExtQ> Skeleton::levels(size_t i) const {
  std::set<ExtQ> s{ExtQ(r_beta_), gens_[i].r()};
  for (size_t j = 0; j < gens_.size(); ++j)
    if (j != i)
      s.insert(max(ExtQ(r_beta_), path_agreement(gens_[i], gens_[j])));
  return {s.begin(), s.end()};
}

bool Skeleton::contains(const DiscPoint& x) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const DiscPoint& g) { return dominates(x, g); });
}

DiscPoint retract(const Skeleton& s, const DiscPoint& x) {
  if (s.contains(x))
    return x;
  ExtQ best = ExtQ(s.r_beta());
  for (const auto& g : s.generators())
    best = max(best, path_agreement(x, g));
  return homotopy(x, best.value(), s.r_beta());
}

long ControllingSubdivision::added_count() const {
  return static_cast<long>(std::count_if(vertices.begin(), vertices.end(), [](const auto& v) { return v.added; }));
}

bool ControllingSubdivision::strict() const {
  return std::all_of(vertices.begin(), vertices.end(),
                     [](const SubdivisionVertex& v) { return v.point.type() == PointType::t2; });
}

ControllingSubdivision controlling_subdivision(const Skeleton& s, const std::vector<BranchFunction>& fs) {
  ControllingSubdivision out;
  const auto& gens = s.generators();
  for (const auto& v : s.vertices())
    out.vertices.push_back({v, false, {}});
  auto find_vertex = [&](const DiscPoint& p) -> std::optional<size_t> {
    for (size_t i = 0; i < out.vertices.size(); ++i)
      if (out.vertices[i].point == p)
        return i;
    return std::nullopt;
  };

  std::vector<DiscPoint> added;
  for (size_t k = 0; k < fs.size(); ++k) {
    const auto& bf = fs[k];
    if (bf.branch >= gens.size())
      fail(Errc::index_range, "branch " + std::to_string(bf.branch) + " has no generator");
    const PAFunction& f = bf.f;
    if (f.pieces.empty())
      fail(Errc::parameter, "empty function on branch " + std::to_string(bf.branch));
    if (f.left() < s.r_beta() || ExtQ(f.right()) > gens[bf.branch].r())
      fail(Errc::domain, "function " + std::to_string(k) + " leaves its branch");
    for (size_t j = 0; j < f.pieces.size(); ++j)
      if (!f.pieces[j].certified)
        out.flags.push_back("function " + std::to_string(k) + " uncertified on [" + q_str(f.breakpoints[j]) + ", " +
                            q_str(f.breakpoints[j + 1]) + "]");
    for (size_t j = 1; j + 1 < f.breakpoints.size(); ++j) {
      DiscPoint v = homotopy(gens[bf.branch], f.breakpoints[j], s.r_beta());
      if (!find_vertex(v) && std::find(added.begin(), added.end(), v) == added.end())
        added.push_back(v);
    }
  }
  std::sort(added.begin(), added.end());
  for (auto& v : added)
    out.vertices.push_back({v, true, {}});

  // Edges: every generator path cut at all vertices lying on it.
  std::set<std::pair<size_t, size_t>> seen;
  for (size_t i = 0; i < gens.size(); ++i) {
    std::map<ExtQ, size_t> on_path;
    for (size_t v = 0; v < out.vertices.size(); ++v) {
      const DiscPoint& p = out.vertices[v].point;
      if (dominates(p, gens[i]))
        on_path[p == gens[i] ? gens[i].r() : p.r()] = v;
    }
    for (auto it = on_path.begin(); std::next(it) != on_path.end(); ++it) {
      auto nx = std::next(it);
      if (seen.insert({it->second, nx->second}).second)
        out.edges.push_back({it->second, nx->second, it->first.value(), nx->first, i});
    }
  }

  for (auto& v : out.vertices) {
    if (v.point.type() != PointType::t2)
      continue;
    Q r = v.point.r().value();
    for (size_t k = 0; k < fs.size(); ++k) {
      const PAFunction& f = fs[k].f;
      if (!dominates(v.point, gens[fs[k].branch]) || r < f.left() || r > f.right())
        continue;
      VertexSlope vs{k, std::nullopt, std::nullopt};
      auto it = std::lower_bound(f.breakpoints.begin(), f.breakpoints.end(), r);
      size_t j = static_cast<size_t>(it - f.breakpoints.begin());
      bool at_break = it != f.breakpoints.end() && *it == r;
      if (r > f.left())
        vs.upper = f.pieces[j - 1].slope;
      if (r < f.right())
        vs.lower = f.pieces[at_break ? j : j - 1].slope;
      v.slopes.push_back(vs);
    }
  }
  return out;
}

} // namespace convlab
