#include "convlab/io.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace convlab {

namespace {

[[noreturn]] void schema(const std::string& at, const std::string& msg) {
  fail(Errc::schema, (at.empty() ? std::string("/") : at) + ": " + msg);
}

std::string child(const std::string& at, const std::string& key) {
  std::string k;
  for (char ch : key) {
    if (ch == '~')
      k += "~0";
    else if (ch == '/')
      k += "~1";
    else
      k += ch;
  }
  return at + "/" + k;
}

std::string child(const std::string& at, size_t i) { return at + "/" + std::to_string(i); }

void check_keys(const json& j, const std::string& at, const std::set<std::string>& allowed,
                const std::set<std::string>& required = {}) {
  if (!j.is_object())
    schema(at, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k))
      schema(child(at, k), "unknown key");
  for (const auto& k : required)
    if (!j.contains(k))
      schema(child(at, k), "missing key");
}

Q q_from(const json& j, const std::string& at) {
  if (j.is_number_integer())
    return Q(j.get<long>());
  if (!j.is_string())
    schema(at, "expected a rational string");
  try {
    return parse_q(j.get<std::string>());
  } catch (const Error&) {
    schema(at, "malformed rational '" + j.get<std::string>() + "'");
  }
}

ExtQ ext_from(const json& j, const std::string& at) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf")
      return ExtQ::inf();
    if (s == "-inf")
      return ExtQ::neg_inf();
  }
  return ExtQ(q_from(j, at));
}

long int_from(const json& j, const std::string& at) {
  if (j.is_number_integer())
    return j.get<long>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    try {
      size_t pos = 0;
      long v = std::stol(s, &pos);
      if (pos == s.size())
        return v;
    } catch (const std::exception&) {
    }
  }
  schema(at, "expected an integer");
}

json q_json(const Q& q) { return q_str(q); }

} // namespace

json field_to_json(const FieldMode& f) {
  if (f.is_padic())
    return {{"mode", "padic"}, {"p", f.p()}};
  return {{"mode", "eqchar0"}, {"prec", f.prec()}};
}

FieldMode field_from_json(const json& j, const std::string& at) {
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string())
    schema(child(at, "mode"), "expected \"padic\" or \"eqchar0\"");
  const std::string kind = j["mode"].get<std::string>();
  if (kind == "padic") {
    check_keys(j, at, {"mode", "p"}, {"p"});
    long p = int_from(j["p"], child(at, "p"));
    if (!is_prime(p))
      fail(Errc::non_prime, child(at, "p") + ": " + std::to_string(p) + " is not prime");
    return FieldMode::padic(p);
  }
  if (kind == "eqchar0") {
    check_keys(j, at, {"mode", "prec"}, {"prec"});
    long prec = int_from(j["prec"], child(at, "prec"));
    if (prec < 1)
      schema(child(at, "prec"), "precision must be positive");
    return FieldMode::eqchar0(prec);
  }
  schema(child(at, "mode"), "expected \"padic\" or \"eqchar0\"");
}

json scalar_to_json(const Scalar& s) {
  if (s.field().is_padic() || s.is_rational())
    return q_str(s.rational());
  json u = json::object();
  for (const auto& [k, q] : s.terms())
    u[std::to_string(k)] = q_str(q);
  json out{{"u", u}};
  if (!s.is_exact())
    out["prec"] = s.prec();
  return out;
}

Scalar scalar_from_json(const json& j, const FieldMode& f, const std::string& at) {
  if (!j.is_object())
    return Scalar(f, q_from(j, at));
  if (f.is_padic())
    schema(at, "p-adic coefficients are rational strings");
  check_keys(j, at, {"u", "prec"}, {"u"});
  if (!j["u"].is_object())
    schema(child(at, "u"), "expected an object of u-exponents");
  std::vector<Scalar::Term> terms;
  for (const auto& [k, v] : j["u"].items())
    terms.emplace_back(int_from(json(k), child(child(at, "u"), k)), q_from(v, child(child(at, "u"), k)));
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < terms.size(); ++i)
    if (terms[i].first == terms[i - 1].first)
      schema(child(at, "u"), "repeated exponent");
  long prec = j.contains("prec") ? int_from(j["prec"], child(at, "prec")) : Scalar::exact_prec;
  return Scalar::u_series(f, std::move(terms), prec);
}

json laurent_to_json(const LaurentPoly& p) {
  json out = json::object();
  for (const auto& [e, c] : p.terms())
    out[std::to_string(e)] = scalar_to_json(c);
  if (auto t = p.trunc_order())
    out["O"] = *t;
  return out;
}

LaurentPoly laurent_from_json(const json& j, const FieldMode& f, const std::string& at) {
  if (!j.is_object())
    return LaurentPoly(scalar_from_json(j, f, at), 0);
  std::vector<LaurentPoly::Term> terms;
  long trunc = LaurentPoly::no_trunc;
  std::set<long> seen;
  for (const auto& [k, v] : j.items()) {
    if (k == "O") {
      trunc = int_from(v, child(at, k));
      continue;
    }
    long e = int_from(json(k), child(at, k));
    if (!seen.insert(e).second)
      schema(child(at, k), "repeated exponent");
    terms.emplace_back(e, scalar_from_json(v, f, child(at, k)));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return LaurentPoly::from_terms(f, std::move(terms), trunc);
}

json matrix_to_json(const PolyMatrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.cols(); ++j)
      row.push_back(laurent_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

PolyMatrix matrix_from_json(const json& j, const FieldMode& f, const std::string& at) {
  if (!j.is_array() || j.empty())
    schema(at, "expected a nonempty array of rows");
  size_t n = j.size();
  PolyMatrix m(f, n, n);
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      schema(child(at, i), "expected a row of length " + std::to_string(n));
    for (size_t k = 0; k < n; ++k)
      m(i, k) = laurent_from_json(j[i][k], f, child(child(at, i), k));
  }
  return m;
}

json module_to_json(const DiffModule& m) {
  return {{"mode", field_to_json(m.mode)},
          {"derivation", derivation_name(m.derivation)},
          {"interval", {{"r_min", m.interval.r_min.str()}, {"r_max", m.interval.r_max.str()}}},
          {"matrix", matrix_to_json(m.matrix)}};
}

DiffModule module_from_json(const json& j) {
  check_keys(j, "", {"mode", "derivation", "interval", "matrix", "test_module"}, {"mode", "interval"});
  FieldMode f = field_from_json(j["mode"], "/mode");
  check_keys(j["interval"], "/interval", {"r_min", "r_max"}, {"r_min", "r_max"});
  Interval iv{ext_from(j["interval"]["r_min"], "/interval/r_min"), ext_from(j["interval"]["r_max"], "/interval/r_max")};
  if (iv.r_max < iv.r_min)
    fail(Errc::interval_order, "/interval: r_min exceeds r_max");
  if (iv.r_min.is_inf() || iv.r_max.is_neg_inf())
    fail(Errc::interval_order, "/interval: empty interval");

  if (j.contains("test_module") == j.contains("matrix"))
    schema("/matrix", "exactly one of \"matrix\" and \"test_module\" is required");
  if (j.contains("test_module")) {
    if (j.contains("derivation") && j["derivation"] != "ddt")
      schema("/derivation", "test modules use ddt");
    const json& t = j["test_module"];
    check_keys(t, "/test_module", {"lambda", "h", "e", "m"}, {"lambda", "h"});
    Scalar lambda = scalar_from_json(t["lambda"], f, "/test_module/lambda");
    long h = int_from(t["h"], "/test_module/h");
    long e = t.contains("e") ? int_from(t["e"], "/test_module/e") : 1;
    long mm = t.contains("m") ? int_from(t["m"], "/test_module/m") : 1;
    return test_module(lambda, h, e, mm, f, iv);
  }

  Derivation d;
  if (!j.contains("derivation") || j["derivation"] == "ddt")
    d = Derivation::ddt;
  else if (j["derivation"] == "t_ddt")
    d = Derivation::t_ddt;
  else
    schema("/derivation", "expected \"ddt\" or \"t_ddt\"");
  PolyMatrix n = matrix_from_json(j["matrix"], f, "/matrix");
  if (iv.r_max.is_inf())
    for (size_t r = 0; r < n.rows(); ++r)
      for (size_t c = 0; c < n.cols(); ++c)
        if (!n(r, c).is_zero() && n(r, c).min_exp() < 0)
          fail(Errc::pole_conflict, "/matrix/" + std::to_string(r) + "/" + std::to_string(c) + ": exponent " +
                                        std::to_string(n(r, c).min_exp()) + " but the interval contains r = inf");
  return DiffModule(f, d, iv, std::move(n));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(Errc::io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path + ": " + e.what());
  }
}

DiffModule parse_module_file(const std::string& path) { return module_from_json(read_json_file(path)); }

std::string emit_module(const DiffModule& m) { return module_to_json(m).dump(2) + "\n"; }

json radii_to_json(const RadiiMultiset& r) {
  json arr = json::array();
  for (const auto& e : r.entries) {
    json item = json::array({q_str(e.irlog), e.mult});
    if (e.certainty == Certainty::lower_bound_only)
      item.push_back("lower_bound");
    arr.push_back(item);
  }
  return {{"irlog", arr}};
}

json oracle_to_json(const std::vector<OracleStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps)
    arr.push_back({{"k", s.k}, {"lo", q_str(s.lo)}, {"hi", q_str(s.hi)}});
  return {{"steps", arr}};
}

json newton_to_json(const NewtonPolygon& np) {
  json arr = json::array();
  for (const auto& s : np.segments)
    arr.push_back(json::array({s.root_val.str(), s.mult}));
  return {{"segments", arr}};
}

json pa_to_json(const PAFunction& f) {
  json bps = json::array();
  for (const Q& b : f.breakpoints)
    bps.push_back(q_str(b));
  json pieces = json::array();
  for (const auto& p : f.pieces)
    pieces.push_back({{"slope", q_str(p.slope)}, {"intercept", q_str(p.intercept)}, {"certified", p.certified}});
  return {{"breakpoints", bps}, {"pieces", pieces}};
}

json profile_to_json(const Profile& p) {
  json fs = json::array();
  for (const auto& f : p.f)
    fs.push_back(pa_to_json(f));
  return {{"f", fs}, {"spans", p.spans}, {"certified_spans", p.certified_spans}, {"flags", p.flags}};
}

namespace {

std::vector<Q> all_breakpoints(const Profile& p) {
  std::vector<Q> xs;
  for (const auto& f : p.f)
    xs.insert(xs.end(), f.breakpoints.begin(), f.breakpoints.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

} // namespace

std::string profile_csv(const Profile& p) {
  std::string out = "r";
  for (size_t i = 0; i < p.f.size(); ++i)
    out += ",f_" + std::to_string(i + 1);
  out += "\n";
  for (const Q& r : all_breakpoints(p)) {
    out += q_str(r);
    for (const auto& f : p.f)
      out += "," + q_str(f(r));
    out += "\n";
  }
  return out;
}

std::string profile_svg(const Profile& p) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const double w = 640, h = 400, margin = 40;
  std::vector<Q> xs = all_breakpoints(p);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  if (xs.empty())
    return out + "</svg>\n";
  Q x0 = xs.front(), x1 = xs.back();
  Q y0 = p.f.front()(x0), y1 = y0;
  for (const auto& f : p.f)
    for (const Q& r : xs) {
      y0 = std::min(y0, f(r));
      y1 = std::max(y1, f(r));
    }
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto px = [&](const Q& r) { return fmt(margin + Q((r - x0) / (x1 - x0)).get_d() * (w - 2 * margin)); };
  auto py = [&](const Q& v) {
    double t = y1 == y0 ? 0.5 : Q((v - y0) / (y1 - y0)).get_d();
    return fmt(h - margin - t * (h - 2 * margin));
  };
  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<line x1=\"40\" y1=\"360\" x2=\"600\" y2=\"360\" stroke=\"black\"/>\n";
  out += "<line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"360\" stroke=\"black\"/>\n";
  out += "<text x=\"40\" y=\"380\">r = " + q_str(x0) + "</text>\n";
  out += "<text x=\"600\" y=\"380\" text-anchor=\"end\">r = " + q_str(x1) + "</text>\n";
  out += "<text x=\"44\" y=\"36\">f = " + q_str(y1) + "</text>\n";
  out += "<text x=\"44\" y=\"356\">f = " + q_str(y0) + "</text>\n";
  out += "</g>\n";
  for (size_t i = 0; i < p.f.size(); ++i) {
    const PAFunction& f = p.f[i];
    const char* color = colors[i % 6];
    size_t k = 0;
    while (k < f.pieces.size()) {
      bool cert = f.pieces[k].certified;
      std::string pts = px(f.breakpoints[k]) + "," + py(f(f.breakpoints[k]));
      while (k < f.pieces.size() && f.pieces[k].certified == cert) {
        pts += " " + px(f.breakpoints[k + 1]) + "," + py(f(f.breakpoints[k + 1]));
        ++k;
      }
      out += "<polyline class=\"f_" + std::to_string(i + 1) + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"2\"" + (cert ? "" : " stroke-dasharray=\"6,4\"") + " points=\"" + pts + "\"/>\n";
    }
  }
  return out + "</svg>\n";
}

json point_to_json(const DiscPoint& x) {
  switch (x.type()) {
  case PointType::t1: return {{"type", 1}, {"center", scalar_to_json(x.center())}};
  case PointType::t2: return {{"type", 2}, {"center", scalar_to_json(x.center())}, {"r", x.r().str()}};
  case PointType::t3:
    return {{"type", 3},
            {"center", scalar_to_json(x.center())},
            {"bracket", json::array({q_str(x.bracket().first), q_str(x.bracket().second)})}};
  case PointType::t4: {
    json chain = json::array();
    for (const auto& [z, r] : x.chain())
      chain.push_back({{"center", scalar_to_json(z)}, {"r", q_str(r)}});
    return {{"type", 4}, {"chain", chain}, {"limit", x.r().str()}};
  }
  }
  return {};
}

DiscPoint point_from_json(const json& j, const FieldMode& f, const std::string& at) {
  if (!j.is_object() || !j.contains("type"))
    schema(child(at, "type"), "missing point type");
  long t = int_from(j["type"], child(at, "type"));
  switch (t) {
  case 1:
    check_keys(j, at, {"type", "center"}, {"center"});
    return DiscPoint::classical(scalar_from_json(j["center"], f, child(at, "center")));
  case 2:
    check_keys(j, at, {"type", "center", "r"}, {"center", "r"});
    return DiscPoint::gauss(scalar_from_json(j["center"], f, child(at, "center")), q_from(j["r"], child(at, "r")));
  case 3: {
    check_keys(j, at, {"type", "center", "bracket"}, {"center", "bracket"});
    const json& b = j["bracket"];
    if (!b.is_array() || b.size() != 2)
      schema(child(at, "bracket"), "expected [lo, hi]");
    return DiscPoint::irrational(scalar_from_json(j["center"], f, child(at, "center")),
                                 q_from(b[0], child(child(at, "bracket"), 0)),
                                 q_from(b[1], child(child(at, "bracket"), 1)));
  }
  case 4: {
    check_keys(j, at, {"type", "chain", "limit"}, {"chain", "limit"});
    if (!j["chain"].is_array())
      schema(child(at, "chain"), "expected an array of discs");
    std::vector<std::pair<Scalar, Q>> chain;
    for (size_t i = 0; i < j["chain"].size(); ++i) {
      std::string ai = child(child(at, "chain"), i);
      check_keys(j["chain"][i], ai, {"center", "r"}, {"center", "r"});
      chain.emplace_back(scalar_from_json(j["chain"][i]["center"], f, child(ai, "center")),
                         q_from(j["chain"][i]["r"], child(ai, "r")));
    }
    return DiscPoint::nested(std::move(chain), q_from(j["limit"], child(at, "limit")));
  }
  default:
    schema(child(at, "type"), "point type must be 1, 2, 3 or 4");
  }
}

namespace {

json edge_json(const SkeletonEdge& e) {
  return {{"upper", e.upper}, {"lower", e.lower}, {"r_start", q_str(e.r_start)}, {"r_end", e.r_end.str()},
          {"branch", e.branch}};
}

std::string dot_edges(const std::vector<SkeletonEdge>& edges) {
  std::string out;
  for (const auto& e : edges)
    out += "  v" + std::to_string(e.upper) + " -> v" + std::to_string(e.lower) + " [label=\"[" + q_str(e.r_start) +
           ", " + e.r_end.str() + "]\"];\n";
  return out;
}

} // namespace

json skeleton_to_json(const Skeleton& s) {
  json gens = json::array(), verts = json::array(), edges = json::array();
  for (const auto& g : s.generators())
    gens.push_back(point_to_json(g));
  for (const auto& v : s.vertices())
    verts.push_back(point_to_json(v));
  for (const auto& e : s.edges())
    edges.push_back(edge_json(e));
  return {{"r_beta", q_str(s.r_beta())}, {"generators", gens}, {"vertices", verts}, {"edges", edges}};
}

std::string skeleton_dot(const Skeleton& s) {
  std::string out = "digraph skeleton {\n";
  for (size_t i = 0; i < s.vertices().size(); ++i)
    out += "  v" + std::to_string(i) + " [label=\"" + s.vertices()[i].str() + "\"];\n";
  return out + dot_edges(s.edges()) + "}\n";
}

json subdivision_to_json(const ControllingSubdivision& c) {
  json verts = json::array(), edges = json::array();
  for (const auto& v : c.vertices) {
    json slopes = json::array();
    for (const auto& s : v.slopes)
      slopes.push_back({{"function", s.function},
                        {"upper", s.upper ? json(q_str(*s.upper)) : json(nullptr)},
                        {"lower", s.lower ? json(q_str(*s.lower)) : json(nullptr)}});
    verts.push_back({{"point", point_to_json(v.point)}, {"added", v.added}, {"slopes", slopes}});
  }
  for (const auto& e : c.edges)
    edges.push_back(edge_json(e));
  return {{"vertices", verts}, {"edges", edges}, {"added", c.added_count()}, {"strict", c.strict()},
          {"flags", c.flags}};
}

std::string subdivision_dot(const ControllingSubdivision& c) {
  std::string out = "digraph controlling {\n";
  for (size_t i = 0; i < c.vertices.size(); ++i)
    out += "  v" + std::to_string(i) + " [label=\"" + c.vertices[i].point.str() + "\"" +
           (c.vertices[i].added ? ", shape=box" : "") + "];\n";
  return out + dot_edges(c.edges) + "}\n";
}

namespace {

ExponentMultiset entries_from(const json& j, const std::string& at) {
  if (!j.is_array())
    schema(at, "expected an array of rationals");
  std::vector<Q> v;
  for (size_t i = 0; i < j.size(); ++i)
    v.push_back(q_from(j[i], child(at, i)));
  return ExponentMultiset(std::move(v));
}

json entries_json(const ExponentMultiset& m) {
  json arr = json::array();
  for (const Q& q : m.entries())
    arr.push_back(q_str(q));
  return arr;
}

} // namespace

ExponentJob exponent_job_from_json(const json& j) {
  check_keys(j, "", {"p", "entries", "c", "m_max", "compare"}, {"p", "entries"});
  ExponentJob job;
  job.p = int_from(j["p"], "/p");
  if (!is_prime(job.p))
    fail(Errc::non_prime, "/p: " + std::to_string(job.p) + " is not prime");
  job.entries = entries_from(j["entries"], "/entries");
  if (j.contains("c"))
    job.c = q_from(j["c"], "/c");
  if (j.contains("m_max"))
    job.m_max = int_from(j["m_max"], "/m_max");
  if (j.contains("compare")) {
    job.has_compare = true;
    job.compare = entries_from(j["compare"], "/compare");
  }
  return job;
}

json exponent_job_to_json(const ExponentJob& job) {
  json out{{"p", job.p}, {"entries", entries_json(job.entries)}, {"c", q_str(job.c)}, {"m_max", job.m_max}};
  if (job.has_compare)
    out["compare"] = entries_json(job.compare);
  return out;
}

json exponent_report(const ExponentJob& job) {
  json verdicts = json::array();
  for (const Q& a : job.entries.entries()) {
    LiouvilleVerdict v = liouville_profile(a, job.p, job.m_max);
    json prof = json::array();
    for (const auto& [m, d] : v.profile)
      prof.push_back(json::array({m, d.get_str()}));
    verdicts.push_back({{"entry", q_str(a)}, {"status", liouville_status_name(v.status)}, {"profile", prof},
                        {"note", v.note}});
  }
  LiouvillePartition lp = liouville_partition(job.entries, job.p, job.c, job.m_max);
  json parts = json::array();
  for (const auto& part : lp.parts) {
    json vals = json::array();
    for (size_t i : part)
      vals.push_back(q_str(job.entries.entries()[i]));
    parts.push_back(vals);
  }
  json out{{"p", job.p},
           {"c", q_str(job.c)},
           {"m_max", job.m_max},
           {"entries", entries_json(job.entries)},
           {"verdicts", verdicts},
           {"partition", {{"parts", parts}, {"exact", lp.exact}}},
           {"prepared", prepared(job.entries)}};
  if (job.has_compare) {
    WeakEquivalence w = weakly_equivalent(job.entries, job.compare, job.p, job.c, job.m_max);
    json we{{"against", entries_json(job.compare)}, {"verdict", w.str()}};
    if (!w.consistent)
      we["witness"] = {{"b", w.witness.b}, {"a", w.witness.a}};
    out["weak_equivalence"] = we;
  }
  return out;
}

} // namespace convlab
