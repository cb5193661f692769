#include "convlab/cli.hpp"

#include "convlab/errors.hpp"
#include "convlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace convlab {

namespace {

struct CommandInfo {
  std::vector<std::string> params;
  std::vector<std::string> formats; // first is the default
};

const std::map<std::string, CommandInfo>& commands() {
  static const std::map<std::string, CommandInfo> table{
      {"radii", {{"r", "depth"}, {"json"}}},
      {"profile", {{"r1", "r2", "grid", "refine", "depth", "threads"}, {"csv", "json", "svg"}}},
      {"graph", {{"grid", "refine", "depth", "threads", "r_cap"}, {"json", "dot"}}},
      {"newton", {{"r", "budget"}, {"json"}}},
      {"exponents", {{}, {"json"}}},
      {"descend", {{"r_max"}, {"json"}}},
      {"oracle", {{"r", "k_max"}, {"json"}}},
      {"fuchs", {{"order", "budget"}, {"json"}}},
      {"constant-basis", {{"iterations"}, {"json"}}},
  };
  return table;
}

class Params {
public:
  Params(const JobSpec& job, const CommandInfo& info) : p_(job.params) {
    for (const auto& [k, v] : p_)
      if (std::find(info.params.begin(), info.params.end(), k) == info.params.end())
        fail(Errc::parameter, "unknown parameter '" + k + "' for " + job.command);
  }
  bool has(const std::string& k) const { return p_.count(k) != 0; }
  Q rational(const std::string& k) const {
    auto it = p_.find(k);
    if (it == p_.end())
      fail(Errc::parameter, "missing parameter '" + k + "'");
    return parse_q(it->second);
  }
  Q rational(const std::string& k, const Q& dflt) const { return has(k) ? rational(k) : dflt; }
  long integer(const std::string& k, long dflt) const {
    if (!has(k))
      return dflt;
    Q q = rational(k);
    if (!q_is_integer(q) || !q.get_num().fits_slong_p())
      fail(Errc::parameter, "parameter '" + k + "' must be an integer");
    return q.get_num().get_si();
  }

private:
  std::map<std::string, std::string> p_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

ProfileOptions profile_options(const Params& ps) {
  ProfileOptions opt;
  opt.grid = ps.integer("grid", opt.grid);
  opt.refine = ps.integer("refine", opt.refine);
  opt.depth = ps.integer("depth", opt.depth);
  opt.threads = ps.integer("threads", opt.threads);
  return opt;
}

struct Outcome {
  std::string text;
  std::vector<std::string> flags;
};

Outcome run_radii(const JobSpec& job, const Params& ps) {
  DiffModule m = parse_module_file(job.input_path);
  RadiiMultiset r = module_radii(m, ps.rational("r"), ps.integer("depth", 2));
  Outcome o{dump(radii_to_json(r)), {}};
  for (const auto& e : r.entries)
    if (e.certainty == Certainty::lower_bound_only)
      o.flags.push_back("radii: irlog " + q_str(e.irlog) + " (x" + std::to_string(e.mult) +
                        ") is only a lower bound on the radius at the requested depth");
  return o;
}

Outcome run_profile(const JobSpec& job, const Params& ps, const std::string& fmt) {
  DiffModule m = parse_module_file(job.input_path);
  Profile p = radii_profile(m, ps.rational("r1"), ps.rational("r2"), profile_options(ps));
  Outcome o;
  if (fmt == "csv")
    o.text = profile_csv(p);
  else if (fmt == "svg")
    o.text = profile_svg(p);
  else
    o.text = dump(profile_to_json(p));
  for (const auto& f : p.flags)
    o.flags.push_back("profile: " + f);
  return o;
}

Outcome run_graph(const JobSpec& job, const Params& ps, const std::string& fmt) {
  json in = read_json_file(job.input_path);
  if (!in.is_object())
    fail(Errc::schema, "/: expected an object");
  for (const auto& [k, v] : in.items())
    if (k != "mode" && k != "r_beta" && k != "generators" && k != "module")
      fail(Errc::schema, "/" + k + ": unknown key");
  if (!in.contains("mode") || !in.contains("generators") || !in["generators"].is_array())
    fail(Errc::schema, "/generators: missing key");
  FieldMode f = field_from_json(in["mode"], "/mode");
  Q r_beta = in.contains("r_beta") ? parse_q(in["r_beta"].get<std::string>()) : Q(0);
  std::vector<DiscPoint> gens;
  for (size_t i = 0; i < in["generators"].size(); ++i)
    gens.push_back(point_from_json(in["generators"][i], f, "/generators/" + std::to_string(i)));
  Skeleton s(gens, r_beta);

  Outcome o;
  if (!in.contains("module")) {
    o.text = fmt == "dot" ? skeleton_dot(s) : dump(skeleton_to_json(s));
    return o;
  }
  DiffModule m = module_from_json(in["module"]);
  if (!(m.mode == f))
    fail(Errc::mode_mismatch, "/module: field differs from the skeleton's");
  Q cap = ps.rational("r_cap", r_beta + 4);
  ProfileOptions opt = profile_options(ps);
  std::vector<BranchFunction> fs;
  for (size_t b = 0; b < s.generators().size(); ++b) {
    const DiscPoint& g = s.generators()[b];
    ExtQ top = g.r();
    Q end = top.finite() ? std::min(top.value(), cap) : cap;
    if (end <= r_beta)
      continue;
    Profile p = radii_profile(translate(m, g.center()), r_beta, end, opt);
    for (const auto& fl : p.flags)
      o.flags.push_back("graph: branch " + std::to_string(b) + ": " + fl);
    for (const auto& fi : p.f)
      fs.push_back({b, fi});
  }
  ControllingSubdivision c = controlling_subdivision(s, fs);
  for (const auto& fl : c.flags)
    o.flags.push_back("graph: " + fl);
  if (fmt == "dot") {
    o.text = subdivision_dot(c);
  } else {
    json j = subdivision_to_json(c);
    j["skeleton"] = skeleton_to_json(s);
    o.text = dump(j);
  }
  return o;
}

Outcome run_newton(const JobSpec& job, const Params& ps) {
  DiffModule m = as_ddt(parse_module_file(job.input_path));
  Q r = ps.rational("r");
  CompanionData c = cyclic_vector(m, r, ps.integer("budget", 64));
  NewtonPolygon np = newton_polygon(companion_polynomial(c), r);
  json vec = json::array();
  for (const auto& v : c.vector)
    vec.push_back(laurent_to_json(v));
  json out{{"cyclic_vector", vec},
           {"attempts", c.attempts},
           {"polygon", newton_to_json(np)},
           {"visible", radii_to_json(christol_dwork(np, r, m.mode))}};
  return {dump(out), {}};
}

Outcome run_exponents(const JobSpec& job) {
  return {dump(exponent_report(exponent_job_from_json(read_json_file(job.input_path)))), {}};
}

// The descendant always has a pole at s = 0, so a disc input has to be cut
// down to an annulus first.
Outcome run_descend(const JobSpec& job, const Params& ps) {
  DiffModule m = parse_module_file(job.input_path);
  if (ps.has("r_max")) {
    ExtQ cut(ps.rational("r_max"));
    if (cut < m.interval.r_min || cut > m.interval.r_max)
      fail(Errc::parameter, "r_max = " + cut.str() + " lies outside the module interval");
    m.interval.r_max = cut;
  }
  if (m.interval.is_disc())
    fail(Errc::pole_conflict, "the descendant of a disc module has a pole at 0; pass r_max");
  return {emit_module(frobenius_descendant(m)), {}};
}

Outcome run_oracle(const JobSpec& job, const Params& ps) {
  DiffModule m = parse_module_file(job.input_path);
  return {dump(oracle_to_json(spectral_radius_oracle(m, ps.rational("r"), ps.integer("k_max", 64)))), {}};
}

Outcome run_fuchs(const JobSpec& job, const Params& ps) {
  DiffModule m = parse_module_file(job.input_path);
  FuchsResult fr = fuchs_basis(m, ps.integer("order", 8), ps.integer("budget", 256));
  json out{{"order", fr.order}, {"steps", fr.steps}, {"basis", matrix_to_json(fr.basis)},
           {"matrix", matrix_to_json(fr.matrix)}};
  return {dump(out), {}};
}

Outcome run_constant_basis(const JobSpec& job, const Params& ps) {
  DiffModule m = parse_module_file(job.input_path);
  ConstantBasisResult r = constant_basis(m, ps.integer("iterations", 4));
  json res = json::array();
  for (const auto& v : r.residuals)
    res.push_back(v.str());
  json out{{"gap", q_str(r.gap)},     {"cap", r.cap.str()},
           {"iterations", r.iterations}, {"residuals", res},
           {"gauge", matrix_to_json(r.gauge)}, {"matrix", matrix_to_json(r.matrix)}};
  return {dump(out), {}};
}

} // namespace

const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, info] : commands())
      v.push_back(k);
    return v;
  }();
  return names;
}

const std::vector<std::string>& job_params(const std::string& command) {
  auto it = commands().find(command);
  if (it == commands().end())
    fail(Errc::parameter, "unknown command '" + command + "'");
  return it->second.params;
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    auto it = commands().find(job.command);
    if (it == commands().end())
      fail(Errc::parameter, "unknown command '" + job.command + "'");
    const CommandInfo& info = it->second;
    std::string fmt = job.output.empty() ? info.formats.front() : job.output;
    if (std::find(info.formats.begin(), info.formats.end(), fmt) == info.formats.end())
      fail(Errc::parameter, "output format '" + fmt + "' is not available for " + job.command);
    Params ps(job, info);

    Outcome o;
    const std::string& c = job.command;
    if (c == "radii")
      o = run_radii(job, ps);
    else if (c == "profile")
      o = run_profile(job, ps, fmt);
    else if (c == "graph")
      o = run_graph(job, ps, fmt);
    else if (c == "newton")
      o = run_newton(job, ps);
    else if (c == "exponents")
      o = run_exponents(job);
    else if (c == "descend")
      o = run_descend(job, ps);
    else if (c == "oracle")
      o = run_oracle(job, ps);
    else if (c == "fuchs")
      o = run_fuchs(job, ps);
    else
      o = run_constant_basis(job, ps);

    if (job.out_path.empty()) {
      out << o.text;
    } else {
      std::ofstream f(job.out_path, std::ios::binary);
      if (!f)
        fail(Errc::io, "cannot write " + job.out_path);
      f << o.text;
    }
    for (const auto& fl : o.flags)
      err << "flag: " << fl << "\n";
    return o.flags.empty() ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

} // namespace convlab
