#ifndef CONVLAB_IO_HPP
#define CONVLAB_IO_HPP

#include "convlab/berkdisc.hpp"
#include "convlab/expo.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace convlab {

using json = nlohmann::json;

// Schema errors name the offending location as a JSON pointer.
json field_to_json(const FieldMode& f);
FieldMode field_from_json(const json& j, const std::string& at = "");

json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, const FieldMode& f, const std::string& at = "");

// {"<exponent>": coefficient, ...}; a bare coefficient means exponent 0.
json laurent_to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const json& j, const FieldMode& f, const std::string& at = "");

json matrix_to_json(const PolyMatrix& m);
PolyMatrix matrix_from_json(const json& j, const FieldMode& f, const std::string& at = "");

json module_to_json(const DiffModule& m);
// Also accepts "test_module": {"lambda", "h", "e", "m"} in place of "matrix".
DiffModule module_from_json(const json& j);
DiffModule parse_module_file(const std::string& path);
std::string emit_module(const DiffModule& m);

json read_json_file(const std::string& path);

json radii_to_json(const RadiiMultiset& r);
json oracle_to_json(const std::vector<OracleStep>& steps);
json newton_to_json(const NewtonPolygon& np);

json pa_to_json(const PAFunction& f);
json profile_to_json(const Profile& p);
// Header r,f_1,...,f_n; one row per breakpoint of any f_i.
std::string profile_csv(const Profile& p);
// One polyline per run of equally certified pieces; uncertified runs dashed.
std::string profile_svg(const Profile& p);

json point_to_json(const DiscPoint& x);
DiscPoint point_from_json(const json& j, const FieldMode& f, const std::string& at = "");
json skeleton_to_json(const Skeleton& s);
std::string skeleton_dot(const Skeleton& s);
json subdivision_to_json(const ControllingSubdivision& c);
std::string subdivision_dot(const ControllingSubdivision& c);

struct ExponentJob {
  long p = 2;
  ExponentMultiset entries;
  Q c = 1;
  long m_max = 12;
  bool has_compare = false;
  ExponentMultiset compare;
};
ExponentJob exponent_job_from_json(const json& j);
json exponent_job_to_json(const ExponentJob& job);
json exponent_report(const ExponentJob& job);

} // namespace convlab

#endif
