#ifndef CONVLAB_ERRORS_HPP
#define CONVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace convlab {

enum class Errc {
  interval_order,
  degenerate_input,
  slope_collision,
  normalization,
  precision_exhausted,
  mode_mismatch,
  incompatible,
  singular_gauge,
  cyclic_search_failure,
  parameter,
  index_range,
  ambiguous_inversion,
  inversion_infeasible,
  domain,
  containment,
  unsupported_point,
  not_in_zp,
  size_mismatch,
  unsupported_spectrum,
  preparedness_violation,
  budget_exhausted,
  hypothesis,
  irregularity,
  schema,
  io,
  non_prime,
  pole_conflict,
  division_by_zero,
  parse,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace convlab

#endif
