#include "eukit/report.hpp"

#include <stdexcept>

namespace eukit {

const char* to_string(Property p) {
  switch (p) {
    case Property::smoothness:
      return "smoothness";
    case Property::monotonicity:
      return "monotonicity";
    case Property::negative_definiteness:
      return "negative_definiteness";
    case Property::boundary_divergence:
      return "boundary_divergence";
    case Property::diff_strict_quasiconcavity:
      return "diff_strict_quasiconcavity";
    case Property::quasiconcavity_transfer:
      return "quasiconcavity_transfer";
  }
  return "?";
}

const char* to_string(Target t) { return t == Target::vnm ? "vnm" : "expected"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

PropertyReport finalize_report(PropertyReport r) {
  if (r.verdict == Verdict::fail && r.witnesses.empty())
    throw std::logic_error("PropertyReport: fail verdict requires a witness");
  if (r.verdict == Verdict::pass && !r.witnesses.empty())
    throw std::logic_error("PropertyReport: pass verdict must carry no witnesses");
  return r;
}

}  // namespace eukit
