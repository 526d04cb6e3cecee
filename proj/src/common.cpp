#include "pv/common.hpp"

namespace pv {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::pole: return "pole";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::sector_ambiguity: return "sector_ambiguity";
    case ErrorKind::singular_state: return "singular_state";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::rank_deficient: return "rank_deficient";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::inadmissible: return "inadmissible";
    case ErrorKind::branch_ambiguity: return "branch_ambiguity";
    case ErrorKind::matching_singularity: return "matching_singularity";
  }
  return "unknown";
}

}  // namespace pv
