#include "opseq/error.hpp"

namespace opseq {

const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::ring_mismatch: return "RingMismatch";
    case Errc::not_a_submodule: return "NotASubmodule";
    case Errc::project_undefined: return "ProjectUndefined";
    case Errc::lift_failed: return "LiftFailed";
    case Errc::preimage_failed: return "PreimageFailed";
    case Errc::closure_violation: return "ClosureViolation";
    case Errc::well_definedness_violation: return "WellDefinednessViolation";
    case Errc::arity_out_of_range: return "ArityOutOfRange";
    case Errc::unsupported_arity: return "UnsupportedArity";
    case Errc::unsupported: return "Unsupported";
    }
    return "Error";
}

} // namespace opseq
