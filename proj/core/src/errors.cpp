#include "funk/errors.hpp"

namespace funk {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnboundVar: return "unbound-var";
    case ErrorKind::EffectViolation: return "effect-violation";
    case ErrorKind::NotInEffect: return "not-in-effect";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::UpwardFunarg: return "upward-funarg";
    case ErrorKind::TailCallOverlap: return "tail-call-overlap";
    case ErrorKind::MalformedType: return "malformed-type";
    case ErrorKind::MalformedEffect: return "malformed-effect";
  }
  return "error";
}

}  // namespace funk
