#include "isgqd/error.hpp"

namespace isgqd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadTable: return "BadTable";
    case ErrorCode::kNotAssociative: return "NotAssociative";
    case ErrorCode::kNoUniqueInverse: return "NoUniqueInverse";
    case ErrorCode::kIdempotentsDontCommute: return "IdempotentsDontCommute";
    case ErrorCode::kBadZero: return "BadZero";
    case ErrorCode::kNotSameDClass: return "NotSameDClass";
    case ErrorCode::kNotIdempotent: return "NotIdempotent";
    case ErrorCode::kFunctorialityViolated: return "FunctorialityViolated";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNotDescendingChain: return "NotDescendingChain";
    case ErrorCode::kDegenerateLevel: return "DegenerateLevel";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kInconsistentEquivalence: return "InconsistentEquivalence";
    case ErrorCode::kInfiniteGroupWithFull: return "InfiniteGroupWithFull";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kBadIdempotent: return "BadIdempotent";
    case ErrorCode::kUnsupportedWitness: return "UnsupportedWitness";
    case ErrorCode::kNotBrandt: return "NotBrandt";
    case ErrorCode::kInjectivityUnverified: return "InjectivityUnverified";
    case ErrorCode::kInconsistentOnDependencies: return "InconsistentOnDependencies";
    case ErrorCode::kNotUnital: return "NotUnital";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kSelfCheckFailed: return "SelfCheckFailed";
  }
  return "Unknown";
}

}  // namespace isgqd
