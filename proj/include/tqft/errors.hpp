#pragma once

#include <stdexcept>
#include <string>

namespace tqft {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mesh / codec
struct DuplicateSlot : Error { using Error::Error; };
struct InvalidIndex : Error { using Error::Error; };
struct SelfPairedFace : Error { using Error::Error; };
struct SyntaxError : Error {
    int line;
    SyntaxError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};
struct SemanticError : Error { using Error::Error; };
struct NonManifoldLink : Error { using Error::Error; };

// angles
struct DimensionMismatch : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct EmptyAffineSpace : Error { using Error::Error; };

// qdilog
struct NonPositiveB : Error { using Error::Error; };
struct PoleProximity : Error { using Error::Error; };

// state
struct NonPositiveAngles : Error { using Error::Error; };
struct NotBalanced : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct DegenerateDeltaSystem : Error { using Error::Error; };
struct NoDecay : Error { using Error::Error; };
struct ToleranceNotMet : Error { using Error::Error; };
struct IllConditionedFit : Error { using Error::Error; };

// pachner
struct InvalidSite : Error { using Error::Error; };
struct InfeasiblePositivity : Error { using Error::Error; };

// wgz
struct TruncationInsufficient : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct BadPsiParams : Error { using Error::Error; };

}  // namespace tqft
