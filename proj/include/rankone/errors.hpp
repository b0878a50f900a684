#pragma once

#include <stdexcept>
#include <string>

namespace rankone {

// Every library error carries a stable kind name so the CLI and the
// python bindings can report it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define RANKONE_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

RANKONE_DEFINE_ERROR(SingularMatrix)
RANKONE_DEFINE_ERROR(DimensionMismatch)
RANKONE_DEFINE_ERROR(UnsupportedFamily)
RANKONE_DEFINE_ERROR(DegeneratePairing)
RANKONE_DEFINE_ERROR(NonReducibleWord)
RANKONE_DEFINE_ERROR(RelationFailed)
RANKONE_DEFINE_ERROR(UnknownGenerator)
RANKONE_DEFINE_ERROR(FrameMismatch)
RANKONE_DEFINE_ERROR(NotOrthogonal)
RANKONE_DEFINE_ERROR(NotPositiveDefinite)
RANKONE_DEFINE_ERROR(BadDomain)
RANKONE_DEFINE_ERROR(MissingDiffOp)
RANKONE_DEFINE_ERROR(CutOutsideDomain)
RANKONE_DEFINE_ERROR(GridMismatch)
RANKONE_DEFINE_ERROR(ConstraintViolated)
RANKONE_DEFINE_ERROR(SolverFailure)
RANKONE_DEFINE_ERROR(BadParameters)
RANKONE_DEFINE_ERROR(DivergentRegion)
RANKONE_DEFINE_ERROR(IllConditionedFit)
RANKONE_DEFINE_ERROR(SupportTooLow)
RANKONE_DEFINE_ERROR(BadCutoff)
RANKONE_DEFINE_ERROR(ResonantParameter)
RANKONE_DEFINE_ERROR(ZeroVector)
RANKONE_DEFINE_ERROR(ZeroInput)
RANKONE_DEFINE_ERROR(BoxTooSmall)
RANKONE_DEFINE_ERROR(SingularSample)
RANKONE_DEFINE_ERROR(ConfigError)

#undef RANKONE_DEFINE_ERROR

}  // namespace rankone
