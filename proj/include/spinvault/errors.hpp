#pragma once

#include <stdexcept>
#include <string>

namespace spinvault {

// Base error. `category()` is a stable machine-readable tag; the CLI maps it
// into report.json and the process exit code.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}
    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define SPINVAULT_DEFINE_ERROR(NAME)                                     \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
    }

// ensemble
SPINVAULT_DEFINE_ERROR(EmptyEnsemble);
SPINVAULT_DEFINE_ERROR(NonPositiveCoupling);
SPINVAULT_DEFINE_ERROR(InvalidCount);
// krylov
SPINVAULT_DEFINE_ERROR(TruncationTooSmall);
SPINVAULT_DEFINE_ERROR(NotExplicit);
// protocol
SPINVAULT_DEFINE_ERROR(NonPositiveDuration);
SPINVAULT_DEFINE_ERROR(OutOfRange);
SPINVAULT_DEFINE_ERROR(UnsupportedKind);
// evolve
SPINVAULT_DEFINE_ERROR(StepTooLarge);
SPINVAULT_DEFINE_ERROR(UnsupportedState);
// optimize
SPINVAULT_DEFINE_ERROR(EmptyGrid);
SPINVAULT_DEFINE_ERROR(InsufficientData);
SPINVAULT_DEFINE_ERROR(NonDecayingTrace);
SPINVAULT_DEFINE_ERROR(BothRatesZero);
// qubit
SPINVAULT_DEFINE_ERROR(NotNormalized);
// cli
SPINVAULT_DEFINE_ERROR(ConfigInvalid);
SPINVAULT_DEFINE_ERROR(ParseError);
SPINVAULT_DEFINE_ERROR(UnknownKey);
SPINVAULT_DEFINE_ERROR(MissingRequired);
SPINVAULT_DEFINE_ERROR(OutputUnwritable);
SPINVAULT_DEFINE_ERROR(NumericalFailure);
// generic argument violation
SPINVAULT_DEFINE_ERROR(InvalidArgument);

#undef SPINVAULT_DEFINE_ERROR

}  // namespace spinvault
