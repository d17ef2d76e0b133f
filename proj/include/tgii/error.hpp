#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace tgii {

enum class Errc {
    InvalidArgument,
    ModuliNotCoprime,
    NotPrime,
    NotInvertible,
    RankDeficient,
    SigmaTooSmall,
    InvalidForm,
    DiscriminantMismatch,
    TooLarge,
    PrimeInert,
    PrimeRamified,
    NotInSpan,
    ForbiddenJ,
    NotIsogenous,
    Degenerate,
    ParseError,
    ConflictError,
    MissingTable,
    NotSplit,
    InconsistentKernel,
    Unsupported,
    NotOnSurface,
    OutOfPrimes,
    ConfigRejected,
    Failure,
    NotLinear,
    ScriptError,
    NotApplicable,
    AttackFailed,
    NoCollision,
    NotConsecutive,
    Reject,
    KeyMismatch,
    EmptyRecipientSet,
    FactorFound,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Thrown where a non-invertible element of Z/NZ exposes a proper divisor of N.
class FactorFoundError : public Error {
public:
    explicit FactorFoundError(mpz_class divisor);
    const mpz_class& divisor() const noexcept { return divisor_; }

private:
    mpz_class divisor_;
};

// Value form of the same event, for operations whose contract returns it.
struct FactorFound {
    mpz_class divisor;
};

}  // namespace tgii
