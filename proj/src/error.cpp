#include "tgii/error.hpp"

namespace tgii {

const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ModuliNotCoprime: return "ModuliNotCoprime";
    case Errc::NotPrime: return "NotPrime";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::SigmaTooSmall: return "SigmaTooSmall";
    case Errc::InvalidForm: return "InvalidForm";
    case Errc::DiscriminantMismatch: return "DiscriminantMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::PrimeInert: return "PrimeInert";
    case Errc::PrimeRamified: return "PrimeRamified";
    case Errc::NotInSpan: return "NotInSpan";
    case Errc::ForbiddenJ: return "ForbiddenJ";
    case Errc::NotIsogenous: return "NotIsogenous";
    case Errc::Degenerate: return "Degenerate";
    case Errc::ParseError: return "ParseError";
    case Errc::ConflictError: return "ConflictError";
    case Errc::MissingTable: return "MissingTable";
    case Errc::NotSplit: return "NotSplit";
    case Errc::InconsistentKernel: return "InconsistentKernel";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NotOnSurface: return "NotOnSurface";
    case Errc::OutOfPrimes: return "OutOfPrimes";
    case Errc::ConfigRejected: return "ConfigRejected";
    case Errc::Failure: return "Failure";
    case Errc::NotLinear: return "NotLinear";
    case Errc::ScriptError: return "ScriptError";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::AttackFailed: return "AttackFailed";
    case Errc::NoCollision: return "NoCollision";
    case Errc::NotConsecutive: return "NotConsecutive";
    case Errc::Reject: return "Reject";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::EmptyRecipientSet: return "EmptyRecipientSet";
    case Errc::FactorFound: return "FactorFound";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
{
}

FactorFoundError::FactorFoundError(mpz_class divisor)
    : Error(Errc::FactorFound, "nontrivial divisor " + divisor.get_str()),
      divisor_(std::move(divisor))
{
}

}  // namespace tgii
