#pragma once

#include <stdexcept>
#include <string>

namespace pruw {

enum class Errc {
    DivisionByZero,
    SingularSystem,
    FieldTooSmall,
    InvalidConstraints,
    InfeasibleCode,
    InvalidMixture,
    InfeasiblePartition,
    IncompatibleLength,
    ProtocolViolation,
    BudgetExceeded,
    ConfigError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DivisionByZero:      return "DivisionByZero";
        case Errc::SingularSystem:      return "SingularSystem";
        case Errc::FieldTooSmall:       return "FieldTooSmall";
        case Errc::InvalidConstraints:  return "InvalidConstraints";
        case Errc::InfeasibleCode:      return "InfeasibleCode";
        case Errc::InvalidMixture:      return "InvalidMixture";
        case Errc::InfeasiblePartition: return "InfeasiblePartition";
        case Errc::IncompatibleLength:  return "IncompatibleLength";
        case Errc::ProtocolViolation:   return "ProtocolViolation";
        case Errc::BudgetExceeded:      return "BudgetExceeded";
        case Errc::ConfigError:         return "ConfigError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace pruw
