#pragma once

#include <stdexcept>
#include <string>

namespace statdisc {

enum class ErrorKind {
    Validation,
    VanishingSymbol,
    NotDivisible,
    ZeroInput,
    DegenerateLift,
    YStructure,
    NotAttached,
    NotConormal,
    Degenerate,
    SingularSymbol,
    NonConvergent,
    NoConvergence,
    SurjectivityFailed,
    StepCollapse,
    RankUnstable,
    Internal,
};

const char* to_string(ErrorKind kind);

/// Exit code used by the command line tool for each error class.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace statdisc
