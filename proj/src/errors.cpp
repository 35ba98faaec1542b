#include "statdisc/errors.hpp"

namespace statdisc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::VanishingSymbol: return "VanishingSymbol";
        case ErrorKind::NotDivisible: return "NotDivisible";
        case ErrorKind::ZeroInput: return "ZeroInput";
        case ErrorKind::DegenerateLift: return "DegenerateLift";
        case ErrorKind::YStructure: return "YStructure";
        case ErrorKind::NotAttached: return "NotAttached";
        case ErrorKind::NotConormal: return "NotConormal";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::SingularSymbol: return "SingularSymbol";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SurjectivityFailed: return "SurjectivityFailed";
        case ErrorKind::StepCollapse: return "StepCollapse";
        case ErrorKind::RankUnstable: return "RankUnstable";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::DegenerateLift:
        case ErrorKind::ZeroInput:
            return 2;
        case ErrorKind::SingularSymbol:
        case ErrorKind::VanishingSymbol:
            return 3;
        case ErrorKind::NoConvergence:
        case ErrorKind::StepCollapse:
        case ErrorKind::SurjectivityFailed:
        case ErrorKind::NonConvergent:
        case ErrorKind::RankUnstable:
            return 4;
        case ErrorKind::YStructure:
        case ErrorKind::NotAttached:
        case ErrorKind::NotConormal:
        case ErrorKind::Degenerate:
            return 1;
        default:
            return 5;
    }
}

}  // namespace statdisc
