#include "lcorr/errors.hpp"

namespace lcorr {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::precision: return "precision";
        case ErrorKind::singularity: return "singularity";
        case ErrorKind::invalid_modulus: return "invalid_modulus";
        case ErrorKind::empty_domain: return "empty_domain";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::insufficient_data: return "insufficient_data";
        case ErrorKind::table: return "table";
        case ErrorKind::parse: return "parse";
    }
    return "unknown";
}

}  // namespace lcorr
