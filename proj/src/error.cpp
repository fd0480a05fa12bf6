#include "modres/error.hpp"

namespace modres {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parameter: return "parameter error";
        case ErrorKind::capacity: return "capacity error";
        case ErrorKind::configuration: return "configuration error";
        case ErrorKind::resonance: return "resonance error";
        case ErrorKind::strong_coupling: return "strong-coupling error";
        case ErrorKind::degenerate_detuning: return "degenerate-detuning error";
        case ErrorKind::integrator: return "integrator failure";
        case ErrorKind::leakage: return "leakage error";
        case ErrorKind::no_oscillation: return "no-oscillation error";
        case ErrorKind::io: return "i/o error";
    }
    return "error";
}

}  // namespace modres
