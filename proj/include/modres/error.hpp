#pragma once

#include <stdexcept>
#include <string>

namespace modres {

enum class ErrorKind {
    parameter,
    capacity,
    configuration,
    resonance,
    strong_coupling,
    degenerate_detuning,
    integrator,
    leakage,
    no_oscillation,
    io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // same kind, message prefixed with extra context
    Error with_context(const std::string& context) const {
        return Error(kind_, context + ": " + what());
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace modres
