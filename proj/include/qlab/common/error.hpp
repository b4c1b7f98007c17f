#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

// Bad arguments or malformed external input (files, indices, measures on the
// wrong space). Message names the offending field where one exists.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure missed its tolerance or produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Iterate norm crossed the divergence guard, or an update became non-finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

// An operation was invoked before its inputs were ready (e.g. sampling an
// underfilled replay buffer, diagnostics without aligned checkpoints).
class PreconditionError : public std::logic_error {
public:
    explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

// Configuration problems; message carries section and key.
class ConfigError : public InputError {
public:
    explicit ConfigError(const std::string& what) : InputError(what) {}
};

}  // namespace qlab
