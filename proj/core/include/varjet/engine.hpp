#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace varjet {

/// Base class for every error the engine reports.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression text or model input; carries a byte offset when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A total-derivative chain would exceed the bundle's admitted jet order.
class OrderBoundError : public Error {
public:
    using Error::Error;
};

/// Numeric evaluation failed (missing atom, inconsistent square-root value).
class EvalError : public Error {
public:
    using Error::Error;
};

/// A divergence-form extraction did not reach zero residual.
class ExtractionError : public Error {
public:
    ExtractionError(const std::string& msg, std::string residual)
        : Error(msg), residual_(std::move(residual)) {}
    const std::string& residual() const { return residual_; }

private:
    std::string residual_;
};

/// An internal identity the engine relies on failed to hold.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Bad model file, unknown builtin, mismatched components.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Cooperative cancellation (interrupt signal or deadline).
class CancelledError : public Error {
public:
    using Error::Error;
};

namespace engine {

/// Installs an external stop flag (e.g. set from a signal handler).
/// Pass nullptr to detach. Not owned.
void set_cancel_flag(const std::atomic<bool>* flag);

/// Installs or clears a wall-clock deadline for the current process.
void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline);

/// Throws CancelledError when the flag is set or the deadline has passed.
/// Called between integration-by-parts rounds and other long loops.
void checkpoint();

} // namespace engine
} // namespace varjet
