#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wilberforce {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An integration produced a non-finite state.
class Divergence : public Error {
public:
    Divergence(std::size_t step, double time)
        : Error("integration diverged at step " + std::to_string(step) + " (t = " + std::to_string(time) + ")"),
          step_(step), time_(time) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// The requested point is not on the energy shell: p2 would be imaginary.
class DiscriminantNegative : public Error {
public:
    explicit DiscriminantNegative(double discriminant)
        : Error("energy-shell discriminant is negative: " + std::to_string(discriminant)),
          discriminant_(discriminant) {}

    double discriminant() const noexcept { return discriminant_; }

private:
    double discriminant_;
};

class EmptySample : public Error {
public:
    using Error::Error;
};

class NotInvariant : public Error {
public:
    using Error::Error;
};

class NoRepresentation : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class DegenerateJacobian : public Error {
public:
    using Error::Error;
};

/// The implicit-function chart z = psi(x, y) does not exist (dF/dz vanishes).
class DegenerateChart : public Error {
public:
    using Error::Error;
};

} // namespace wilberforce
