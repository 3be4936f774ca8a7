#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degenlag {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error("syntax error at position " + std::to_string(position) + ": " + message), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t position, std::string name)
        : Error("unknown identifier '" + name + "' at position " + std::to_string(position)),
          position_(position),
          name_(std::move(name)) {}
    std::size_t position() const { return position_; }
    const std::string& name() const { return name_; }

private:
    std::size_t position_;
    std::string name_;
};

/// Evaluation left the domain of an operation (log of non-positive, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class MissingCoordinate : public Error {
public:
    explicit MissingCoordinate(const std::string& name) : Error("missing coordinate '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Symbolic elimination met a pivot candidate that vanishes on part of the probe set only.
class NonConstantRank : public Error {
public:
    NonConstantRank(const std::string& expression)
        : Error("non-constant rank: pivot candidate '" + expression + "' vanishes at some probes only"),
          expression_(expression) {}
    const std::string& expression() const { return expression_; }

private:
    std::string expression_;
};

class IndeterminateZeroTest : public Error {
public:
    explicit IndeterminateZeroTest(const std::string& expression)
        : Error("zero test indeterminate for '" + expression + "'"), expression_(expression) {}
    const std::string& expression() const { return expression_; }

private:
    std::string expression_;
};

class SingularHessian : public Error {
public:
    using Error::Error;
};

/// The constraint algorithm ran out of iterations or an input violated a
/// precondition that the caller is expected to establish.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

}  // namespace degenlag
