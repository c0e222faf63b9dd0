#pragma once

#include <stdexcept>
#include <string>

namespace lorenz {

/// Base of every error the library raises. `kind()` is the stable class name
/// used in command-line diagnostics.
class Error : public std::runtime_error {
public:
    Error(const char* kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    const char* kind() const noexcept { return kind_; }

private:
    const char* kind_;
};

/// Zero is not interior to the convex hull of the estimating values, so the
/// empirical-likelihood optimum does not exist.
class ConvexHullViolation : public Error {
public:
    explicit ConvexHullViolation(const std::string& what)
        : Error("ConvexHullViolation", what) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& what) : Error("NonFinite", what) {}
};

class DegenerateVariance : public Error {
public:
    explicit DegenerateVariance(const std::string& what)
        : Error("DegenerateVariance", what) {}
};

class BracketFailure : public Error {
public:
    explicit BracketFailure(const std::string& what)
        : Error("BracketFailure", what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& what)
        : Error("QuadratureFailure", what) {}
};

class FileError : public Error {
public:
    explicit FileError(const std::string& what) : Error("FileError", what) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error("SchemaError", what) {}
};

}  // namespace lorenz
