#pragma once

#include <stdexcept>
#include <string>

namespace shockflow {

/// Base for all shockflow errors; what() carries the module error name
/// the CLI maps to exit code 3.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("DomainError", m) {}
};
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& m) : Error("NonConvergence", m) {}
};
struct DomainBoundary : Error {
    explicit DomainBoundary(const std::string& m) : Error("DomainBoundary", m) {}
};
struct FieldError : Error {
    explicit FieldError(const std::string& m) : Error("FieldError", m) {}
};
struct WindowTooSmall : Error {
    explicit WindowTooSmall(const std::string& m) : Error("WindowTooSmall", m) {}
};
struct PreshockError : Error {
    explicit PreshockError(const std::string& m) : Error("PreshockError", m) {}
};
struct StabilityError : Error {
    explicit StabilityError(const std::string& m) : Error("StabilityError", m) {}
};
struct BlowUp : Error {
    explicit BlowUp(const std::string& m) : Error("BlowUp", m) {}
};
struct QuadratureError : Error {
    explicit QuadratureError(const std::string& m) : Error("QuadratureError", m) {}
};
struct LeftDomain : Error {
    explicit LeftDomain(const std::string& m) : Error("LeftDomain", m) {}
};
struct SupportUnstable : Error {
    explicit SupportUnstable(const std::string& m) : Error("SupportUnstable", m) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("ValidationError", m) {}
};
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error("SchemaError", m) {}
};

}  // namespace shockflow
