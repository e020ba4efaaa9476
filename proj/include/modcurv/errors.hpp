#pragma once

#include <stdexcept>
#include <string>

namespace modcurv {

// Bad arguments supplied by a caller (maps to CLI exit status 2).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Failure inside the derivation pipeline; carries the stage name.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class RuleTableExhausted : public PipelineError {
public:
    explicit RuleTableExhausted(const std::string& what)
        : PipelineError("symbol_engine", "rule table exhausted: " + what) {}
};

class IncompleteSubstitution : public PipelineError {
public:
    explicit IncompleteSubstitution(const std::string& what)
        : PipelineError("cosphere_integrator", "incomplete substitution table: " + what) {}
};

class UnsupportedSignature : public PipelineError {
public:
    explicit UnsupportedSignature(const std::string& what)
        : PipelineError("modular_function_engine", "unsupported signature: " + what) {}
};

class DivergentIntegral : public PipelineError {
public:
    DivergentIntegral(std::string stage, const std::string& what)
        : PipelineError(std::move(stage), "divergent integral: " + what) {}
};

}  // namespace modcurv
