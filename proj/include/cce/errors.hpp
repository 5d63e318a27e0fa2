#pragma once

#include <stdexcept>
#include <string>

namespace cce {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers (and the CLI) can distinguish "bad input" from "numerics gave up".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& msg) : Error(msg) {}
};

class StepError : public Error {
public:
    explicit StepError(const std::string& msg) : Error(msg) {}
};

class QuadratureError : public Error {
public:
    explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

class RootError : public Error {
public:
    explicit RootError(const std::string& msg) : Error(msg) {}
};

class NoHorizonError : public Error {
public:
    explicit NoHorizonError(const std::string& msg) : Error(msg) {}
};

class BelowExtremalError : public Error {
public:
    explicit BelowExtremalError(const std::string& msg) : Error(msg) {}
};

class FitError : public Error {
public:
    explicit FitError(const std::string& msg) : Error(msg) {}
};

class IllConditionedError : public Error {
public:
    explicit IllConditionedError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace cce
