#pragma once

#include <stdexcept>
#include <string>

namespace mapoi {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (sizes, bounds, file contents).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A call violated an operation precondition on its inputs.
class InputError : public Error {
public:
    using Error::Error;
};

/// A point fell outside the region a surrogate map was built for.
class DomainError : public Error {
public:
    DomainError(std::size_t component, const std::string& what)
        : Error(what), component_(component) {}

    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

/// Map construction failed at a particular sample node.
class BuildError : public Error {
public:
    BuildError(std::size_t variable, std::size_t node, const std::string& what)
        : Error(what), variable_(variable), node_(node) {}

    std::size_t variable() const noexcept { return variable_; }
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t variable_;
    std::size_t node_;
};

// Minimal warning sink. Defaults to stderr; tests can silence it.
void log_warning(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace mapoi
