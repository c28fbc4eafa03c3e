#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace idlab {

/// Violated precondition on user-supplied input (bad parameters, unresolvable
/// grids, test functions outside their admissible class).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int step, std::vector<double> history)
        : std::runtime_error(what), step_(step), history_(std::move(history)) {}

    [[nodiscard]] int step() const noexcept { return step_; }
    [[nodiscard]] const std::vector<double>& history() const noexcept { return history_; }

private:
    int step_;
    std::vector<double> history_;
};

/// Schema or content error in a JSON configuration. `path` names the offending
/// field, e.g. "domain.eps0".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

#define IDLAB_REQUIRE(cond, msg)                                 \
    do {                                                         \
        if (!(cond)) throw ::idlab::PreconditionError(msg);      \
    } while (0)

} // namespace idlab
