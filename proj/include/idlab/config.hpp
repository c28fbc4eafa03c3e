#pragma once

// JSON experiment configs. Every schema violation raises ConfigError carrying
// the dotted path of the offending field.

#include "idlab/coefficients.hpp"
#include "idlab/geometry.hpp"
#include "idlab/reconstruction.hpp"
#include "idlab/solver.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idlab {

/// A JSON value together with its path from the document root.
class ConfigNode {
public:
    ConfigNode(const nlohmann::json& j, std::string path);

    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] const nlohmann::json& json() const noexcept { return j_; }
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] ConfigNode at(const std::string& key) const;  ///< required member
    [[nodiscard]] ConfigNode at(std::size_t i) const;
    [[nodiscard]] std::size_t size() const;  ///< array length

    [[nodiscard]] double number() const;
    [[nodiscard]] int integer() const;
    [[nodiscard]] bool boolean() const;
    [[nodiscard]] std::string string() const;
    [[nodiscard]] std::vector<double> numbers() const;

    [[nodiscard]] double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    [[nodiscard]] int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const;
    [[nodiscard]] bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
    [[nodiscard]] std::string string(const std::string& key,
                                     std::optional<std::string> fallback = std::nullopt) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& key,
                                              std::optional<std::vector<double>> fallback = std::nullopt) const;

    /// ConfigError at this node.
    [[noreturn]] void fail(const std::string& what) const;

private:
    const nlohmann::json& j_;
    std::string path_;
};

/// Parses text; syntax errors become ConfigError at "$".
nlohmann::json parse_json(const std::string& text, const std::string& origin);

struct DomainConfig {
    Domain domain;
    int n_cells = 32;
};

/// Keys: dim, xbar, eps0, T (required), n_cells, bc_labels (optional).
DomainConfig parse_domain(const ConfigNode& node);

/// Either a preset name or an object
///   {"preset": "constant" | "affine" | "bioheat" | "chemotaxis" | "table", ...,
///    "lower_order": {"b": [bx, by], "c0", "c1", "d_scale"}}.
CoefficientSet parse_coefficients(const ConfigNode& node);

/// Keys: tol, max_iter, abs_floor, linear_tol (all optional).
NonlinearControls parse_controls(const ConfigNode& node);

/// Keys: lo, hi, values, t_knots (optional), a_lo (optional).
ParamA parse_param(const ConfigNode& node);
nlohmann::json to_json(const ParamA& a);

/// Initial value: a number, or absent for the datum's g1. A "bump" object
/// {"base", "amplitude"} gives base + amplitude sin(pi x) sin(pi y).
std::function<double(Point)> parse_initial_value(const ConfigNode& parent, const std::string& key);

nlohmann::json to_json(const MeasurementSet& ms);
MeasurementSet parse_measurements(const ConfigNode& node);

} // namespace idlab
