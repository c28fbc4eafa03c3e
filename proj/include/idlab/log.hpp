#pragma once

#include <spdlog/spdlog.h>

namespace idlab {

/// Library-wide logger ("idlab", stderr). Level from IDLAB_LOG_LEVEL
/// (trace|debug|info|warn|err|off), default warn.
spdlog::logger& logger();

} // namespace idlab
