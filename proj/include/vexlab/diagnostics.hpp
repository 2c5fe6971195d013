#pragma once

#include <functional>
#include <string_view>

namespace vexlab {

/// Non-fatal conditions (skipped testers, empty families). Default sink is stderr.
void warn(std::string_view message);

/// Replaces the warning sink; returns the previous one. Pass {} to restore stderr.
std::function<void(std::string_view)> set_warning_sink(std::function<void(std::string_view)> sink);

}  // namespace vexlab
