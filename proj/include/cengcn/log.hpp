#pragma once

#include <functional>
#include <string_view>

namespace cengcn::log {

using Sink = std::function<void(std::string_view)>;

/// Replaces the warning sink (default: stderr). Returns the previous sink.
Sink set_warning_sink(Sink sink);

void warn(std::string_view message);

}  // namespace cengcn::log
