#pragma once

#include <functional>

namespace trapsnet {

/// Run unit(0..count-1), using up to `threads` worker threads when
/// threads > 1. Units must be independent; the first exception thrown by any
/// unit is rethrown after all workers finish.
void run_units(int count, int threads, const std::function<void(int)>& unit);

} // namespace trapsnet
