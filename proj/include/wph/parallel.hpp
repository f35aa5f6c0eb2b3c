#pragma once

#include <cstddef>
#include <functional>

namespace wph {

/// Worker cap: WPH_THREADS if set and positive, else hardware concurrency.
unsigned thread_cap();

/// Run body(i) for i in [0, count). Each index is independent and writes its
/// own result slot, so output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wph
