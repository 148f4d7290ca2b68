#pragma once

#include <mutex>

namespace gpelab::detail {

// FFTW planning is not thread safe; execution of independent plans is.
// Every translation unit that creates or destroys plans must hold this.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace gpelab::detail
