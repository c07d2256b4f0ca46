#pragma once

namespace anisoflow {

/// Maximum number of threads internal parallelism may use. Controlled by the
/// ANISOFLOW_THREADS environment variable; 0 or unset means auto (hardware
/// concurrency).
int thread_cap();

}  // namespace anisoflow
