#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace gaborlab {

/// GABORLAB_WORKERS env var, else hardware concurrency, else 1.
int default_workers();
/// 0 means default_workers().
int resolve_workers(int requested);

/// Runs fn(worker_id, begin, end) on `workers` threads over contiguous,
/// deterministic chunks of [0, total). fn must thread-own its outputs.
void run_chunked(std::uint64_t total, int workers,
                 const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

}  // namespace gaborlab
