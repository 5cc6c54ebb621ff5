#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace zfr::solver {

/// Fixed set of worker threads driven by one controlling thread. A pass hands
/// each worker a contiguous range of items (static) or lets workers claim
/// items one at a time (dynamic). Every item is processed by exactly one worker.
class WorkerPool {
 public:
  using Body = std::function<void(int worker, std::size_t begin, std::size_t end)>;

  explicit WorkerPool(int workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int size() const { return nworkers_; }

  /// Runs `body` over [0, nitems) and waits. Rethrows the exception of the
  /// lowest-numbered failing worker.
  void run(std::size_t nitems, const Body& body, bool dynamic = false);

  /// Contiguous share of worker `w` under static scheduling.
  static std::pair<std::size_t, std::size_t> static_range(std::size_t nitems, int workers, int w);

 private:
  void loop(int worker);
  void work(int worker);

  int nworkers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_, done_cv_;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;

  const Body* body_ = nullptr;
  std::size_t nitems_ = 0;
  bool dynamic_ = false;
  std::size_t next_item_ = 0;
  std::vector<std::exception_ptr> errors_;
};

}  // namespace zfr::solver
