#include "zfr/solver/worker_pool.hpp"

#include "zfr/common/error.hpp"

namespace zfr::solver {

WorkerPool::WorkerPool(int workers) : nworkers_(workers) {
  if (workers < 1) throw DomainError("worker count must be >= 1");
  errors_.resize(static_cast<std::size_t>(workers));
  for (int w = 1; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

std::pair<std::size_t, std::size_t> WorkerPool::static_range(std::size_t nitems, int workers, int w) {
  const auto W = static_cast<std::size_t>(workers);
  const auto i = static_cast<std::size_t>(w);
  return {nitems * i / W, nitems * (i + 1) / W};
}

void WorkerPool::work(int worker) {
  try {
    if (!dynamic_) {
      const auto [b, e] = static_range(nitems_, nworkers_, worker);
      if (b < e) (*body_)(worker, b, e);
    } else {
      for (;;) {
        std::size_t item;
        {
          std::lock_guard lock(mutex_);
          if (next_item_ >= nitems_) break;
          item = next_item_++;
        }
        (*body_)(worker, item, item + 1);
      }
    }
  } catch (...) {
    errors_[static_cast<std::size_t>(worker)] = std::current_exception();
  }
}

void WorkerPool::loop(int worker) {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    work(worker);
    {
      std::lock_guard lock(mutex_);
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

void WorkerPool::run(std::size_t nitems, const Body& body, bool dynamic) {
  for (auto& e : errors_) e = nullptr;
  body_ = &body;
  nitems_ = nitems;
  dynamic_ = dynamic;
  next_item_ = 0;
  if (nworkers_ > 1) {
    {
      std::lock_guard lock(mutex_);
      pending_ = nworkers_ - 1;
      ++generation_;
    }
    start_cv_.notify_all();
  }
  work(0);
  if (nworkers_ > 1) {
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
  }
  body_ = nullptr;
  for (auto& e : errors_)
    if (e) std::rethrow_exception(e);
}

}  // namespace zfr::solver
