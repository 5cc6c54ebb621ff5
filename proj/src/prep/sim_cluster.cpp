#include <algorithm>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "zfr/common/error.hpp"
#include "zfr/prep/cluster.hpp"

namespace zfr::prep {

namespace {

struct Message {
  int tag;
  Bytes payload;
  std::uint64_t id;
};

struct Network {
  explicit Network(int n) : inbox(n, std::vector<std::deque<Message>>(n)) {}

  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::vector<std::deque<Message>>> inbox;  // [dest][source]
  std::vector<bool> delivered;                          // per send id
  std::vector<int> barrier_entered;                     // per barrier epoch
  std::uint64_t activity = 0;
  bool aborted = false;

  void bump() {
    ++activity;
    cv.notify_all();
  }
};

class SimTransport final : public MessageTransport {
 public:
  SimTransport(Network& net, int rank, int size, const SimCluster::Options& opt)
      : net_(net),
        rank_(rank),
        size_(size),
        rng_(opt.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(rank) + 1),
        deliver_(opt.deliver_probability),
        timeout_(opt.deadlock_timeout) {}

  int rank() const override { return rank_; }
  int size() const override { return size_; }

  Request issend(int dest, int tag, Bytes payload) override {
    if (dest < 0 || dest >= size_) throw ExchangeError("send to invalid rank " + std::to_string(dest));
    std::lock_guard lock(net_.mu);
    check_abort();
    const auto id = static_cast<std::uint64_t>(net_.delivered.size());
    net_.delivered.push_back(false);
    net_.inbox[dest][rank_].push_back({tag, std::move(payload), id});
    net_.bump();
    return id;
  }

  bool test_send(Request request) override {
    std::lock_guard lock(net_.mu);
    check_abort();
    return net_.delivered.at(request);
  }

  std::optional<Envelope> iprobe(int tag) override {
    std::lock_guard lock(net_.mu);
    check_abort();
    std::vector<std::pair<int, const Message*>> ready;
    for (int s = 0; s < size_; ++s) {
      for (const auto& m : net_.inbox[rank_][s]) {
        if (m.tag == tag) {
          ready.emplace_back(s, &m);
          break;
        }
      }
    }
    if (ready.empty()) return std::nullopt;
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= deliver_) {
      withheld_ = true;
      return std::nullopt;
    }
    const auto pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng_);
    return Envelope{ready[pick].first, tag, ready[pick].second->payload.size()};
  }

  Bytes recv(int source, int tag) override {
    std::lock_guard lock(net_.mu);
    check_abort();
    auto& q = net_.inbox[rank_].at(source);
    auto it = std::find_if(q.begin(), q.end(), [&](const Message& m) { return m.tag == tag; });
    if (it == q.end()) throw ExchangeError("recv without a matching message");
    Bytes out = std::move(it->payload);
    net_.delivered[it->id] = true;
    q.erase(it);
    net_.bump();
    return out;
  }

  Request ibarrier() override {
    std::lock_guard lock(net_.mu);
    check_abort();
    const auto epoch = static_cast<std::size_t>(barrier_epoch_++);
    if (net_.barrier_entered.size() <= epoch) net_.barrier_entered.resize(epoch + 1, 0);
    ++net_.barrier_entered[epoch];
    net_.bump();
    return epoch;
  }

  bool test_barrier(Request request) override {
    std::lock_guard lock(net_.mu);
    check_abort();
    return net_.barrier_entered.at(request) == size_;
  }

  void wait_for_activity() override {
    if (withheld_) {
      withheld_ = false;
      std::this_thread::yield();
      return;
    }
    std::unique_lock lock(net_.mu);
    check_abort();
    const auto seen = net_.activity;
    if (seen != last_activity_) {
      last_activity_ = seen;
      last_change_ = std::chrono::steady_clock::now();
    }
    net_.cv.wait_for(lock, std::chrono::milliseconds(2), [&] { return net_.activity != seen || net_.aborted; });
    check_abort();
    if (net_.activity == seen && std::chrono::steady_clock::now() - last_change_ > timeout_) {
      net_.aborted = true;
      net_.cv.notify_all();
      throw ExchangeError("rank " + std::to_string(rank_) + ": no progress within deadlock timeout");
    }
  }

 private:
  void check_abort() const {
    if (net_.aborted) throw ExchangeError("exchange aborted by another rank");
  }

  Network& net_;
  int rank_;
  int size_;
  std::mt19937_64 rng_;
  double deliver_;
  std::chrono::milliseconds timeout_;
  int barrier_epoch_ = 0;
  bool withheld_ = false;
  std::uint64_t last_activity_ = ~0ull;
  std::chrono::steady_clock::time_point last_change_ = std::chrono::steady_clock::now();
};

}  // namespace

SimCluster::SimCluster(int nranks, Options options) : nranks_(nranks), options_(options) {
  if (nranks < 1) throw DomainError("cluster needs at least one rank");
  if (!(options.deliver_probability > 0.0)) throw DomainError("deliver probability must be positive");
}

void SimCluster::run(const std::function<void(RankContext&)>& body) {
  Network net(nranks_);
  std::mutex err_mu;
  std::exception_ptr first;

  auto worker = [&](int r) {
    try {
      SimTransport transport(net, r, nranks_, options_);
      RankContext ctx(transport);
      body(ctx);
    } catch (...) {
      {
        std::lock_guard lock(err_mu);
        if (!first) first = std::current_exception();
      }
      std::lock_guard lock(net.mu);
      net.aborted = true;
      net.cv.notify_all();
    }
  };

  if (nranks_ == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(nranks_));
    for (int r = 0; r < nranks_; ++r) threads.emplace_back(worker, r);
    for (auto& t : threads) t.join();
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace zfr::prep
