#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <deque>
#include <map>
#include <set>

#include "zfr/common/error.hpp"
#include "zfr/prep/cluster.hpp"

namespace zfr::prep {

namespace {

enum class FrameType : std::uint8_t { Data = 1, Ack = 2, Barrier = 3 };

constexpr std::size_t kHeaderSize = 1 + 4 + 8 + 8;

struct Inbound {
  int source;
  int tag;
  std::uint64_t id;
  Bytes payload;
};

class SocketTransport final : public MessageTransport {
 public:
  SocketTransport(int rank, std::vector<int> fds, std::chrono::milliseconds timeout)
      : rank_(rank), fds_(std::move(fds)), out_(fds_.size()), in_(fds_.size()), timeout_(timeout) {}

  int rank() const override { return rank_; }
  int size() const override { return static_cast<int>(fds_.size()); }

  Request issend(int dest, int tag, Bytes payload) override {
    if (dest < 0 || dest >= size()) throw ExchangeError("send to invalid rank " + std::to_string(dest));
    const auto id = next_id_++;
    pending_.insert(id);
    if (dest == rank_) {
      inbox_.push_back({rank_, tag, id, std::move(payload)});
    } else {
      queue_frame(dest, FrameType::Data, tag, id, payload);
    }
    progress(0);
    return id;
  }

  bool test_send(Request request) override {
    progress(0);
    return !pending_.contains(request);
  }

  std::optional<Envelope> iprobe(int tag) override {
    progress(0);
    for (const auto& m : inbox_) {
      if (m.tag == tag) return Envelope{m.source, tag, m.payload.size()};
    }
    return std::nullopt;
  }

  Bytes recv(int source, int tag) override {
    for (auto it = inbox_.begin(); it != inbox_.end(); ++it) {
      if (it->source == source && it->tag == tag) {
        Bytes out = std::move(it->payload);
        if (source == rank_) {
          pending_.erase(it->id);
        } else {
          queue_frame(source, FrameType::Ack, tag, it->id, {});
        }
        inbox_.erase(it);
        progress(0);
        return out;
      }
    }
    throw ExchangeError("recv without a matching message");
  }

  Request ibarrier() override {
    const auto epoch = barrier_epoch_++;
    for (int p = 0; p < size(); ++p) {
      if (p != rank_) queue_frame(p, FrameType::Barrier, static_cast<int>(epoch), 0, {});
    }
    progress(0);
    return epoch;
  }

  bool test_barrier(Request request) override {
    progress(0);
    return barrier_tokens_[request] == size() - 1;
  }

  void wait_for_activity() override {
    if (progress(2)) {
      last_change_ = std::chrono::steady_clock::now();
    } else if (std::chrono::steady_clock::now() - last_change_ > timeout_) {
      throw ExchangeError("rank " + std::to_string(rank_) + ": no progress within deadlock timeout");
    }
  }

  /// Blocks until every queued frame has been handed to the kernel.
  void flush() {
    for (;;) {
      bool empty = true;
      for (const auto& o : out_) empty = empty && o.empty();
      if (empty) return;
      progress(10);
    }
  }

 private:
  void queue_frame(int peer, FrameType type, int tag, std::uint64_t id, const Bytes& payload) {
    ByteWriter w;
    w.put(static_cast<std::uint8_t>(type));
    w.put(static_cast<std::int32_t>(tag));
    w.put(id);
    w.put(static_cast<std::uint64_t>(payload.size()));
    w.put_raw(payload.data(), payload.size());
    auto& q = out_[static_cast<std::size_t>(peer)];
    q.insert(q.end(), w.bytes().begin(), w.bytes().end());
  }

  /// Moves bytes in both directions; returns true if anything moved.
  bool progress(int timeout_ms) {
    std::vector<pollfd> pfds;
    std::vector<int> peers;
    for (int p = 0; p < size(); ++p) {
      if (p == rank_ || fds_[p] < 0) continue;
      short ev = POLLIN;
      if (!out_[p].empty()) ev |= POLLOUT;
      pfds.push_back({fds_[p], ev, 0});
      peers.push_back(p);
    }
    if (pfds.empty()) return false;
    const int rc = ::poll(pfds.data(), pfds.size(), timeout_ms);
    if (rc < 0) {
      if (errno == EINTR) return false;
      throw ExchangeError(std::string("poll failed: ") + std::strerror(errno));
    }
    bool moved = false;
    for (std::size_t i = 0; i < pfds.size(); ++i) {
      const int p = peers[i];
      if (pfds[i].revents & POLLOUT) {
        auto& q = out_[p];
        const auto n = ::send(fds_[p], q.data(), q.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
        if (n > 0) {
          q.erase(q.begin(), q.begin() + n);
          moved = true;
        } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
          throw ExchangeError("send to rank " + std::to_string(p) + " failed: " + std::strerror(errno));
        }
      }
      if (pfds[i].revents & (POLLIN | POLLHUP)) {
        std::uint8_t buf[65536];
        const auto n = ::recv(fds_[p], buf, sizeof(buf), MSG_DONTWAIT);
        if (n > 0) {
          in_[p].insert(in_[p].end(), buf, buf + n);
          moved = true;
          parse(p);
        } else if (n == 0) {
          fds_[p] = -1;  // peer finished; everything it sent has been read
        }
      }
    }
    return moved;
  }

  void parse(int peer) {
    auto& buf = in_[peer];
    std::size_t off = 0;
    while (buf.size() - off >= kHeaderSize) {
      ByteReader r(std::span<const std::uint8_t>(buf.data() + off, kHeaderSize));
      const auto type = static_cast<FrameType>(r.get<std::uint8_t>());
      const auto tag = r.get<std::int32_t>();
      const auto id = r.get<std::uint64_t>();
      const auto size = r.get<std::uint64_t>();
      if (buf.size() - off - kHeaderSize < size) break;
      const auto* body = buf.data() + off + kHeaderSize;
      switch (type) {
        case FrameType::Data:
          inbox_.push_back({peer, tag, id, Bytes(body, body + size)});
          break;
        case FrameType::Ack:
          pending_.erase(id);
          break;
        case FrameType::Barrier:
          ++barrier_tokens_[static_cast<std::uint64_t>(tag)];
          break;
        default:
          throw ExchangeError("corrupt frame from rank " + std::to_string(peer));
      }
      off += kHeaderSize + size;
    }
    buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(off));
  }

  int rank_;
  std::vector<int> fds_;
  std::vector<Bytes> out_;
  std::vector<Bytes> in_;
  std::deque<Inbound> inbox_;
  std::set<std::uint64_t> pending_;
  std::map<std::uint64_t, int> barrier_tokens_;
  std::uint64_t next_id_ = 0;
  std::uint64_t barrier_epoch_ = 0;
  std::chrono::milliseconds timeout_;
  std::chrono::steady_clock::time_point last_change_ = std::chrono::steady_clock::now();
};

}  // namespace

SocketCluster::SocketCluster(int nranks, std::chrono::milliseconds deadlock_timeout)
    : nranks_(nranks), timeout_(deadlock_timeout) {
  if (nranks < 1) throw DomainError("cluster needs at least one rank");
}

std::vector<int> SocketCluster::run(const std::function<int(RankContext&)>& body) {
  // fds[r][p]: rank r's end of the (r, p) socket pair.
  std::vector<std::vector<int>> fds(nranks_, std::vector<int>(nranks_, -1));
  for (int a = 0; a < nranks_; ++a) {
    for (int b = a + 1; b < nranks_; ++b) {
      int sv[2];
      if (::socketpair(AF_UNIX, SOCK_STREAM, 0, sv) != 0) {
        throw ExchangeError(std::string("socketpair failed: ") + std::strerror(errno));
      }
      fds[a][b] = sv[0];
      fds[b][a] = sv[1];
    }
  }

  std::fflush(nullptr);
  std::vector<pid_t> pids;
  for (int r = 0; r < nranks_; ++r) {
    const pid_t pid = ::fork();
    if (pid < 0) throw ExchangeError("fork failed");
    if (pid == 0) {
      for (int a = 0; a < nranks_; ++a) {
        if (a == r) continue;
        for (int b = 0; b < nranks_; ++b) {
          if (fds[a][b] >= 0) ::close(fds[a][b]);
        }
      }
      int status = 70;
      try {
        SocketTransport transport(r, fds[r], timeout_);
        RankContext ctx(transport);
        status = body(ctx);
        transport.flush();
      } catch (const std::exception& e) {
        std::fprintf(stderr, "rank %d: %s\n", r, e.what());
        status = 70;
      }
      for (int fd : fds[r]) {
        if (fd >= 0) ::close(fd);
      }
      std::fflush(nullptr);
      ::_exit(status);
    }
    pids.push_back(pid);
  }
  for (auto& row : fds) {
    for (int fd : row) {
      if (fd >= 0) ::close(fd);
    }
  }
  std::vector<int> status(nranks_, 70);
  for (int r = 0; r < nranks_; ++r) {
    int st = 0;
    if (::waitpid(pids[r], &st, 0) == pids[r] && WIFEXITED(st)) status[r] = WEXITSTATUS(st);
  }
  return status;
}

}  // namespace zfr::prep
