#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "zfr/common/bytes.hpp"

namespace zfr::prep {

/// Point-to-point endpoint of one rank. Semantics follow the synchronous-send /
/// probe / nonblocking-barrier trio used for sparse dynamic exchange:
///  - a send request completes only once the receiver has received the message;
///  - messages between a fixed (sender, receiver) pair arrive in send order;
///  - the n-th barrier request completes once every rank has posted its n-th barrier.
class MessageTransport {
 public:
  using Request = std::uint64_t;

  struct Envelope {
    int source;
    int tag;
    std::size_t size;
  };

  virtual ~MessageTransport() = default;

  virtual int rank() const = 0;
  virtual int size() const = 0;

  virtual Request issend(int dest, int tag, Bytes payload) = 0;
  virtual bool test_send(Request request) = 0;
  virtual std::optional<Envelope> iprobe(int tag) = 0;
  virtual Bytes recv(int source, int tag) = 0;
  virtual Request ibarrier() = 0;
  virtual bool test_barrier(Request request) = 0;

  /// Blocks briefly until something may have changed. Throws ExchangeError on
  /// abort by another rank or when no progress happened within the deadlock timeout.
  virtual void wait_for_activity() = 0;
};

/// Per-rank handle shared by all collective operations. Every rank must issue
/// the same sequence of collectives so that `next_tag` stays in lockstep.
class RankContext {
 public:
  explicit RankContext(MessageTransport& transport)
      : transport_(&transport), rank_(transport.rank()), nranks_(transport.size()) {}

  int rank() const { return rank_; }
  int nranks() const { return nranks_; }
  MessageTransport& transport() { return *transport_; }
  int next_tag() { return ++tag_; }

 private:
  MessageTransport* transport_;
  int rank_;
  int nranks_;
  int tag_ = 0;
};

}  // namespace zfr::prep
