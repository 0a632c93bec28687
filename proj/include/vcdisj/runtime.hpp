#pragma once

// Two-party protocol runtime with exact bit accounting.
//
// Each party is an ordinary function of its own input, an Endpoint and a copy of the shared
// random string. Parties run as stackful coroutines on one thread: a receive on an empty inbox
// suspends the party until the other side has sent something. A party can reach the other's
// state only through messages.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/coroutine2/coroutine.hpp>
#include <boost/coroutine2/fixedsize_stack.hpp>

#include "vcdisj/encoding.hpp"
#include "vcdisj/errors.hpp"

namespace vcdisj {

enum class Party { alice = 0, bob = 1 };

inline const char* to_string(Party p) { return p == Party::alice ? "alice" : "bob"; }
inline Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }

struct Message {
  Party sender = Party::alice;
  BitString payload;

  std::size_t bits() const noexcept { return payload.size(); }
  friend bool operator==(const Message&, const Message&) = default;
};

class Transcript {
 public:
  void record(Party sender, BitString payload) { messages_.push_back({sender, std::move(payload)}); }

  const std::vector<Message>& messages() const noexcept { return messages_; }

  std::size_t total_bits() const noexcept {
    std::size_t total = 0;
    for (const auto& m : messages_) total += m.bits();
    return total;
  }

  /// Number of maximal runs of consecutive messages from the same sender.
  std::size_t rounds() const noexcept {
    std::size_t r = 0;
    for (std::size_t i = 0; i < messages_.size(); ++i)
      if (i == 0 || messages_[i].sender != messages_[i - 1].sender) ++r;
    return r;
  }

  bool one_way() const noexcept {
    for (const auto& m : messages_)
      if (m.sender != Party::alice) return false;
    return true;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<Message> messages_;
};

/// Public random string known to both parties, addressed by position.
///
/// Word i is a splitmix64 mix of (seed, i); copies with equal seeds yield identical words.
class SharedRandomness {
 public:
  explicit SharedRandomness(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next() { return mix(seed_, position_++); }

  /// Independent sub-stream for a sub-protocol or repetition, keyed by tag.
  SharedRandomness derive(std::uint64_t tag) const { return SharedRandomness(mix(seed_ ^ 0xd1b54a32d192ed03ULL, tag)); }

  static std::uint64_t mix(std::uint64_t key, std::uint64_t x) {
    std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (x + 1);
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

/// Deterministic per-run seed derivation used by harnesses and sweeps.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run) { return SharedRandomness::mix(base, run); }

/// Sequential reader over one received message.
class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}

  bool bit() {
    if (pos_ >= bits_->size()) throw ProtocolError("BitReader: read past end of message");
    return (*bits_)[pos_++];
  }

  std::uint64_t uint(std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1U) | (bit() ? 1U : 0U);
    return v;
  }

  bool done() const noexcept { return pos_ == bits_->size(); }
  std::size_t remaining() const noexcept { return bits_->size() - pos_; }

 private:
  const BitString* bits_;
  std::size_t pos_ = 0;
};

namespace detail {

using Coroutine = boost::coroutines2::coroutine<void>;

struct Wire {
  std::deque<BitString> inbox[2];
  bool waiting[2] = {false, false};
  Transcript transcript;
};

}  // namespace detail

/// One party's view of the channel.
class Endpoint {
 public:
  Endpoint(Party self, detail::Wire& wire, detail::Coroutine::push_type& yield)
      : self_(self), wire_(&wire), yield_(&yield) {}

  Party self() const noexcept { return self_; }

  void send(BitString payload) {
    wire_->transcript.record(self_, payload);
    wire_->inbox[static_cast<int>(other(self_))].push_back(std::move(payload));
  }

  BitString receive() {
    auto& box = wire_->inbox[static_cast<int>(self_)];
    while (box.empty()) {
      wire_->waiting[static_cast<int>(self_)] = true;
      (*yield_)();
    }
    wire_->waiting[static_cast<int>(self_)] = false;
    BitString msg = std::move(box.front());
    box.pop_front();
    return msg;
  }

  void send_uint(std::uint64_t value, std::size_t width) { send(BitString::from_uint(value, width)); }
  std::uint64_t receive_uint(std::size_t width) {
    auto msg = receive();
    if (msg.size() != width) throw ProtocolError("receive_uint: unexpected message width");
    return val(msg);
  }
  void send_bit(bool b) { send(BitString::from_uint(b ? 1 : 0, 1)); }
  bool receive_bit() { return receive_uint(1) != 0; }

 private:
  Party self_;
  detail::Wire* wire_;
  detail::Coroutine::push_type* yield_;
};

template <typename InA, typename InB, typename OutA, typename OutB>
struct Protocol {
  using AliceInput = InA;
  using BobInput = InB;
  using AliceOutput = OutA;
  using BobOutput = OutB;

  std::string name;
  std::function<OutA(const InA&, Endpoint&, SharedRandomness&)> alice;
  std::function<OutB(const InB&, Endpoint&, SharedRandomness&)> bob;
};

template <typename OutA, typename OutB>
struct ProtocolOutcome {
  OutA alice_output;
  OutB bob_output;
  Transcript transcript;

  /// Bob announces the output.
  const OutB& answer() const noexcept { return bob_output; }
};

inline constexpr std::size_t party_stack_size = 64 * 1024;

/// Runs both party functions to completion and returns their outputs with the transcript.
template <typename OutA, typename OutB>
ProtocolOutcome<OutA, OutB> run_parties(const std::function<OutA(Endpoint&)>& alice,
                                        const std::function<OutB(Endpoint&)>& bob) {
  using detail::Coroutine;
  detail::Wire wire;
  std::optional<OutA> out_a;
  std::optional<OutB> out_b;
  boost::coroutines2::fixedsize_stack stack(party_stack_size);

  Coroutine::pull_type ca(stack, [&](Coroutine::push_type& yield) {
    Endpoint ep(Party::alice, wire, yield);
    out_a.emplace(alice(ep));
  });
  Coroutine::pull_type cb(stack, [&](Coroutine::push_type& yield) {
    Endpoint ep(Party::bob, wire, yield);
    out_b.emplace(bob(ep));
  });

  for (;;) {
    const bool a_live = static_cast<bool>(ca);
    const bool b_live = static_cast<bool>(cb);
    if (!a_live && !b_live) break;
    bool progressed = false;
    if (a_live && !wire.inbox[0].empty()) {
      ca();
      progressed = true;
    }
    if (cb && !wire.inbox[1].empty()) {
      cb();
      progressed = true;
    }
    if (!progressed) throw ProtocolError("protocol deadlock: a party waits for a message that never comes");
  }
  if (!wire.inbox[0].empty() || !wire.inbox[1].empty())
    throw ProtocolError("protocol finished with unread messages");
  return {std::move(*out_a), std::move(*out_b), std::move(wire.transcript)};
}

/// Runs a protocol on (input_a, input_b); each party gets its own copy of the shared randomness.
template <typename InA, typename InB, typename OutA, typename OutB>
ProtocolOutcome<OutA, OutB> run(const Protocol<InA, InB, OutA, OutB>& protocol, const InA& input_a,
                                const InB& input_b, std::uint64_t seed) {
  return run_parties<OutA, OutB>(
      [&](Endpoint& ep) {
        SharedRandomness rng(seed);
        return protocol.alice(input_a, ep, rng);
      },
      [&](Endpoint& ep) {
        SharedRandomness rng(seed);
        return protocol.bob(input_b, ep, rng);
      });
}

inline void write_transcript_dump(std::ostream& os, const Transcript& t) {
  os << "index,sender,bits,hex\n";
  for (std::size_t i = 0; i < t.messages().size(); ++i) {
    const auto& m = t.messages()[i];
    os << i << ',' << to_string(m.sender) << ',' << m.bits() << ',' << m.payload.to_hex() << '\n';
  }
}

}  // namespace vcdisj
