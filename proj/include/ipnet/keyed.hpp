#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ipnet/errors.hpp"
#include "ipnet/v6.hpp"

namespace ipnet {

enum class key_mode { source_keyed, destination_keyed, source_destination_keyed };

/// One key element: a UDP port (KUDP) or an IPv6 address (K-IPv6).
using key_value = std::variant<std::uint16_t, v6_address>;

/// An ordered sequence of ports or addresses walked round-robin by the
/// sender.  Source-destination keying holds two sequences of equal length.
class transmission_key {
 public:
  static transmission_key source(std::vector<key_value> values);
  static transmission_key destination(std::vector<key_value> values);
  static transmission_key source_destination(std::vector<key_value> src,
                                             std::vector<key_value> dst);

  key_mode mode() const { return mode_; }
  std::size_t size() const;

  /// 0-based key index for a 1-based send sequence number.
  std::size_t index_for(std::uint64_t seq_no) const {
    return std::size_t((seq_no - 1) % size());
  }

  /// Key values for a 1-based send sequence number; source and/or
  /// destination depending on the mode.
  std::optional<key_value> source_value_for(std::uint64_t seq_no) const;
  std::optional<key_value> destination_value_for(std::uint64_t seq_no) const;

 private:
  transmission_key(key_mode mode, std::vector<key_value> src,
                   std::vector<key_value> dst);

  key_mode mode_;
  std::vector<key_value> source_values_;
  std::vector<key_value> destination_values_;
};

/// A received datagram as the reconstruction algorithm sees it: the key
/// position it arrived on and an opaque payload identity.
struct keyed_packet {
  std::string payload_id;
  std::uint32_t key_index = 0;  // 0-based, < key length
};

/// A stream slot: a delivered packet or the miss marker recorded when a
/// position is declared failed-to-receive.
class slot_value {
 public:
  static slot_value packet(std::string payload_id) {
    slot_value v;
    v.payload_ = std::move(payload_id);
    return v;
  }
  static slot_value miss() { return slot_value{}; }

  bool is_miss() const { return payload_.empty(); }
  const std::string& payload() const { return payload_; }

  friend bool operator==(const slot_value&, const slot_value&) = default;

 private:
  std::string payload_;
};

struct election_event {
  std::uint64_t position = 0;  // 1-based stream position
  slot_value value;
};

/// Event log line: "position,payload_id" or "position,f".
std::string to_log_line(const election_event& event);

/// Election over the slot contents of the retained queues, ordered oldest
/// queue first.  Most occurrences win; ties go to the value whose first
/// occurrence is in the earliest queue.  The miss marker competes like any
/// other value.
slot_value elect_winner(const std::vector<slot_value>& candidates);

/// Receiver-side state machine of the stream reconstruction algorithm:
/// an insertion buffer, a window of retained sorting-queue snapshots, and
/// per-key-index round counters that turn observed key positions back into
/// global stream positions.
///
/// Once `buffer_len` packets are pending, each push elects the next stream
/// position from the snapshots covering it; flush() drains the remainder.
/// Events stream out eagerly.
///
/// Single-owner mutable state: one logical thread drives push/flush.
/// Distinct reconstructors are independent and may run in parallel.
class stream_reconstructor {
 public:
  /// buffer_len 0 selects the default of half the key length, rounded up.
  stream_reconstructor(std::uint32_t key_len, std::uint32_t buffer_len = 0);

  static std::uint32_t default_buffer_len(std::uint32_t key_len) {
    return (key_len + 1) / 2;
  }

  std::uint32_t key_len() const { return key_len_; }
  std::uint32_t buffer_len() const { return buffer_len_; }
  bool flushed() const { return flushed_; }

  /// Feeds one arrival; returns the election events it triggered.
  /// Throws std::logic_error after flush().
  std::vector<election_event> push(const keyed_packet& packet);

  /// Elects every remaining position up to the highest occupied slot and
  /// seals the state.  Positions never filled emit the miss marker.
  std::vector<election_event> flush();

  /// All events elected so far, by position (contiguous from 1).
  const std::vector<slot_value>& output() const { return output_; }

  /// Candidates considered for the most recent election, oldest queue
  /// first; exposed for inspection and tests.
  const std::vector<slot_value>& last_candidates() const {
    return last_candidates_;
  }

 private:
  struct queue_snapshot {
    std::uint64_t start = 1;  // first covered position
    std::vector<std::pair<std::uint64_t, std::string>> slots;  // sorted
    std::uint64_t extent() const {
      return slots.empty() ? 0 : slots.back().first;
    }
    const std::string* find(std::uint64_t position) const;
  };

  std::uint64_t infer_position(std::uint32_t key_index);
  void advance_start_to(std::uint64_t position);
  void take_snapshot();
  election_event elect_next();
  std::uint64_t place_from(std::uint64_t pos, const std::string& payload);

  std::uint32_t key_len_;
  std::uint32_t buffer_len_;
  std::map<std::uint64_t, std::string> current_;  // live sorting queue
  std::uint64_t start_ = 1;
  std::deque<queue_snapshot> queues_;  // last key_len+1 snapshots
  std::vector<std::uint64_t> round_counter_;
  std::unordered_set<std::string> elected_ids_;
  std::vector<slot_value> output_;
  std::vector<slot_value> last_candidates_;
  std::uint64_t next_position_ = 1;
  std::size_t pending_ = 0;
  bool flushed_ = false;
};

}  // namespace ipnet
