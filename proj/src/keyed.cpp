#include "ipnet/keyed.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipnet {

namespace {

void require_distinct(const std::vector<key_value>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j])
        throw std::invalid_argument("key values must be pairwise distinct");
}

}  // namespace

transmission_key::transmission_key(key_mode mode, std::vector<key_value> src,
                                   std::vector<key_value> dst)
    : mode_(mode),
      source_values_(std::move(src)),
      destination_values_(std::move(dst)) {
  std::size_t n = std::max(source_values_.size(), destination_values_.size());
  if (n < 2) throw std::invalid_argument("key length must be at least 2");
  if (mode_ == key_mode::source_destination_keyed &&
      source_values_.size() != destination_values_.size())
    throw std::invalid_argument(
        "source-destination key needs equal-length sequences");
  require_distinct(source_values_);
  require_distinct(destination_values_);
}

transmission_key transmission_key::source(std::vector<key_value> values) {
  return transmission_key(key_mode::source_keyed, std::move(values), {});
}

transmission_key transmission_key::destination(std::vector<key_value> values) {
  return transmission_key(key_mode::destination_keyed, {}, std::move(values));
}

transmission_key transmission_key::source_destination(
    std::vector<key_value> src, std::vector<key_value> dst) {
  return transmission_key(key_mode::source_destination_keyed, std::move(src),
                          std::move(dst));
}

std::size_t transmission_key::size() const {
  return std::max(source_values_.size(), destination_values_.size());
}

std::optional<key_value> transmission_key::source_value_for(
    std::uint64_t seq_no) const {
  if (source_values_.empty()) return std::nullopt;
  return source_values_[index_for(seq_no)];
}

std::optional<key_value> transmission_key::destination_value_for(
    std::uint64_t seq_no) const {
  if (destination_values_.empty()) return std::nullopt;
  return destination_values_[index_for(seq_no)];
}

std::string to_log_line(const election_event& event) {
  return std::to_string(event.position) + ',' +
         (event.value.is_miss() ? "f" : event.value.payload());
}

slot_value elect_winner(const std::vector<slot_value>& candidates) {
  if (candidates.empty()) return slot_value::miss();
  struct tally {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::vector<std::pair<slot_value, tally>> tallies;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto it = std::find_if(tallies.begin(), tallies.end(),
                           [&](const auto& t) { return t.first == candidates[i]; });
    if (it == tallies.end())
      tallies.push_back({candidates[i], {1, i}});
    else
      ++it->second.count;
  }
  const auto* best = &tallies.front();
  for (const auto& t : tallies)
    if (t.second.count > best->second.count ||
        (t.second.count == best->second.count &&
         t.second.first < best->second.first))
      best = &t;
  return best->first;
}

stream_reconstructor::stream_reconstructor(std::uint32_t key_len,
                                           std::uint32_t buffer_len)
    : key_len_(key_len),
      buffer_len_(buffer_len == 0 ? default_buffer_len(key_len) : buffer_len),
      round_counter_(key_len, 0) {
  if (key_len < 2) throw std::invalid_argument("key length must be at least 2");
}

std::uint64_t stream_reconstructor::place_from(std::uint64_t pos,
                                               const std::string& payload) {
  // first unelected, unoccupied slot of the same key residue
  while (pos < next_position_ || current_.count(pos)) pos += key_len_;
  current_.emplace(pos, payload);
  return pos;
}

std::uint64_t stream_reconstructor::infer_position(std::uint32_t key_index) {
  std::uint64_t pos = round_counter_[key_index] * key_len_ + key_index + 1;
  ++round_counter_[key_index];
  return pos;
}

void stream_reconstructor::advance_start_to(std::uint64_t position) {
  while (start_ < position) {
    auto it = current_.find(start_);
    if (it != current_.end()) {
      std::string payload = it->second;
      current_.erase(it);
      // A packet passed over at its position is hidden: move it to the
      // first free slot of matching residue.
      if (!elected_ids_.count(payload)) place_from(start_ + key_len_, payload);
    }
    ++start_;
  }
}

const std::string* stream_reconstructor::queue_snapshot::find(
    std::uint64_t position) const {
  auto it = std::lower_bound(
      slots.begin(), slots.end(), position,
      [](const auto& slot, std::uint64_t p) { return slot.first < p; });
  if (it == slots.end() || it->first != position) return nullptr;
  return &it->second;
}

void stream_reconstructor::take_snapshot() {
  queue_snapshot snap;
  snap.start = start_;
  snap.slots.assign(current_.begin(), current_.end());
  queues_.push_back(std::move(snap));
  if (queues_.size() > key_len_ + 1) queues_.pop_front();
}

election_event stream_reconstructor::elect_next() {
  std::uint64_t j = next_position_;
  last_candidates_.clear();
  for (const auto& q : queues_) {
    if (q.start > j || q.extent() < j) continue;
    const std::string* payload = q.find(j);
    if (!payload) {
      last_candidates_.push_back(slot_value::miss());
    } else if (!elected_ids_.count(*payload)) {
      last_candidates_.push_back(slot_value::packet(*payload));
    }
  }
  slot_value winner = elect_winner(last_candidates_);
  if (!winner.is_miss()) {
    elected_ids_.insert(winner.payload());
    --pending_;
  }
  output_.push_back(winner);
  ++next_position_;
  return {j, winner};
}

std::vector<election_event> stream_reconstructor::push(
    const keyed_packet& packet) {
  if (flushed_) throw std::logic_error("push after flush");
  if (packet.key_index >= key_len_)
    throw std::invalid_argument("key index out of range");
  if (packet.payload_id.empty())
    throw std::invalid_argument("payload id must be non-empty");
  advance_start_to(next_position_);
  place_from(infer_position(packet.key_index), packet.payload_id);
  ++pending_;
  take_snapshot();
  std::vector<election_event> events;
  if (pending_ >= buffer_len_) events.push_back(elect_next());
  return events;
}

std::vector<election_event> stream_reconstructor::flush() {
  std::vector<election_event> events;
  while (!current_.empty()) {
    advance_start_to(next_position_);
    if (current_.empty()) break;
    take_snapshot();
    events.push_back(elect_next());
  }
  flushed_ = true;
  return events;
}

}  // namespace ipnet
