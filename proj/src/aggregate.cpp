#include "ipnet/aggregate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace ipnet {

std::uint64_t burst::payload_bytes() const {
  std::uint64_t sum = 0;
  for (const auto& p : members) sum += p.total_len;
  return sum;
}

namespace {

using route_key = std::pair<int, std::string>;  // version, canonical dst

route_key route_of(const packet_record& p) {
  return {p.version(), to_string(p.dst)};
}

struct open_queue {
  std::vector<packet_record> members;
  std::uint64_t first_ts = 0;
  std::uint64_t payload = 0;
};

}  // namespace

std::vector<burst> assemble_bursts(const trace& t, const burst_policy& policy) {
  std::map<route_key, open_queue> queues;
  std::vector<burst> bursts;

  auto flush = [&](const route_key& key, open_queue& q, std::uint64_t ts) {
    burst b;
    b.route_dst = q.members.front().dst;
    b.first_ts_us = q.first_ts;
    b.flush_ts_us = ts;
    b.members = std::move(q.members);
    bursts.push_back(std::move(b));
    queues.erase(key);
  };

  for (const auto& p : t.packets) {
    if (policy.size_bounded() && p.total_len > policy.max_burst_payload)
      throw packet_too_large("packet of " + std::to_string(p.total_len) +
                             " bytes exceeds the burst payload bound");
    if (policy.time_bounded()) {
      // expire every queue whose oldest packet has waited out the delay
      std::vector<std::pair<std::uint64_t, route_key>> due;
      for (auto& [key, q] : queues)
        if (q.first_ts + policy.max_delay_us <= p.ts_us)
          due.emplace_back(q.first_ts + policy.max_delay_us, key);
      std::sort(due.begin(), due.end());
      for (const auto& [ts, key] : due) flush(key, queues.at(key), ts);
    }
    route_key key = route_of(p);
    auto it = queues.find(key);
    if (it != queues.end() && policy.size_bounded() &&
        it->second.payload + p.total_len > policy.max_burst_payload) {
      flush(key, it->second, p.ts_us);
      it = queues.end();
    }
    if (it == queues.end()) {
      open_queue q;
      q.first_ts = p.ts_us;
      it = queues.emplace(key, std::move(q)).first;
    }
    it->second.members.push_back(p);
    it->second.payload += p.total_len;
  }

  std::uint64_t end_ts = t.packets.empty() ? 0 : t.packets.back().ts_us;
  std::vector<route_key> remaining;
  for (auto& [key, q] : queues) remaining.push_back(key);
  for (const auto& key : remaining) flush(key, queues.at(key), end_ts);
  return bursts;
}

namespace {

void put16(std::vector<std::uint8_t>& out, std::size_t at, std::uint16_t v) {
  out[at] = std::uint8_t(v >> 8);
  out[at + 1] = std::uint8_t(v);
}

void put32(std::vector<std::uint8_t>& out, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out[at + std::size_t(i)] = std::uint8_t(v >> (24 - 8 * i));
}

}  // namespace

std::vector<std::uint8_t> aggregate_packets(
    std::span<const std::vector<std::uint8_t>> inner_packets,
    int carrier_version, const address_any& carrier_src,
    const address_any& carrier_dst) {
  if (inner_packets.empty())
    throw std::invalid_argument("burst must not be empty");
  std::uint64_t payload = 0;
  for (const auto& p : inner_packets) payload += p.size();

  std::vector<std::uint8_t> out;
  if (carrier_version == 4) {
    if (payload > 65515)
      throw overflow_error("v4 carrier payload of " + std::to_string(payload) +
                           " bytes exceeds 65515");
    out.resize(20);
    out[0] = 0x45;
    put16(out, 2, std::uint16_t(20 + payload));
    out[8] = 64;
    out[9] = 4;  // ip-in-ip
    std::uint32_t src = std::get<v4_address>(carrier_src).value();
    std::uint32_t dst = std::get<v4_address>(carrier_dst).value();
    put32(out, 12, src);
    put32(out, 16, dst);
    put16(out, 10, std::uint16_t(~ones_complement_sum(out)));
  } else if (carrier_version == 6) {
    bool jumbo = payload > 65535;
    out.resize(jumbo ? 48 : 40);
    out[0] = 0x60;
    out[7] = 64;  // hop limit
    const auto& src = std::get<v6_address>(carrier_src).bytes();
    const auto& dst = std::get<v6_address>(carrier_dst).bytes();
    std::copy(src.begin(), src.end(), out.begin() + 8);
    std::copy(dst.begin(), dst.end(), out.begin() + 24);
    if (jumbo) {
      // RFC 2675: payload length 0, hop-by-hop header with the jumbo option;
      // the 32-bit length covers everything after the base header.
      out[6] = 0;    // next header: hop-by-hop options
      out[40] = 4;   // next header: ip-in-ip
      out[41] = 0;   // extension length: 8 bytes
      out[42] = 0xc2;  // jumbo payload option
      out[43] = 4;
      put32(out, 44, std::uint32_t(8 + payload));
    } else {
      out[6] = 4;  // ip-in-ip
      put16(out, 4, std::uint16_t(payload));
    }
  } else {
    throw std::invalid_argument("carrier version must be 4 or 6");
  }
  for (const auto& p : inner_packets) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<std::uint8_t> aggregate_burst(const burst& b, int carrier_version,
                                          const address_any& carrier_src,
                                          const address_any& carrier_dst,
                                          std::uint8_t payload_fill) {
  std::vector<std::vector<std::uint8_t>> inner;
  inner.reserve(b.members.size());
  for (const auto& p : b.members) {
    std::vector<std::uint8_t> fill(p.payload_size(), payload_fill);
    inner.push_back(serialize_packet(p, fill));
  }
  return aggregate_packets(inner, carrier_version, carrier_src, carrier_dst);
}

std::vector<std::vector<std::uint8_t>> disaggregate(
    std::span<const std::uint8_t> carrier) {
  if (carrier.empty()) throw truncated_payload("empty carrier");
  std::size_t offset;
  std::size_t payload_len;
  int version = carrier[0] >> 4;
  if (version == 4) {
    if (carrier.size() < 20)
      throw truncated_payload("carrier ends inside the v4 header");
    offset = std::size_t(carrier[0] & 0x0f) * 4;
    if (offset < 20) throw bad_inner_header("bad carrier header length");
    std::size_t total = std::size_t(carrier[2]) << 8 | carrier[3];
    if (total < offset || total > carrier.size())
      throw truncated_payload("carrier total length inconsistent");
    payload_len = total - offset;
  } else if (version == 6) {
    if (carrier.size() < 40)
      throw truncated_payload("carrier ends inside the v6 header");
    std::size_t field = std::size_t(carrier[4]) << 8 | carrier[5];
    if (field == 0 && carrier[6] == 0) {
      // jumbogram: hop-by-hop header carrying the 32-bit payload length
      if (carrier.size() < 48)
        throw truncated_payload("carrier ends inside the jumbo option");
      if (carrier[42] != 0xc2 || carrier[43] != 4)
        throw bad_inner_header("expected a jumbo payload option");
      std::size_t jumbo = std::size_t(carrier[44]) << 24 |
                          std::size_t(carrier[45]) << 16 |
                          std::size_t(carrier[46]) << 8 | carrier[47];
      if (jumbo < 8) throw bad_inner_header("jumbo length below option size");
      offset = 48;
      payload_len = jumbo - 8;
    } else {
      offset = 40;
      payload_len = field;
    }
    if (offset + payload_len > carrier.size())
      throw truncated_payload("carrier payload length inconsistent");
  } else {
    throw bad_inner_header("carrier version nibble is " +
                           std::to_string(version));
  }

  std::span<const std::uint8_t> payload = carrier.subspan(offset, payload_len);
  std::vector<std::vector<std::uint8_t>> inner;
  while (!payload.empty()) {
    std::size_t len = packet_length_at(payload);
    inner.emplace_back(payload.begin(), payload.begin() + std::ptrdiff_t(len));
    payload = payload.subspan(len);
  }
  return inner;
}

std::vector<std::uint64_t> segment_sizes(std::uint64_t datum,
                                         std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("payload cap must be positive");
  std::vector<std::uint64_t> sizes;
  do {
    std::uint64_t piece = std::min(datum, cap);
    sizes.push_back(piece);
    datum -= piece;
  } while (datum > 0);
  return sizes;
}

namespace {

// Number of v6 packets needed for one application datum under a payload cap.
std::uint64_t segments_for(std::uint64_t datum, std::uint64_t cap) {
  if (datum == 0) return 1;
  return (datum + cap - 1) / cap;
}

}  // namespace

swap_stats header_swap_analysis(const trace& t, std::uint32_t mtu) {
  if (mtu <= 40) throw std::invalid_argument("mtu must exceed a v6 header");
  std::uint64_t cap = mtu - 40;
  swap_stats stats;
  for (const auto& p : t.packets) {
    if (p.version() != 4)
      throw error("header swap analysis expects a v4 trace");
    std::uint64_t payload = p.payload_size();
    std::uint64_t pieces = segments_for(payload, cap);
    stats.in_packets += 1;
    stats.in_bytes += p.total_len;
    stats.out_packets += pieces;
    stats.out_bytes += payload + 40 * pieces;
  }
  if (stats.in_packets) {
    stats.packet_ratio = double(stats.out_packets) / double(stats.in_packets);
    stats.byte_ratio = double(stats.out_bytes) / double(stats.in_bytes);
  }
  return stats;
}

reassembly_stats payload_reconstruct_analysis(const trace& t,
                                              std::uint64_t time_vicinity_us,
                                              std::uint32_t size_limit) {
  if (size_limit <= 40)
    throw std::invalid_argument("size limit must exceed a v6 header");
  std::uint64_t cap = size_limit - 40;

  // flow identity: addresses, ports, and version
  using flow_key = std::tuple<int, std::string, std::string, std::uint16_t,
                              std::uint16_t>;
  struct flow_state {
    std::uint64_t last_ts = 0;
    std::uint64_t datum = 0;
    bool open = false;
  };
  std::map<flow_key, flow_state> flows;
  reassembly_stats stats;

  auto close_group = [&](flow_state& state) {
    stats.groups += 1;
    std::uint64_t pieces = segments_for(state.datum, cap);
    stats.out_packets += pieces;
    stats.out_bytes += state.datum + 40 * pieces;
    state.datum = 0;
    state.open = false;
  };

  for (const auto& p : t.packets) {
    if (p.version() != 4)
      throw error("payload reconstruction expects a v4 trace");
    flow_key key{p.version(), to_string(p.src), to_string(p.dst), p.sport,
                 p.dport};
    flow_state& state = flows[key];
    if (state.open && p.ts_us - state.last_ts > time_vicinity_us)
      close_group(state);
    state.open = true;
    state.last_ts = p.ts_us;
    state.datum += p.payload_size();
    stats.in_packets += 1;
    stats.in_bytes += p.total_len;
  }
  for (auto& [key, state] : flows)
    if (state.open) close_group(state);

  if (stats.in_packets) {
    stats.packet_ratio = double(stats.out_packets) / double(stats.in_packets);
    stats.byte_ratio = double(stats.out_bytes) / double(stats.in_bytes);
  }
  return stats;
}

}  // namespace ipnet
