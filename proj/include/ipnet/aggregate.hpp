#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ipnet/trace.hpp"

namespace ipnet {

enum class burst_trigger { size_only, time_only, hybrid };

/// Burst assembly bounds.  size_only flushes a queue when the next packet
/// would exceed max_burst_payload; time_only when the oldest queued packet
/// reaches max_delay_us; hybrid on whichever fires first.
struct burst_policy {
  std::uint64_t max_burst_payload = 9000;
  std::uint64_t max_delay_us = 10000;  // 10 ms
  burst_trigger trigger = burst_trigger::hybrid;

  bool size_bounded() const { return trigger != burst_trigger::time_only; }
  bool time_bounded() const { return trigger != burst_trigger::size_only; }
};

/// One assembled burst: same-route packets in arrival order.
struct burst {
  address_any route_dst;
  std::vector<packet_record> members;
  std::uint64_t first_ts_us = 0;
  std::uint64_t flush_ts_us = 0;

  std::uint64_t payload_bytes() const;
};

/// Queues the trace per destination route and flushes by the policy.
/// Bursts come out ordered by (flush time, route).  Every packet lands in
/// exactly one burst, order preserved within a route.  Throws
/// packet_too_large when a single packet exceeds a size-bounded policy.
std::vector<burst> assemble_bursts(const trace& t, const burst_policy& policy);

/// Wraps serialized inner packets, back to back, behind one carrier IP
/// header.  A v4 carrier (20-byte header) throws overflow_error when the
/// payload exceeds 65515 bytes; a v6 carrier (40-byte header) switches to
/// the jumbogram form (hop-by-hop option with a 32-bit length) beyond
/// 65535.
std::vector<std::uint8_t> aggregate_packets(
    std::span<const std::vector<std::uint8_t>> inner_packets,
    int carrier_version, const address_any& carrier_src,
    const address_any& carrier_dst);

/// Convenience: serializes the burst's members with the given payload fill
/// byte and aggregates them.
std::vector<std::uint8_t> aggregate_burst(const burst& b, int carrier_version,
                                          const address_any& carrier_src,
                                          const address_any& carrier_dst,
                                          std::uint8_t payload_fill = 0);

/// Strips the carrier header and walks the payload by each inner packet's
/// length field; inner packets come back byte-identical.  Throws
/// truncated_payload / bad_inner_header.
std::vector<std::vector<std::uint8_t>> disaggregate(
    std::span<const std::uint8_t> carrier);

/// Splits one application datum into per-packet payload sizes under a cap:
/// maximal-size packets first, one trailing remainder.  A zero-byte datum
/// still takes one (empty) packet.
std::vector<std::uint64_t> segment_sizes(std::uint64_t datum,
                                         std::uint64_t cap);

/// Packet-by-packet v4 -> v6 header replacement: each payload is re-emitted
/// as v6 packets of at most mtu-40 payload bytes.
struct swap_stats {
  std::uint64_t in_packets = 0;
  std::uint64_t out_packets = 0;
  std::uint64_t in_bytes = 0;
  std::uint64_t out_bytes = 0;
  double packet_ratio = 0.0;
  double byte_ratio = 0.0;
};

swap_stats header_swap_analysis(const trace& t, std::uint32_t mtu = 1500);

/// Payload reconstruction: same-flow packets whose consecutive gaps stay
/// within the vicinity are summed into one inferred application datum, then
/// re-segmented into v6 packets of at most size_limit-40 payload bytes
/// (maximal-size packets first, one trailing remainder).
struct reassembly_stats {
  std::uint64_t in_packets = 0;
  std::uint64_t out_packets = 0;
  std::uint64_t groups = 0;
  std::uint64_t in_bytes = 0;
  std::uint64_t out_bytes = 0;
  double packet_ratio = 0.0;
  double byte_ratio = 0.0;
};

reassembly_stats payload_reconstruct_analysis(const trace& t,
                                              std::uint64_t time_vicinity_us,
                                              std::uint32_t size_limit);

}  // namespace ipnet
