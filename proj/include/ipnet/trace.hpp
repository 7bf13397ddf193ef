#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ipnet/errors.hpp"
#include "ipnet/v4.hpp"
#include "ipnet/v6.hpp"

namespace ipnet {

using address_any = std::variant<v4_address, v6_address>;

std::string to_string(const address_any& addr);
address_any parse_address_any(std::string_view text, int version);
int version_of(const address_any& addr);

/// One timestamped, flow-addressed datagram of a trace.  total_len includes
/// the IP header (20 bytes for v4, 40 for v6).
struct packet_record {
  std::uint64_t ts_us = 0;
  address_any src;
  address_any dst;
  std::uint16_t sport = 0;
  std::uint16_t dport = 0;
  std::uint32_t total_len = 0;

  int version() const { return version_of(src); }
  std::uint32_t header_size() const { return version() == 4 ? 20 : 40; }
  std::uint32_t payload_size() const { return total_len - header_size(); }
};

/// Packets in non-decreasing timestamp order.
struct trace {
  std::vector<packet_record> packets;
};

/// CSV with header ts_us,ip_version,src,dst,sport,dport,total_len;
/// addresses in canonical text form.
void write_trace_csv(std::ostream& out, const trace& t);
trace load_trace_csv(std::istream& in);

/// Serializes a base-header IP packet (no v4 options, no v6 extension
/// headers).  payload.size() must equal record.payload_size().  The v4
/// header checksum is computed; protocol / next header is UDP.
std::vector<std::uint8_t> serialize_packet(const packet_record& record,
                                           std::span<const std::uint8_t> payload);

/// Standard ones'-complement sum over a v4 header; a valid header sums to
/// 0xffff.
std::uint16_t ones_complement_sum(std::span<const std::uint8_t> data);
bool verify_v4_header_checksum(std::span<const std::uint8_t> header);

/// Byte length of the packet starting at data[0] (from the version nibble
/// and the length field).  Throws bad_inner_header / truncated_payload.
std::size_t packet_length_at(std::span<const std::uint8_t> data);

/// Synthetic trace shape: per flow, bursts of closely spaced packets.
/// Sizes are drawn from the weighted buckets (defaults put most of the mass
/// at 1500-byte packets).  Fully determined by the seed.
struct trace_profile {
  std::uint32_t flows = 1;
  std::uint32_t bursts_per_flow = 1;
  std::uint32_t burst_len = 10;          // packets per burst
  std::uint64_t intra_gap_us = 50;       // spacing inside a burst
  std::uint64_t inter_gap_us = 100000;   // spacing between burst starts
  std::vector<std::pair<std::uint32_t, double>> sizes{
      {1500, 0.60}, {576, 0.25}, {80, 0.15}};
  std::uint64_t max_packets = 0;  // 0 = no cap
  int version = 4;
  std::uint64_t seed = 0;
};

trace generate_trace(const trace_profile& profile);

}  // namespace ipnet
