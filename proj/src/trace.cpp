#include "ipnet/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "ipnet/rng.hpp"

namespace ipnet {

std::string to_string(const address_any& addr) {
  if (std::holds_alternative<v4_address>(addr))
    return std::get<v4_address>(addr).to_string();
  return std::get<v6_address>(addr).to_string();
}

address_any parse_address_any(std::string_view text, int version) {
  if (version == 4) return v4_address::parse(text);
  if (version == 6) return v6_address::parse(text);
  throw malformed_address("ip_version must be 4 or 6");
}

int version_of(const address_any& addr) {
  return std::holds_alternative<v4_address>(addr) ? 4 : 6;
}

void write_trace_csv(std::ostream& out, const trace& t) {
  out << "ts_us,ip_version,src,dst,sport,dport,total_len\n";
  for (const auto& p : t.packets)
    out << p.ts_us << ',' << p.version() << ',' << to_string(p.src) << ','
        << to_string(p.dst) << ',' << p.sport << ',' << p.dport << ','
        << p.total_len << '\n';
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    parts.push_back(line.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) return parts;
    pos = comma + 1;
  }
}

}  // namespace

trace load_trace_csv(std::istream& in) {
  trace t;
  std::string line;
  int lineno = 0;
  std::uint64_t last_ts = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("ts_us,", 0) == 0) continue;
    std::vector<std::string> parts = split_line(line);
    if (parts.size() != 7)
      throw error("trace line " + std::to_string(lineno) +
                  ": expected 7 fields");
    try {
      packet_record p;
      p.ts_us = std::stoull(parts[0]);
      int version = std::stoi(parts[1]);
      p.src = parse_address_any(parts[2], version);
      p.dst = parse_address_any(parts[3], version);
      p.sport = std::uint16_t(std::stoul(parts[4]));
      p.dport = std::uint16_t(std::stoul(parts[5]));
      p.total_len = std::uint32_t(std::stoul(parts[6]));
      if (p.total_len < p.header_size())
        throw error("total_len below header size");
      if (version == 4 && p.total_len > 65535)
        throw error("v4 total_len above 65535");
      if (p.ts_us < last_ts) throw error("timestamps must be non-decreasing");
      last_ts = p.ts_us;
      t.packets.push_back(std::move(p));
    } catch (const error&) {
      throw;
    } catch (const std::exception&) {
      throw error("trace line " + std::to_string(lineno) + ": bad field");
    }
  }
  return t;
}

namespace {

void put16(std::vector<std::uint8_t>& out, std::size_t at, std::uint16_t v) {
  out[at] = std::uint8_t(v >> 8);
  out[at + 1] = std::uint8_t(v);
}

}  // namespace

std::uint16_t ones_complement_sum(std::span<const std::uint8_t> data) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < data.size(); i += 2)
    sum += std::uint32_t(data[i]) << 8 | data[i + 1];
  if (data.size() % 2) sum += std::uint32_t(data[data.size() - 1]) << 8;
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return std::uint16_t(sum);
}

bool verify_v4_header_checksum(std::span<const std::uint8_t> header) {
  return ones_complement_sum(header) == 0xffff;
}

std::vector<std::uint8_t> serialize_packet(const packet_record& record,
                                           std::span<const std::uint8_t> payload) {
  if (payload.size() != record.payload_size())
    throw error("payload size does not match total_len");
  if (record.total_len > (record.version() == 4 ? 65535u : 65535u + 40u))
    throw error("total_len does not fit the length field");
  std::vector<std::uint8_t> out;
  if (record.version() == 4) {
    out.resize(20);
    out[0] = 0x45;  // version 4, 5-word header
    put16(out, 2, std::uint16_t(record.total_len));
    out[8] = 64;    // ttl
    out[9] = 17;    // udp
    std::uint32_t src = std::get<v4_address>(record.src).value();
    std::uint32_t dst = std::get<v4_address>(record.dst).value();
    for (int i = 0; i < 4; ++i) {
      out[std::size_t(12 + i)] = std::uint8_t(src >> (24 - 8 * i));
      out[std::size_t(16 + i)] = std::uint8_t(dst >> (24 - 8 * i));
    }
    put16(out, 10, std::uint16_t(~ones_complement_sum(out)));
  } else {
    out.resize(40);
    out[0] = 0x60;
    put16(out, 4, std::uint16_t(payload.size()));
    out[6] = 17;  // udp
    out[7] = 64;  // hop limit
    const auto& src = std::get<v6_address>(record.src).bytes();
    const auto& dst = std::get<v6_address>(record.dst).bytes();
    std::copy(src.begin(), src.end(), out.begin() + 8);
    std::copy(dst.begin(), dst.end(), out.begin() + 24);
  }
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::size_t packet_length_at(std::span<const std::uint8_t> data) {
  if (data.empty()) throw truncated_payload("no bytes for a packet header");
  int version = data[0] >> 4;
  if (version == 4) {
    if (data.size() < 20)
      throw truncated_payload("payload ends inside a v4 header");
    if ((data[0] & 0x0f) != 5)
      throw bad_inner_header("v4 packets with options are not supported");
    std::size_t len = std::size_t(data[2]) << 8 | data[3];
    if (len < 20) throw bad_inner_header("v4 total length below header size");
    if (len > data.size())
      throw truncated_payload("v4 packet extends past the payload");
    return len;
  }
  if (version == 6) {
    if (data.size() < 40)
      throw truncated_payload("payload ends inside a v6 header");
    std::size_t len = 40 + (std::size_t(data[4]) << 8 | data[5]);
    if (len > data.size())
      throw truncated_payload("v6 packet extends past the payload");
    return len;
  }
  throw bad_inner_header("version nibble is " + std::to_string(version));
}

trace generate_trace(const trace_profile& profile) {
  if (profile.sizes.empty())
    throw std::invalid_argument("trace profile needs at least one size bucket");
  double total_weight = 0;
  for (const auto& [size, weight] : profile.sizes) total_weight += weight;
  if (total_weight <= 0)
    throw std::invalid_argument("size bucket weights must be positive");

  trace t;
  std::uint32_t min_len = profile.version == 4 ? 20 : 40;
  std::uint32_t max_len = profile.version == 4 ? 65535 : 65535 + 40;
  auto draw_size = [&](rng& flow_rng) {
    double x = flow_rng.next_double() * total_weight;
    for (const auto& [size, weight] : profile.sizes) {
      x -= weight;
      if (x < 0) return size;
    }
    return profile.sizes.back().first;
  };

  for (std::uint32_t f = 0; f < profile.flows; ++f) {
    rng flow_rng(substream_seed(profile.seed, f));
    address_any src, dst;
    if (profile.version == 4) {
      src = v4_address(0x0a000000u | f);             // 10.0.x.x
      dst = v4_address(0xc0a80000u | (f & 0xffff));  // 192.168.x.x
    } else {
      v6_address::bytes_type s{}, d{};
      s[0] = 0x20; s[1] = 0x01; s[2] = 0x0d; s[3] = 0xb8; s[4] = 0x00; s[5] = 0x01;
      d[0] = 0x20; d[1] = 0x01; d[2] = 0x0d; d[3] = 0xb8; d[4] = 0x00; d[5] = 0x02;
      for (int i = 0; i < 4; ++i) {
        s[std::size_t(12 + i)] = std::uint8_t(f >> (24 - 8 * i));
        d[std::size_t(12 + i)] = std::uint8_t(f >> (24 - 8 * i));
      }
      src = v6_address(s);
      dst = v6_address(d);
    }
    for (std::uint32_t b = 0; b < profile.bursts_per_flow; ++b) {
      std::uint64_t burst_start = std::uint64_t(b) * profile.inter_gap_us;
      for (std::uint32_t k = 0; k < profile.burst_len; ++k) {
        packet_record p;
        p.ts_us = burst_start + std::uint64_t(k) * profile.intra_gap_us;
        p.src = src;
        p.dst = dst;
        p.sport = std::uint16_t(40000 + f);
        p.dport = 8000;
        p.total_len = std::clamp(draw_size(flow_rng), min_len, max_len);
        t.packets.push_back(std::move(p));
      }
    }
  }
  std::stable_sort(t.packets.begin(), t.packets.end(),
                   [](const packet_record& a, const packet_record& b) {
                     return a.ts_us < b.ts_us;
                   });
  if (profile.max_packets && t.packets.size() > profile.max_packets)
    t.packets.resize(profile.max_packets);
  return t;
}

}  // namespace ipnet
