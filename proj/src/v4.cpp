#include "ipnet/v4.hpp"

#include <array>

namespace ipnet {

v4_address v4_address::parse(std::string_view text) {
  std::array<std::uint32_t, 4> octets{};
  int component = 0;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = text.find('.', pos);
    std::string_view part = text.substr(pos, dot == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : dot - pos);
    if (component > 3)
      throw malformed_address("too many components in IPv4 address");
    if (part.empty())
      throw malformed_address("empty component " + std::to_string(component) +
                              " in IPv4 address");
    if (part.size() > 3)
      throw malformed_address("component " + std::to_string(component) +
                              " too long in IPv4 address");
    std::uint32_t value = 0;
    for (char c : part) {
      if (c < '0' || c > '9')
        throw malformed_address("component " + std::to_string(component) +
                                " is not decimal in IPv4 address");
      value = value * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (value > 255)
      throw malformed_address("component " + std::to_string(component) +
                              " out of range in IPv4 address");
    octets[static_cast<std::size_t>(component)] = value;
    ++component;
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  if (component != 4)
    throw malformed_address("IPv4 address needs 4 components, got " +
                            std::to_string(component));
  return v4_address(octets[0] << 24 | octets[1] << 16 | octets[2] << 8 |
                    octets[3]);
}

std::string v4_address::to_string() const {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i) out += '.';
    out += std::to_string(octet(i));
  }
  return out;
}

v4_mask::v4_mask(int prefix_len) : prefix_len_(prefix_len) {
  if (prefix_len < 0 || prefix_len > 32)
    throw malformed_address("prefix length " + std::to_string(prefix_len) +
                            " out of range");
  value_ = prefix_len == 0 ? 0u : ~std::uint32_t(0) << (32 - prefix_len);
}

v4_mask v4_mask::parse(std::string_view text) {
  if (!text.empty() && text.front() == '/') text.remove_prefix(1);
  if (text.find('.') == std::string_view::npos) {
    int len = 0;
    if (text.empty() || text.size() > 2)
      throw malformed_address("bad prefix length");
    for (char c : text) {
      if (c < '0' || c > '9') throw malformed_address("bad prefix length");
      len = len * 10 + (c - '0');
    }
    return v4_mask(len);
  }
  std::uint32_t value = v4_address::parse(text).value();
  // contiguous ones followed by zeros, else not a slash-notation mask
  std::uint32_t inverted = ~value;
  if ((inverted & (inverted + 1)) != 0)
    throw malformed_address("mask bits are not contiguous");
  int len = 0;
  for (std::uint32_t v = value; v & 0x80000000u; v <<= 1) ++len;
  return v4_mask(len);
}

std::string_view to_string(address_class c) {
  switch (c) {
    case address_class::a: return "A";
    case address_class::b: return "B";
    case address_class::c: return "C";
    case address_class::d: return "D";
    case address_class::e: return "E";
  }
  return "?";
}

std::string_view to_string(v4_scope s) {
  switch (s) {
    case v4_scope::reserved: return "Reserved";
    case v4_scope::public_block: return "Public";
    case v4_scope::private_block: return "Private";
    case v4_scope::local_loopback: return "LocalLoopback";
    case v4_scope::multicast: return "Multicast";
  }
  return "?";
}

address_class classify_class(v4_address a) {
  std::uint8_t first = a.octet(0);
  if ((first & 0x80) == 0x00) return address_class::a;
  if ((first & 0xc0) == 0x80) return address_class::b;
  if ((first & 0xe0) == 0xc0) return address_class::c;
  if ((first & 0xf0) == 0xe0) return address_class::d;
  return address_class::e;
}

v4_scope classify_scope(v4_address a) {
  std::uint32_t v = a.value();
  auto in = [v](std::uint32_t net, int len) {
    return (v & v4_mask(len).value()) == net;
  };
  if (in(0x00000000u, 8)) return v4_scope::reserved;         // 0.0.0.0/8
  if (in(0x7f000000u, 8)) return v4_scope::local_loopback;   // 127.0.0.0/8
  if (in(0x0a000000u, 8)) return v4_scope::private_block;    // 10.0.0.0/8
  if (in(0xac100000u, 12)) return v4_scope::private_block;   // 172.16.0.0/12
  if (in(0xc0a80000u, 16)) return v4_scope::private_block;   // 192.168.0.0/16
  if (in(0xe0000000u, 4)) return v4_scope::multicast;        // 224.0.0.0/4
  if (in(0xf0000000u, 4)) return v4_scope::reserved;         // 240/4 incl. 255.255.255.255
  return v4_scope::public_block;
}

v4_address network_address(v4_address a, const v4_mask& m) {
  return v4_address(a.value() & m.value());
}

v4_address broadcast_address(v4_address a, const v4_mask& m) {
  return v4_address(network_address(a, m).value() | m.host_mask());
}

std::uint64_t usable_hosts(int prefix_len) {
  if (prefix_len < 0 || prefix_len > 32)
    throw malformed_address("prefix length out of range");
  if (prefix_len >= 31) return 0;
  return (std::uint64_t(1) << (32 - prefix_len)) - 2;
}

int magic_number(int prefix_len) {
  if (prefix_len <= 0 || prefix_len >= 32 || prefix_len % 8 == 0)
    throw std::invalid_argument(
        "magic number needs a partially-masked octet (prefix not a multiple "
        "of 8)");
  int bits_in_octet = prefix_len % 8;
  return 256 >> bits_in_octet;
}

std::vector<int> magic_sequence(int prefix_len) {
  int magic = magic_number(prefix_len);
  std::vector<int> starts;
  for (int s = 0; s < 256; s += magic) starts.push_back(s);
  return starts;
}

std::pair<v4_address, int> parse_cidr(std::string_view text) {
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos)
    throw malformed_address("expected address/prefix");
  v4_address addr = v4_address::parse(text.substr(0, slash));
  v4_mask mask = v4_mask::parse(text.substr(slash));
  return {addr, mask.prefix_len()};
}

}  // namespace ipnet
