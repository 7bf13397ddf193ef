#include "ipnet/v6.hpp"

#include <cstdio>
#include <vector>

#include "ipnet/v4.hpp"

namespace ipnet {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Parses a colon-separated group list (no "::" inside).  A trailing
// dotted-decimal part is accepted as two groups when allow_v4_tail is set.
std::vector<std::uint16_t> parse_groups(std::string_view text,
                                        bool allow_v4_tail) {
  std::vector<std::uint16_t> groups;
  if (text.empty()) return groups;
  std::size_t pos = 0;
  while (true) {
    std::size_t colon = text.find(':', pos);
    std::string_view part = text.substr(
        pos, colon == std::string_view::npos ? std::string_view::npos
                                             : colon - pos);
    bool last = colon == std::string_view::npos;
    if (part.empty()) throw malformed_address("empty group in IPv6 address");
    if (last && allow_v4_tail && part.find('.') != std::string_view::npos) {
      std::uint32_t v4;
      try {
        v4 = v4_address::parse(part).value();
      } catch (const malformed_address&) {
        throw malformed_address("bad embedded IPv4 in IPv6 address");
      }
      groups.push_back(static_cast<std::uint16_t>(v4 >> 16));
      groups.push_back(static_cast<std::uint16_t>(v4 & 0xffff));
      return groups;
    }
    if (part.size() > 4)
      throw malformed_address("bad hex group in IPv6 address (too long)");
    std::uint32_t value = 0;
    for (char c : part) {
      int d = hex_digit(c);
      if (d < 0) throw malformed_address("bad hex group in IPv6 address");
      value = value << 4 | std::uint32_t(d);
    }
    groups.push_back(static_cast<std::uint16_t>(value));
    if (last) return groups;
    pos = colon + 1;
  }
}

}  // namespace

v6_address v6_address::parse(std::string_view text) {
  std::string zone;
  std::size_t percent = text.find('%');
  if (percent != std::string_view::npos) {
    zone = std::string(text.substr(percent + 1));
    if (zone.empty()) throw malformed_address("empty zone id");
    text = text.substr(0, percent);
  }
  if (text.empty()) throw malformed_address("empty IPv6 address");

  std::size_t gap = text.find("::");
  std::vector<std::uint16_t> head, tail;
  if (gap != std::string_view::npos) {
    if (text.find("::", gap + 1) != std::string_view::npos)
      throw malformed_address("\"::\" can only appear once in an address");
    head = parse_groups(text.substr(0, gap), false);
    tail = parse_groups(text.substr(gap + 2), true);
    if (head.size() + tail.size() > 7)
      throw malformed_address("too many groups around \"::\"");
  } else {
    head = parse_groups(text, true);
    if (head.size() != 8)
      throw malformed_address("IPv6 address needs 8 groups, got " +
                              std::to_string(head.size()));
  }

  bytes_type bytes{};
  for (std::size_t i = 0; i < head.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(head[i] >> 8);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(head[i]);
  }
  for (std::size_t i = 0; i < tail.size(); ++i) {
    std::size_t g = 8 - tail.size() + i;
    bytes[2 * g] = static_cast<std::uint8_t>(tail[i] >> 8);
    bytes[2 * g + 1] = static_cast<std::uint8_t>(tail[i]);
  }
  return v6_address(bytes, std::move(zone));
}

std::string v6_address::to_string(v6_format format) const {
  std::string out;
  if (format == v6_format::embedded_v4) {
    bool high80_zero = true;
    for (int i = 0; i < 10; ++i)
      if (bytes_[std::size_t(i)] != 0) high80_zero = false;
    std::uint16_t g5 = group(5);
    std::uint32_t low32 = std::uint32_t(group(6)) << 16 | group(7);
    bool mapped = high80_zero && g5 == 0xffff;
    bool compatible = high80_zero && g5 == 0 && low32 > 1;
    if (mapped || compatible) {
      out = mapped ? "::ffff:" : "::";
      out += v4_address(low32).to_string();
      if (has_zone()) out += '%' + zone_;
      return out;
    }
  }

  // longest run of >= 2 zero groups, leftmost on ties
  int best_start = -1, best_len = 0;
  for (int i = 0; i < 8;) {
    if (group(i) != 0) {
      ++i;
      continue;
    }
    int j = i;
    while (j < 8 && group(j) == 0) ++j;
    if (j - i >= 2 && j - i > best_len) {
      best_start = i;
      best_len = j - i;
    }
    i = j;
  }

  char buf[8];
  for (int i = 0; i < 8;) {
    if (i == best_start) {
      out += "::";
      i += best_len;
      continue;
    }
    if (!out.empty() && out.back() != ':') out += ':';
    std::snprintf(buf, sizeof buf, "%x", group(i));
    out += buf;
    ++i;
  }
  if (out.empty()) out = "::";
  if (has_zone()) out += '%' + zone_;
  return out;
}

std::string_view to_string(v6_kind k) {
  switch (k) {
    case v6_kind::unspecified: return "Unspecified";
    case v6_kind::loopback: return "Loopback";
    case v6_kind::unique_local_unicast: return "UniqueLocalUnicast";
    case v6_kind::link_local_unicast: return "LinkLocalUnicast";
    case v6_kind::multicast: return "Multicast";
    case v6_kind::documentation: return "Documentation";
    case v6_kind::global_unicast: return "GlobalUnicast";
  }
  return "?";
}

v6_kind classify_v6(const v6_address& a) {
  const auto& b = a.bytes();
  bool all_zero = true;
  for (int i = 0; i < 15; ++i)
    if (b[std::size_t(i)] != 0) all_zero = false;
  if (all_zero && b[15] == 0) return v6_kind::unspecified;
  if (all_zero && b[15] == 1) return v6_kind::loopback;
  if (a.group(0) == 0x2001 && a.group(1) == 0x0db8)
    return v6_kind::documentation;                       // 2001:db8::/32
  if ((b[0] & 0xfe) == 0xfc) return v6_kind::unique_local_unicast;  // fc00::/7
  if (b[0] == 0xfe && (b[1] & 0xc0) == 0x80)
    return v6_kind::link_local_unicast;                  // fe80::/10
  if (b[0] == 0xff) return v6_kind::multicast;           // ff00::/8
  return v6_kind::global_unicast;
}

}  // namespace ipnet
