#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "ipnet/errors.hpp"

namespace ipnet {

enum class v6_format {
  canonical,    ///< lowercase, leading zeros dropped, longest zero run as ::
  embedded_v4,  ///< ::a.b.c.d / ::ffff:a.b.c.d when applicable, else canonical
};

/// IPv6 address value type: 128 bits plus an optional opaque zone id
/// (the text after '%').  The zone is stored verbatim and compared
/// byte-wise; no interface-name resolution is attempted.
class v6_address {
 public:
  using bytes_type = std::array<std::uint8_t, 16>;

  v6_address() = default;
  explicit v6_address(const bytes_type& bytes, std::string zone = {})
      : bytes_(bytes), zone_(std::move(zone)) {}

  /// Parses full, compressed ("::"), or IPv4-embedded literals, with an
  /// optional "%zone" suffix.  Throws malformed_address with the reason
  /// (double compression, group count, bad hex, bad embedded IPv4).
  static v6_address parse(std::string_view text);

  /// Canonical text per the single-"::" rules: at most one "::", covering
  /// the longest run of two or more zero groups, leftmost run on ties.
  /// Formatting an already-canonical string's parse yields the same string.
  std::string to_string(v6_format format = v6_format::canonical) const;

  const bytes_type& bytes() const { return bytes_; }
  const std::string& zone() const { return zone_; }
  bool has_zone() const { return !zone_.empty(); }

  std::uint16_t group(int i) const {
    return static_cast<std::uint16_t>(bytes_[std::size_t(2 * i)] << 8 |
                                      bytes_[std::size_t(2 * i + 1)]);
  }

  friend bool operator==(const v6_address&, const v6_address&) = default;

 private:
  bytes_type bytes_{};
  std::string zone_;
};

enum class v6_kind {
  unspecified,
  loopback,
  unique_local_unicast,
  link_local_unicast,
  multicast,
  documentation,
  global_unicast,
};

std::string_view to_string(v6_kind k);

/// Longest-prefix match over ::/128, ::1/128, fc00::/7, fe80::/10,
/// ff00::/8 and the documentation range 2001:db8::/32; everything else is
/// global unicast.
v6_kind classify_v6(const v6_address& a);

}  // namespace ipnet
