#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipnet/errors.hpp"

namespace ipnet {

/// IPv4 address value type, host byte order internally.
class v4_address {
 public:
  constexpr v4_address() = default;
  explicit constexpr v4_address(std::uint32_t value) : value_(value) {}

  /// Parses dotted-decimal text.  Throws malformed_address naming the
  /// offending component (0-based).  Leading zeros are accepted and
  /// normalized away on output.
  static v4_address parse(std::string_view text);

  std::string to_string() const;

  constexpr std::uint32_t value() const { return value_; }
  constexpr std::uint8_t octet(int i) const {
    return static_cast<std::uint8_t>(value_ >> (24 - 8 * i));
  }

  friend constexpr auto operator<=>(v4_address, v4_address) = default;

 private:
  std::uint32_t value_ = 0;
};

/// Contiguous-ones network mask ("slash notation").
class v4_mask {
 public:
  explicit v4_mask(int prefix_len);

  /// Parses either "/24"-style prefix text or a dotted mask such as
  /// 255.255.255.240.  Dotted masks must have contiguous leading ones.
  static v4_mask parse(std::string_view text);

  int prefix_len() const { return prefix_len_; }
  std::uint32_t value() const { return value_; }
  std::uint32_t host_mask() const { return ~value_; }

  friend auto operator<=>(const v4_mask&, const v4_mask&) = default;

 private:
  int prefix_len_ = 0;
  std::uint32_t value_ = 0;
};

enum class address_class { a, b, c, d, e };
enum class v4_scope { reserved, public_block, private_block, local_loopback, multicast };

std::string_view to_string(address_class c);
std::string_view to_string(v4_scope s);

/// Classful class from the leading bits of the first octet.
address_class classify_class(v4_address a);

/// Special ranges take precedence over class defaults: 0/8 and 240/4 are
/// reserved, 127/8 is loopback, 10/8 + 172.16/12 + 192.168/16 are private,
/// 224/4 is multicast; everything else is public.
v4_scope classify_scope(v4_address a);

/// Bitwise AND of address and mask ("ANDing").
v4_address network_address(v4_address a, const v4_mask& m);

/// Network address with all host bits set.
v4_address broadcast_address(v4_address a, const v4_mask& m);

/// 2^(32-prefix_len) - 2, floored at 0 for /31 and /32.
std::uint64_t usable_hosts(int prefix_len);

/// 256 minus the partially-masked octet's mask value, i.e. the stride
/// between consecutive equal-size subnet starts within that octet.
/// Requires a prefix that leaves one octet partially masked (len % 8 != 0).
int magic_number(int prefix_len);

/// Start-value sequence {0, m, 2m, ...} within the partially-masked octet.
std::vector<int> magic_sequence(int prefix_len);

/// Parses "a.b.c.d/len".  Throws malformed_address.
std::pair<v4_address, int> parse_cidr(std::string_view text);

}  // namespace ipnet
