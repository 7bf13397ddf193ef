#pragma once

#include <stdexcept>
#include <string>

namespace ipnet {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Text could not be parsed as an IPv4/IPv6 address, mask, or prefix.
class malformed_address : public error {
 public:
  explicit malformed_address(const std::string& what) : error(what) {}
};

/// An addressing requirement cannot be satisfied by the available block.
class infeasible_error : public error {
 public:
  infeasible_error(const std::string& what, std::uint64_t need,
                   std::uint64_t capacity)
      : error(what), need(need), capacity(capacity) {}

  std::uint64_t need = 0;
  std::uint64_t capacity = 0;
  std::uint64_t deficit() const { return need > capacity ? need - capacity : 0; }
};

/// Planner base address has nonzero host bits.
class invalid_base_error : public error {
 public:
  explicit invalid_base_error(const std::string& what) : error(what) {}
};

/// Appending a block that the current free pointer is not aligned for.
class alignment_error : public error {
 public:
  explicit alignment_error(const std::string& what) : error(what) {}
};

/// A single packet exceeds the burst size bound.
class packet_too_large : public error {
 public:
  explicit packet_too_large(const std::string& what) : error(what) {}
};

/// Carrier payload does not fit the carrier's length field.
class overflow_error : public error {
 public:
  explicit overflow_error(const std::string& what) : error(what) {}
};

/// Carrier payload ends in the middle of an inner packet.
class truncated_payload : public error {
 public:
  explicit truncated_payload(const std::string& what) : error(what) {}
};

/// Inner packet bytes are not a well-formed IPv4/IPv6 packet.
class bad_inner_header : public error {
 public:
  explicit bad_inner_header(const std::string& what) : error(what) {}
};

}  // namespace ipnet
