#include <doctest.h>

#include "ipnet/rng.hpp"
#include "ipnet/v6.hpp"

using namespace ipnet;

namespace {

v6_address addr(const char* text) { return v6_address::parse(text); }

}  // namespace

TEST_CASE("compressed forms equal their full forms") {
  CHECK(addr("1080::8:800:200C:417A") == addr("1080:0:0:0:8:800:200C:417A"));
  CHECK(addr("FF01::101") == addr("FF01:0:0:0:0:0:0:101"));
  CHECK(addr("::1") == addr("0:0:0:0:0:0:0:1"));
  CHECK(addr("::") == addr("0:0:0:0:0:0:0:0"));
}

TEST_CASE("canonical formatting") {
  CHECK(addr("FF01:0:0:0:0:0:0:101").to_string() == "ff01::101");
  CHECK(addr("0:0:0:0:0:0:0:1").to_string() == "::1");
  CHECK(addr("0:0:0:0:0:0:0:0").to_string() == "::");
  CHECK(addr("1080:0:0:0:8:800:200C:417A").to_string() ==
        "1080::8:800:200c:417a");
  // longest zero run wins; both legal input forms normalize the same way
  CHECK(addr("12AB:0000:0000:CD30:0000:0000:0000:0000").to_string() ==
        "12ab:0:0:cd30::");
  CHECK(addr("12AB::CD30:0:0:0:0").to_string() == "12ab:0:0:cd30::");
  CHECK(addr("12AB:0:0:CD30::").to_string() == "12ab:0:0:cd30::");
  // leftmost run on ties
  CHECK(addr("1:0:0:2:3:0:0:4").to_string() == "1::2:3:0:0:4");
  // single zero group is not compressed
  CHECK(addr("1:0:2:3:4:5:6:7").to_string() == "1:0:2:3:4:5:6:7");
  // compression at the front
  CHECK(addr("0:0:2:3:4:5:6:7").to_string() == "::2:3:4:5:6:7");
}

TEST_CASE("double compression is rejected") {
  CHECK_THROWS_AS(addr("12AB::CD30::"), malformed_address);
  CHECK_THROWS_AS(addr(":::"), malformed_address);
}

TEST_CASE("malformed literals carry a reason") {
  CHECK_THROWS_AS(addr("1:2:3"), malformed_address);             // group count
  CHECK_THROWS_AS(addr("1:2:3:4:5:6:7:8:9"), malformed_address); // group count
  CHECK_THROWS_AS(addr("1:2:3:4:5:6:7:8::"), malformed_address);
  CHECK_THROWS_AS(addr("g::1"), malformed_address);              // bad hex
  CHECK_THROWS_AS(addr("12345::1"), malformed_address);          // bad hex
  CHECK_THROWS_AS(addr("::13.1.68"), malformed_address);         // bad v4
  CHECK_THROWS_AS(addr("::1.2.3.999"), malformed_address);
  CHECK_THROWS_AS(addr("1.2.3.4"), malformed_address);
  CHECK_THROWS_AS(addr(""), malformed_address);
  CHECK_THROWS_AS(addr(":1::2"), malformed_address);
  CHECK_THROWS_AS(addr("1::2:"), malformed_address);
}

TEST_CASE("embedded IPv4 forms") {
  v6_address compat = addr("::13.1.68.3");
  CHECK(compat == addr("0:0:0:0:0:0:13.1.68.3"));
  CHECK(compat.group(6) == 0x0d01);
  CHECK(compat.group(7) == 0x4403);

  v6_address mapped = addr("::FFFF:129.144.52.38");
  CHECK(mapped == addr("0:0:0:0:0:FFFF:129.144.52.38"));
  CHECK(mapped.group(5) == 0xffff);
  CHECK(mapped.group(6) == 0x8190);
  CHECK(mapped.group(7) == 0x3426);

  // embedded text comes back only on request
  CHECK(mapped.to_string() == "::ffff:8190:3426");
  CHECK(mapped.to_string(v6_format::embedded_v4) == "::ffff:129.144.52.38");
  CHECK(compat.to_string(v6_format::embedded_v4) == "::13.1.68.3");
  // addresses outside the embedded ranges fall back to canonical
  CHECK(addr("1::2").to_string(v6_format::embedded_v4) == "1::2");
  CHECK(addr("::1").to_string(v6_format::embedded_v4) == "::1");
}

TEST_CASE("zone ids") {
  v6_address a = addr("fe80::1234%1");
  CHECK(a.zone() == "1");
  CHECK(a.to_string() == "fe80::1234%1");
  CHECK(addr("ff02::5678%5").to_string() == "ff02::5678%5");
  CHECK(addr("fe80::1234%ne0").zone() == "ne0");
  CHECK(addr("fe80::1234") != addr("fe80::1234%1"));  // byte-wise zone compare
  CHECK_THROWS_AS(addr("fe80::1%"), malformed_address);
}

TEST_CASE("canonical formatting is idempotent and round-trips") {
  rng r(31337);
  for (int i = 0; i < 3000; ++i) {
    v6_address::bytes_type bytes;
    for (auto& b : bytes) b = std::uint8_t(r.next_u64());
    // bias towards zero-heavy addresses so "::" paths get exercised
    if (r.next_below(2) == 0)
      for (int k = 0; k < 12; ++k) bytes[std::size_t(r.next_below(16))] = 0;
    v6_address a(bytes);
    std::string text = a.to_string();
    v6_address back = v6_address::parse(text);
    CHECK(back == a);
    CHECK(back.to_string() == text);
  }
}

TEST_CASE("classification covers every listed prefix") {
  CHECK(classify_v6(addr("::")) == v6_kind::unspecified);
  CHECK(classify_v6(addr("::1")) == v6_kind::loopback);
  CHECK(classify_v6(addr("fc00::1")) == v6_kind::unique_local_unicast);
  CHECK(classify_v6(addr("fd12:3456::1")) == v6_kind::unique_local_unicast);
  CHECK(classify_v6(addr("fdff:ffff::")) == v6_kind::unique_local_unicast);
  CHECK(classify_v6(addr("fe80::1234")) == v6_kind::link_local_unicast);
  CHECK(classify_v6(addr("febf:ffff::1")) == v6_kind::link_local_unicast);
  CHECK(classify_v6(addr("fec0::1")) == v6_kind::global_unicast);  // just past fe80::/10
  CHECK(classify_v6(addr("ff00::")) == v6_kind::multicast);
  CHECK(classify_v6(addr("ff02::5678")) == v6_kind::multicast);
  CHECK(classify_v6(addr("ffff:ffff::")) == v6_kind::multicast);
  CHECK(classify_v6(addr("2001:db8::1")) == v6_kind::documentation);
  CHECK(classify_v6(addr("2001:db8:ffff::")) == v6_kind::documentation);
  CHECK(classify_v6(addr("2001:db9::")) == v6_kind::global_unicast);
  CHECK(classify_v6(addr("2001:470::1")) == v6_kind::global_unicast);
  CHECK(classify_v6(addr("1080::8:800:200C:417A")) == v6_kind::global_unicast);
  // low-valued addresses near the unspecified/loopback singletons
  CHECK(classify_v6(addr("::2")) == v6_kind::global_unicast);
  CHECK(classify_v6(addr("::13.1.68.3")) == v6_kind::global_unicast);
}
