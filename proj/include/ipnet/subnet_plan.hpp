#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipnet/v4.hpp"

namespace ipnet {

struct subnet_requirement {
  std::string name;
  std::uint64_t required_hosts = 0;  // >= 1
};

/// One line of the eight-column addressing table: Ref, #Hosts, NM, #AA,
/// NAddr, 1st addr, Last addr, Bdcast.
struct plan_row {
  std::string name;
  std::uint64_t required_hosts = 0;
  int prefix_len = 0;
  std::uint64_t awarded_hosts = 0;  // usable_hosts(prefix_len)
  v4_address network;
  v4_address first_host;   // network + 1
  v4_address last_host;    // network + awarded
  v4_address broadcast;    // last + 1
  std::uint64_t block_size() const { return awarded_hosts + 2; }
};

struct feasibility_report {
  bool feasible = true;
  std::uint64_t need = 0;      // sum of awarded_hosts + 2 over best fits
  std::uint64_t capacity = 0;  // 2^(32 - base_prefix)
  std::uint64_t deficit = 0;   // need - capacity when infeasible
};

/// Largest prefix length in 0..=30 whose usable host count covers the
/// requirement.  Throws infeasible_error when no /0 block suffices.
int best_fit_prefix(std::uint64_t required_hosts);

/// Sums best-fit block sizes (awarded hosts plus the network and broadcast
/// address of each subnet) against the base block.
feasibility_report check_feasibility(const std::vector<subnet_requirement>& reqs,
                                     int base_prefix);

/// The addressing table: rows allocated back to back in descending order of
/// required hosts (stable for equal requirements), starting at the base
/// network address.
class plan_table {
 public:
  plan_table(v4_address base, int base_prefix);

  /// Allocates the next row at next_free.  Throws alignment_error when
  /// next_free is not aligned to the row's block size, infeasible_error
  /// when the block does not fit in the base.
  void append(const subnet_requirement& req);

  v4_address base() const { return base_; }
  int base_prefix() const { return base_prefix_; }
  const std::vector<plan_row>& rows() const { return rows_; }
  v4_address next_free() const { return next_free_; }

 private:
  v4_address base_;
  int base_prefix_;
  std::vector<plan_row> rows_;
  v4_address next_free_;
};

/// Builds the full table: feasibility check, descending stable sort, then
/// row-by-row allocation.  Throws invalid_base_error when the base has
/// nonzero host bits, infeasible_error with the deficit otherwise.
plan_table build_plan(v4_address base, int base_prefix,
                      std::vector<subnet_requirement> reqs);

/// Equal-size slicing per the Magic Number procedure: best-fit prefix for
/// hosts_each, start addresses stepping by the slice size.
std::vector<std::pair<v4_address, int>> magic_plan(v4_address base,
                                                   int base_prefix,
                                                   std::uint32_t n_subnets,
                                                   std::uint64_t hosts_each);

enum class plan_format { csv, pretty };

/// Deterministic, byte-stable rendering.  CSV header carries the eight
/// column names; pretty mode prints the base address line and a fixed-width
/// table.
std::string render_plan(const plan_table& plan, plan_format format);

/// Reads "name,required_hosts" lines; blank lines and '#' comments allowed.
std::vector<subnet_requirement> load_requirements(std::istream& in);

}  // namespace ipnet
