#include "ipnet/subnet_plan.hpp"

#include <algorithm>
#include <array>
#include <istream>

namespace ipnet {

int best_fit_prefix(std::uint64_t required_hosts) {
  if (required_hosts == 0)
    throw std::invalid_argument("requirement must be at least one host");
  if (required_hosts > usable_hosts(0))
    throw infeasible_error("requirement exceeds the whole IPv4 space",
                           required_hosts, usable_hosts(0));
  for (int len = 30; len >= 0; --len)
    if (usable_hosts(len) >= required_hosts) return len;
  throw infeasible_error("unreachable", required_hosts, usable_hosts(0));
}

feasibility_report check_feasibility(const std::vector<subnet_requirement>& reqs,
                                     int base_prefix) {
  feasibility_report report;
  report.capacity = std::uint64_t(1) << (32 - base_prefix);
  for (const auto& req : reqs)
    report.need += usable_hosts(best_fit_prefix(req.required_hosts)) + 2;
  report.feasible = report.need <= report.capacity;
  report.deficit = report.feasible ? 0 : report.need - report.capacity;
  return report;
}

plan_table::plan_table(v4_address base, int base_prefix)
    : base_(base), base_prefix_(base_prefix), next_free_(base) {
  v4_mask mask(base_prefix);
  if ((base.value() & mask.host_mask()) != 0)
    throw invalid_base_error("base address " + base.to_string() +
                             " has nonzero host bits for /" +
                             std::to_string(base_prefix));
}

void plan_table::append(const subnet_requirement& req) {
  plan_row row;
  row.name = req.name;
  row.required_hosts = req.required_hosts;
  row.prefix_len = best_fit_prefix(req.required_hosts);
  row.awarded_hosts = usable_hosts(row.prefix_len);

  std::uint64_t block = row.block_size();
  std::uint64_t start = next_free_.value();
  if (start % block != 0)
    throw alignment_error("next free address " + next_free_.to_string() +
                          " is not aligned to a /" +
                          std::to_string(row.prefix_len) + " block");
  std::uint64_t base_end = std::uint64_t(base_.value()) +
                           (std::uint64_t(1) << (32 - base_prefix_));
  if (start + block > base_end)
    throw infeasible_error("block for \"" + req.name +
                               "\" does not fit in the base network",
                           start + block - base_.value(),
                           base_end - base_.value());

  row.network = v4_address(static_cast<std::uint32_t>(start));
  row.first_host = v4_address(static_cast<std::uint32_t>(start + 1));
  row.last_host =
      v4_address(static_cast<std::uint32_t>(start + row.awarded_hosts));
  row.broadcast =
      v4_address(static_cast<std::uint32_t>(start + row.awarded_hosts + 1));
  next_free_ = v4_address(static_cast<std::uint32_t>(start + block));
  rows_.push_back(std::move(row));
}

plan_table build_plan(v4_address base, int base_prefix,
                      std::vector<subnet_requirement> reqs) {
  plan_table plan(base, base_prefix);
  feasibility_report report = check_feasibility(reqs, base_prefix);
  if (!report.feasible)
    throw infeasible_error(
        "requirements need " + std::to_string(report.need) +
            " addresses, base /" + std::to_string(base_prefix) + " has " +
            std::to_string(report.capacity),
        report.need, report.capacity);
  std::stable_sort(reqs.begin(), reqs.end(),
                   [](const subnet_requirement& a, const subnet_requirement& b) {
                     return a.required_hosts > b.required_hosts;
                   });
  for (const auto& req : reqs) plan.append(req);
  return plan;
}

std::vector<std::pair<v4_address, int>> magic_plan(v4_address base,
                                                   int base_prefix,
                                                   std::uint32_t n_subnets,
                                                   std::uint64_t hosts_each) {
  if (n_subnets == 0)
    throw std::invalid_argument("need at least one subnet");
  [[maybe_unused]] plan_table guard(base, base_prefix);  // validates host bits
  int prefix = best_fit_prefix(hosts_each);
  std::uint64_t slice = std::uint64_t(1) << (32 - prefix);
  std::uint64_t capacity = std::uint64_t(1) << (32 - base_prefix);
  if (slice * n_subnets > capacity)
    throw infeasible_error(std::to_string(n_subnets) + " subnets of " +
                               std::to_string(hosts_each) +
                               " hosts do not fit in the base network",
                           slice * n_subnets, capacity);
  std::vector<std::pair<v4_address, int>> slices;
  for (std::uint32_t i = 0; i < n_subnets; ++i)
    slices.emplace_back(
        v4_address(static_cast<std::uint32_t>(base.value() + i * slice)),
        prefix);
  return slices;
}

std::string render_plan(const plan_table& plan, plan_format format) {
  static const char* headers[8] = {"Ref",   "#Hosts",   "NM",        "#AA",
                                   "NAddr", "1st addr", "Last addr", "Bdcast"};
  std::vector<std::array<std::string, 8>> cells;
  for (const auto& row : plan.rows())
    cells.push_back({row.name, std::to_string(row.required_hosts),
                     "/" + std::to_string(row.prefix_len),
                     std::to_string(row.awarded_hosts),
                     row.network.to_string(), row.first_host.to_string(),
                     row.last_host.to_string(), row.broadcast.to_string()});

  std::string out;
  if (format == plan_format::csv) {
    for (int c = 0; c < 8; ++c) {
      if (c) out += ',';
      out += headers[c];
    }
    out += '\n';
    for (const auto& row : cells) {
      for (int c = 0; c < 8; ++c) {
        if (c) out += ',';
        out += row[std::size_t(c)];
      }
      out += '\n';
    }
    return out;
  }

  std::array<std::size_t, 8> width{};
  for (int c = 0; c < 8; ++c) width[std::size_t(c)] = std::string(headers[c]).size();
  for (const auto& row : cells)
    for (int c = 0; c < 8; ++c)
      width[std::size_t(c)] = std::max(width[std::size_t(c)], row[std::size_t(c)].size());

  out = "Base network address: " + plan.base().to_string() + "/" +
        std::to_string(plan.base_prefix()) + "\n";
  auto emit = [&](const std::array<std::string, 8>& row) {
    for (int c = 0; c < 8; ++c) {
      std::string cell = row[std::size_t(c)];
      cell.resize(width[std::size_t(c)], ' ');
      out += cell;
      out += c == 7 ? "" : "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  std::array<std::string, 8> head_row;
  for (int c = 0; c < 8; ++c) head_row[std::size_t(c)] = headers[c];
  emit(head_row);
  for (const auto& row : cells) emit(row);
  out += "Next free address: " + plan.next_free().to_string() + "\n";
  return out;
}

std::vector<subnet_requirement> load_requirements(std::istream& in) {
  std::vector<subnet_requirement> reqs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line.erase(0, start);
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw error("requirements line " + std::to_string(lineno) +
                  ": expected name,required_hosts");
    subnet_requirement req;
    req.name = line.substr(0, comma);
    std::string count = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      req.required_hosts = std::stoull(count, &used);
      if (used != count.size()) throw std::invalid_argument(count);
    } catch (const std::exception&) {
      throw error("requirements line " + std::to_string(lineno) +
                  ": bad host count \"" + count + "\"");
    }
    if (req.required_hosts == 0)
      throw error("requirements line " + std::to_string(lineno) +
                  ": required_hosts must be at least 1");
    reqs.push_back(std::move(req));
  }
  return reqs;
}

}  // namespace ipnet
