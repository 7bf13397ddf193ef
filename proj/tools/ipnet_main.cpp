// ipnet -- address tools, VLSM planner, keyed-transport simulator, and
// packet-aggregation analyses behind one deterministic command line.
//
// Exit codes: 0 success, 1 input error, 2 infeasible / constraint failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ipnet/aggregate.hpp"
#include "ipnet/channel.hpp"
#include "ipnet/errors.hpp"
#include "ipnet/subnet_plan.hpp"
#include "ipnet/trace.hpp"
#include "ipnet/v4.hpp"
#include "ipnet/v6.hpp"

namespace {

struct addr_options {
  std::string classify_target;
  std::string net_target;
  std::string canon_target;
  bool embed_v4 = false;
};

int run_addr_classify(const std::string& target) {
  if (target.find(':') != std::string::npos) {
    ipnet::v6_address a = ipnet::v6_address::parse(target);
    std::cout << ipnet::to_string(ipnet::classify_v6(a)) << "\n";
  } else {
    ipnet::v4_address a = ipnet::v4_address::parse(target);
    std::cout << "Class " << ipnet::to_string(ipnet::classify_class(a)) << ", "
              << ipnet::to_string(ipnet::classify_scope(a)) << "\n";
  }
  return 0;
}

int run_addr_net(const std::string& target) {
  auto [addr, prefix] = ipnet::parse_cidr(target);
  ipnet::v4_mask mask(prefix);
  std::cout << "network " << ipnet::network_address(addr, mask).to_string()
            << "\n"
            << "broadcast " << ipnet::broadcast_address(addr, mask).to_string()
            << "\n"
            << "usable " << ipnet::usable_hosts(prefix) << "\n";
  return 0;
}

int run_addr_canon(const std::string& target, bool embed_v4) {
  ipnet::v6_address a = ipnet::v6_address::parse(target);
  std::cout << a.to_string(embed_v4 ? ipnet::v6_format::embedded_v4
                                    : ipnet::v6_format::canonical)
            << "\n";
  return 0;
}

struct plan_options {
  std::string base;
  std::string reqs_path;
  std::string format = "csv";
};

int run_plan(const plan_options& opt) {
  auto [base, prefix] = ipnet::parse_cidr(opt.base);
  std::ifstream in(opt.reqs_path);
  if (!in) {
    std::cerr << "cannot open requirements file " << opt.reqs_path << "\n";
    return 1;
  }
  std::vector<ipnet::subnet_requirement> reqs = ipnet::load_requirements(in);
  try {
    ipnet::plan_table plan = ipnet::build_plan(base, prefix, std::move(reqs));
    std::cout << ipnet::render_plan(plan, opt.format == "pretty"
                                              ? ipnet::plan_format::pretty
                                              : ipnet::plan_format::csv);
  } catch (const ipnet::infeasible_error& e) {
    std::cerr << "infeasible: need " << e.need << " addresses, capacity "
              << e.capacity << " (deficit " << e.deficit() << ")\n";
    return 2;
  }
  return 0;
}

struct keyed_sim_options {
  std::string axis = "reorder";
  std::vector<std::uint32_t> sizes;
  std::vector<double> rates;
  std::uint32_t runs = 100;
  std::uint64_t seed = 0;
  std::string model = "adjacent";
  std::uint32_t max_displacement = 1;
  std::string buffer = "half";
  std::uint32_t rounds = 4;
  std::string config_path;
};

int run_keyed_sim(const keyed_sim_options& opt) {
  ipnet::experiment_config config;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      std::cerr << "cannot open config file " << opt.config_path << "\n";
      return 1;
    }
    config = ipnet::load_experiment_config(in);
  } else {
    config.axis = opt.axis == "loss" ? ipnet::error_axis::loss
                                     : ipnet::error_axis::reorder;
    if (!opt.sizes.empty()) config.key_sizes = opt.sizes;
    config.rates = opt.rates;
    if (config.rates.empty()) {
      config.rates = config.axis == ipnet::error_axis::loss
                         ? std::vector<double>{0.10, 0.15, 0.20, 0.25}
                         : std::vector<double>{0.10, 0.35, 0.50, 0.60, 0.70};
    }
    config.runs = opt.runs;
    config.seed = opt.seed;
    config.model = opt.model == "displacement"
                       ? ipnet::reorder_model::displacement
                       : ipnet::reorder_model::adjacent_swap;
    config.max_displacement = opt.max_displacement;
    config.buffer = opt.buffer == "n-1" ? ipnet::buffer_rule::key_minus_one
                                        : ipnet::buffer_rule::half_key;
    config.rounds = opt.rounds;
  }
  std::cout << ipnet::to_csv(ipnet::run_experiment(config));
  return 0;
}

struct synth_options {
  std::uint32_t flows = 4;
  std::uint32_t bursts = 5;
  std::uint32_t burst_len = 20;
  std::uint64_t intra_gap_us = 50;
  std::uint64_t inter_gap_us = 100000;
  std::uint64_t max_packets = 0;
  std::uint64_t seed = 0;
  std::string sizes;
};

void add_synth_flags(CLI::App* cmd, synth_options& opt) {
  cmd->add_option("--synth-flows", opt.flows, "synthetic trace: flow count");
  cmd->add_option("--synth-bursts", opt.bursts, "synthetic trace: bursts per flow");
  cmd->add_option("--synth-burst-len", opt.burst_len,
                  "synthetic trace: packets per burst");
  cmd->add_option("--synth-intra-gap-us", opt.intra_gap_us,
                  "synthetic trace: gap inside a burst");
  cmd->add_option("--synth-inter-gap-us", opt.inter_gap_us,
                  "synthetic trace: gap between burst starts");
  cmd->add_option("--synth-max-packets", opt.max_packets,
                  "synthetic trace: cap on packet count (0 = none)");
  cmd->add_option("--synth-sizes", opt.sizes,
                  "synthetic trace: size:weight list, e.g. 1500:0.6,576:0.4");
  cmd->add_option("--seed", opt.seed, "synthetic trace seed (default 0)");
}

ipnet::trace_profile profile_from(const synth_options& opt) {
  ipnet::trace_profile profile;
  profile.flows = opt.flows;
  profile.bursts_per_flow = opt.bursts;
  profile.burst_len = opt.burst_len;
  profile.intra_gap_us = opt.intra_gap_us;
  profile.inter_gap_us = opt.inter_gap_us;
  profile.max_packets = opt.max_packets;
  profile.seed = opt.seed;
  if (!opt.sizes.empty()) {
    profile.sizes.clear();
    std::stringstream ss(opt.sizes);
    std::string part;
    while (std::getline(ss, part, ',')) {
      std::size_t colon = part.find(':');
      if (colon == std::string::npos)
        throw ipnet::error("--synth-sizes expects size:weight pairs");
      profile.sizes.emplace_back(std::uint32_t(std::stoul(part.substr(0, colon))),
                                 std::stod(part.substr(colon + 1)));
    }
  }
  return profile;
}

ipnet::trace load_or_generate(const std::string& trace_path,
                              const synth_options& synth,
                              const std::string& dump_path) {
  ipnet::trace t;
  if (!trace_path.empty()) {
    std::ifstream in(trace_path);
    if (!in) throw ipnet::error("cannot open trace file " + trace_path);
    t = ipnet::load_trace_csv(in);
  } else {
    t = ipnet::generate_trace(profile_from(synth));
  }
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    if (!out) throw ipnet::error("cannot write trace file " + dump_path);
    ipnet::write_trace_csv(out, t);
  }
  return t;
}

struct aggregate_options {
  std::string trace_path;
  std::string policy = "hybrid";
  std::uint64_t max_size = 9000;
  std::uint64_t max_delay_us = 10000;
  std::string carrier = "v6";
  bool check_roundtrip = false;
  std::string dump_trace;
  synth_options synth;
};

int run_aggregate(const aggregate_options& opt) {
  ipnet::trace t = load_or_generate(opt.trace_path, opt.synth, opt.dump_trace);
  ipnet::burst_policy policy;
  policy.max_burst_payload = opt.max_size;
  policy.max_delay_us = opt.max_delay_us;
  policy.trigger = opt.policy == "size"   ? ipnet::burst_trigger::size_only
                   : opt.policy == "time" ? ipnet::burst_trigger::time_only
                                          : ipnet::burst_trigger::hybrid;
  try {
    std::vector<ipnet::burst> bursts = ipnet::assemble_bursts(t, policy);
    int carrier_version = opt.carrier == "v4" ? 4 : 6;
    ipnet::address_any src, dst;
    if (opt.check_roundtrip) {
      for (const auto& b : bursts) {
        if (carrier_version == 4) {
          src = ipnet::v4_address(0);
          dst = b.route_dst.index() == 0 ? b.route_dst
                                         : ipnet::address_any(ipnet::v4_address(0));
        } else {
          src = ipnet::v6_address{};
          dst = b.route_dst.index() == 1 ? b.route_dst
                                         : ipnet::address_any(ipnet::v6_address{});
        }
        std::vector<std::vector<std::uint8_t>> inner;
        for (const auto& p : b.members) {
          std::vector<std::uint8_t> fill(p.payload_size(), 0xab);
          inner.push_back(ipnet::serialize_packet(p, fill));
        }
        std::vector<std::uint8_t> carrier =
            ipnet::aggregate_packets(inner, carrier_version, src, dst);
        if (ipnet::disaggregate(carrier) != inner) {
          std::cerr << "round trip mismatch\n";
          return 2;
        }
      }
      std::cout << "OK: " << bursts.size()
                << " bursts aggregated and recovered byte-identically\n";
      return 0;
    }
    std::cout << "burst,route,packets,payload_bytes,first_ts_us,flush_ts_us\n";
    for (std::size_t i = 0; i < bursts.size(); ++i) {
      const auto& b = bursts[i];
      std::cout << i << ',' << ipnet::to_string(b.route_dst) << ','
                << b.members.size() << ',' << b.payload_bytes() << ','
                << b.first_ts_us << ',' << b.flush_ts_us << '\n';
    }
  } catch (const ipnet::packet_too_large& e) {
    std::cerr << "constraint failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

struct remanufacture_options {
  std::string trace_path;
  std::string mode = "swap";
  std::uint64_t vicinity_us = 500;
  std::uint32_t limit = 9000;
  std::uint32_t mtu = 1500;
  std::string dump_trace;
  synth_options synth;
};

int run_remanufacture(const remanufacture_options& opt) {
  ipnet::trace t = load_or_generate(opt.trace_path, opt.synth, opt.dump_trace);
  char buf[256];
  std::cout << "mode,vicinity_us,size_limit,in_packets,out_packets,"
               "packet_ratio,byte_ratio\n";
  if (opt.mode == "swap") {
    ipnet::swap_stats stats = ipnet::header_swap_analysis(t, opt.mtu);
    std::snprintf(buf, sizeof buf, "swap,,%u,%llu,%llu,%.6f,%.6f\n", opt.mtu,
                  static_cast<unsigned long long>(stats.in_packets),
                  static_cast<unsigned long long>(stats.out_packets),
                  stats.packet_ratio, stats.byte_ratio);
  } else {
    ipnet::reassembly_stats stats =
        ipnet::payload_reconstruct_analysis(t, opt.vicinity_us, opt.limit);
    std::snprintf(buf, sizeof buf, "reconstruct,%llu,%u,%llu,%llu,%.6f,%.6f\n",
                  static_cast<unsigned long long>(opt.vicinity_us), opt.limit,
                  static_cast<unsigned long long>(stats.in_packets),
                  static_cast<unsigned long long>(stats.out_packets),
                  stats.packet_ratio, stats.byte_ratio);
  }
  std::cout << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IP addressing, VLSM planning, keyed transport simulation, "
               "and packet aggregation"};
  app.require_subcommand(1);

  // addr
  CLI::App* addr = app.add_subcommand("addr", "address classification and math");
  addr->require_subcommand(1);
  addr_options addr_opt;
  CLI::App* classify =
      addr->add_subcommand("classify", "class and scope of an address");
  classify->add_option("address", addr_opt.classify_target)->required();
  CLI::App* net = addr->add_subcommand(
      "net", "network, broadcast, and usable hosts of addr/prefix");
  net->add_option("cidr", addr_opt.net_target)->required();
  CLI::App* v6 = addr->add_subcommand("v6", "IPv6 text tools");
  v6->require_subcommand(1);
  CLI::App* canon = v6->add_subcommand("canon", "canonical form of a literal");
  canon->add_option("literal", addr_opt.canon_target)->required();
  canon->add_flag("--embed-v4", addr_opt.embed_v4,
                  "render embedded-IPv4 forms when applicable");

  // plan
  CLI::App* plan = app.add_subcommand("plan", "VLSM addressing table");
  plan_options plan_opt;
  plan->add_option("--base", plan_opt.base, "base network, e.g. 10.0.0.0/23")
      ->required();
  plan->add_option("--reqs", plan_opt.reqs_path,
                   "requirements file (name,required_hosts lines)")
      ->required();
  plan->add_option("--format", plan_opt.format, "csv or pretty")
      ->check(CLI::IsMember({"csv", "pretty"}));

  // keyed-sim
  CLI::App* sim = app.add_subcommand(
      "keyed-sim", "keyed-transport Monte-Carlo efficiency experiment");
  keyed_sim_options sim_opt;
  sim->add_option("--axis", sim_opt.axis, "loss or reorder")
      ->check(CLI::IsMember({"loss", "reorder"}));
  sim->add_option("--sizes", sim_opt.sizes, "key sizes")->delimiter(',');
  sim->add_option("--rates", sim_opt.rates, "error rates in [0,1]")
      ->delimiter(',');
  sim->add_option("--runs", sim_opt.runs, "trials per cell (default 100)");
  sim->add_option("--seed", sim_opt.seed, "master seed (default 0)");
  sim->add_option("--model", sim_opt.model, "adjacent or displacement")
      ->check(CLI::IsMember({"adjacent", "displacement"}));
  sim->add_option("--max-displacement", sim_opt.max_displacement,
                  "displacement model bound");
  sim->add_option("--buffer", sim_opt.buffer, "half or n-1")
      ->check(CLI::IsMember({"half", "n-1"}));
  sim->add_option("--rounds", sim_opt.rounds, "stream length in key rounds");
  sim->add_option("--config", sim_opt.config_path,
                  "key=value experiment config file");

  // aggregate
  CLI::App* aggregate =
      app.add_subcommand("aggregate", "burst assembly and carrier packets");
  aggregate_options agg_opt;
  aggregate->add_option("--trace", agg_opt.trace_path, "trace CSV");
  aggregate->add_option("--policy", agg_opt.policy, "hybrid, size, or time")
      ->check(CLI::IsMember({"hybrid", "size", "time"}));
  aggregate->add_option("--max-size", agg_opt.max_size,
                        "burst payload bound in bytes");
  aggregate->add_option("--max-delay-us", agg_opt.max_delay_us,
                        "burst age bound in microseconds");
  aggregate->add_option("--carrier", agg_opt.carrier, "v4 or v6")
      ->check(CLI::IsMember({"v4", "v6"}));
  aggregate->add_flag("--check-roundtrip", agg_opt.check_roundtrip,
                      "aggregate and disaggregate every burst, compare bytes");
  aggregate->add_option("--dump-trace", agg_opt.dump_trace,
                        "write the (possibly synthetic) trace CSV here");
  add_synth_flags(aggregate, agg_opt.synth);

  // remanufacture
  CLI::App* reman = app.add_subcommand(
      "remanufacture", "v4-to-v6 conversion analyses over a trace");
  remanufacture_options reman_opt;
  reman->add_option("--trace", reman_opt.trace_path, "trace CSV");
  reman->add_option("--mode", reman_opt.mode, "swap or reconstruct")
      ->check(CLI::IsMember({"swap", "reconstruct"}));
  reman->add_option("--vicinity-us", reman_opt.vicinity_us,
                    "grouping time vicinity (reconstruct mode)");
  reman->add_option("--limit", reman_opt.limit,
                    "packet size limit (reconstruct mode)");
  reman->add_option("--mtu", reman_opt.mtu, "mtu for swap mode");
  reman->add_option("--dump-trace", reman_opt.dump_trace,
                    "write the (possibly synthetic) trace CSV here");
  add_synth_flags(reman, reman_opt.synth);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return run_addr_classify(addr_opt.classify_target);
    if (net->parsed()) return run_addr_net(addr_opt.net_target);
    if (canon->parsed())
      return run_addr_canon(addr_opt.canon_target, addr_opt.embed_v4);
    if (plan->parsed()) return run_plan(plan_opt);
    if (sim->parsed()) return run_keyed_sim(sim_opt);
    if (aggregate->parsed()) return run_aggregate(agg_opt);
    if (reman->parsed()) return run_remanufacture(reman_opt);
  } catch (const ipnet::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
