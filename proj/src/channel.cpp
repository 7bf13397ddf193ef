#include "ipnet/channel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace ipnet {

std::vector<sent_packet> make_stream(std::uint32_t key_len,
                                     std::uint32_t rounds) {
  if (key_len < 2) throw std::invalid_argument("key length must be at least 2");
  std::vector<sent_packet> stream;
  stream.reserve(std::size_t(key_len) * rounds);
  for (std::uint64_t pos = 1; pos <= std::uint64_t(key_len) * rounds; ++pos)
    stream.push_back({"p" + std::to_string(pos),
                      std::uint32_t((pos - 1) % key_len), pos});
  return stream;
}

loss_result apply_loss(const std::vector<sent_packet>& stream, double p,
                       rng& r) {
  loss_result result;
  result.lost.resize(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    bool drop = r.next_double() < p;
    result.lost[i] = drop;
    if (drop)
      ++result.lost_count;
    else
      result.delivered.push_back(stream[i]);
  }
  return result;
}

std::vector<sent_packet> apply_reorder(const std::vector<sent_packet>& stream,
                                       double q, reorder_model model,
                                       std::uint32_t max_displacement,
                                       rng& r) {
  std::vector<sent_packet> out = stream;
  if (model == reorder_model::adjacent_swap) {
    for (std::size_t i = 0; i + 1 < out.size();) {
      if (r.next_double() < q) {
        std::swap(out[i], out[i + 1]);
        i += 2;
      } else {
        ++i;
      }
    }
    return out;
  }
  // displacement: delayed packets sort by (index + d), stable on ties
  std::vector<std::uint64_t> sort_key(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    sort_key[i] = i;
    if (r.next_double() < q)
      sort_key[i] += 1 + r.next_below(max_displacement);
  }
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sort_key[a] < sort_key[b];
  });
  std::vector<sent_packet> shuffled;
  shuffled.reserve(out.size());
  for (std::size_t i : order) shuffled.push_back(out[i]);
  return shuffled;
}

double efficiency(const std::vector<slot_value>& reference,
                  const std::vector<slot_value>& output,
                  std::size_t stream_len) {
  if (stream_len == 0) return 1.0;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < stream_len; ++i) {
    const slot_value& ref =
        i < reference.size() ? reference[i] : slot_value::miss();
    const slot_value& got = i < output.size() ? output[i] : slot_value::miss();
    if (ref == got) ++matches;
  }
  return double(matches) / double(stream_len);
}

trial_result run_trial(std::uint32_t key_len, error_axis axis, double rate,
                       const channel_config& config, buffer_rule buffer,
                       std::uint64_t trial_seed, std::uint32_t rounds) {
  std::vector<sent_packet> stream = make_stream(key_len, rounds);
  rng r(trial_seed);

  trial_result result;
  result.key_len = key_len;
  result.stream_len = stream.size();
  result.reference.assign(stream.size(), slot_value::miss());

  std::vector<sent_packet> arrivals;
  if (axis == error_axis::loss) {
    loss_result lossy = apply_loss(stream, rate, r);
    arrivals = std::move(lossy.delivered);
    for (std::size_t i = 0; i < stream.size(); ++i)
      if (!lossy.lost[i])
        result.reference[i] = slot_value::packet(stream[i].payload_id);
    result.realized_rate = double(lossy.lost_count) / double(stream.size());
  } else {
    arrivals = apply_reorder(stream, rate, config.model,
                             config.max_displacement, r);
    for (std::size_t i = 0; i < stream.size(); ++i)
      result.reference[i] = slot_value::packet(stream[i].payload_id);
    std::size_t displaced = 0;
    for (std::size_t i = 0; i < arrivals.size(); ++i)
      if (arrivals[i].position != i + 1) ++displaced;
    result.realized_rate = double(displaced) / double(stream.size());
  }
  result.delivered = arrivals.size();

  std::uint32_t buffer_len = buffer == buffer_rule::half_key
                                 ? stream_reconstructor::default_buffer_len(key_len)
                                 : key_len - 1;
  stream_reconstructor sra(key_len, buffer_len);
  for (const auto& packet : arrivals)
    sra.push({packet.payload_id, packet.key_index});
  sra.flush();
  result.output = sra.output();
  result.efficiency = efficiency(result.reference, result.output,
                                 result.stream_len);
  return result;
}

const cell_result* experiment_result::find(std::uint32_t n, double rate) const {
  for (const auto& cell : cells)
    if (cell.key_len == n && cell.rate_nominal == rate) return &cell;
  return nullptr;
}

experiment_result run_experiment(const experiment_config& config) {
  if (config.key_sizes.empty() || config.rates.empty() || config.runs == 0)
    throw std::invalid_argument("experiment grid has an empty axis");
  experiment_result result;
  result.config = config;
  result.cells.resize(config.key_sizes.size() * config.rates.size());

  // Cells are independent; each derives its trial seeds from its own index,
  // so the worker count never shows in the results.
  auto run_cell = [&](std::size_t cell_index) {
    std::uint32_t n = config.key_sizes[cell_index / config.rates.size()];
    double rate = config.rates[cell_index % config.rates.size()];
    channel_config chan;
    chan.model = config.model;
    chan.max_displacement = config.max_displacement;
    double eff_sum = 0.0, rate_sum = 0.0;
    for (std::uint32_t t = 0; t < config.runs; ++t) {
      trial_result trial =
          run_trial(n, config.axis, rate, chan, config.buffer,
                    substream_seed(config.seed, cell_index, t), config.rounds);
      eff_sum += trial.efficiency;
      rate_sum += trial.realized_rate;
    }
    result.cells[cell_index] = {n, rate, rate_sum / config.runs,
                                eff_sum / config.runs, config.runs};
  };

  std::atomic<std::size_t> next_cell{0};
  auto worker = [&] {
    for (std::size_t c; (c = next_cell.fetch_add(1)) < result.cells.size();)
      run_cell(c);
  };
  unsigned workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), result.cells.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

std::string to_csv(const experiment_result& result) {
  std::string out = "n,rate_nominal,rate_realized_mean,efficiency_mean,runs\n";
  char buf[128];
  for (const auto& cell : result.cells) {
    std::snprintf(buf, sizeof buf, "%u,%.4f,%.6f,%.6f,%u\n", cell.key_len,
                  cell.rate_nominal, cell.rate_realized_mean,
                  cell.efficiency_mean, cell.runs);
    out += buf;
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string::npos
                                         ? std::string::npos
                                         : next - pos));
    if (next == std::string::npos) return parts;
    pos = next + 1;
  }
}

std::string trim(std::string s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

experiment_config load_experiment_config(std::istream& in) {
  experiment_config config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw error("config line " + std::to_string(lineno) +
                  ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "key_sizes") {
        config.key_sizes.clear();
        for (const auto& part : split(value, ','))
          config.key_sizes.push_back(std::uint32_t(std::stoul(trim(part))));
      } else if (key == "axis") {
        if (value == "loss")
          config.axis = error_axis::loss;
        else if (value == "reorder")
          config.axis = error_axis::reorder;
        else
          throw error("axis must be loss or reorder");
      } else if (key == "rates") {
        config.rates.clear();
        for (const auto& part : split(value, ','))
          config.rates.push_back(std::stod(trim(part)));
      } else if (key == "runs") {
        config.runs = std::uint32_t(std::stoul(value));
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "model") {
        if (value == "adjacent")
          config.model = reorder_model::adjacent_swap;
        else if (value == "displacement")
          config.model = reorder_model::displacement;
        else
          throw error("model must be adjacent or displacement");
      } else if (key == "max_displacement") {
        config.max_displacement = std::uint32_t(std::stoul(value));
      } else if (key == "buffer") {
        if (value == "half")
          config.buffer = buffer_rule::half_key;
        else if (value == "n-1")
          config.buffer = buffer_rule::key_minus_one;
        else
          throw error("buffer must be half or n-1");
      } else if (key == "rounds") {
        config.rounds = std::uint32_t(std::stoul(value));
      } else {
        throw error("unknown key \"" + key + "\"");
      }
    } catch (const error&) {
      throw;
    } catch (const std::exception&) {
      throw error("config line " + std::to_string(lineno) + ": bad value \"" +
                  value + "\"");
    }
  }
  return config;
}

}  // namespace ipnet
