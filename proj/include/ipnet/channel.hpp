#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipnet/keyed.hpp"
#include "ipnet/rng.hpp"

namespace ipnet {

enum class reorder_model {
  adjacent_swap,  ///< left-to-right scan, swap i and i+1 with probability q
  displacement,   ///< delay a packet by 1..max_displacement arrival slots
};

enum class buffer_rule {
  half_key,      ///< ceil(n/2)
  key_minus_one  ///< n-1
};

struct channel_config {
  double loss_prob = 0.0;
  double reorder_prob = 0.0;
  reorder_model model = reorder_model::adjacent_swap;
  std::uint32_t max_displacement = 1;
  std::uint64_t rng_seed = 0;
};

/// A sent datagram: 1-based stream position plus its round-robin key index.
struct sent_packet {
  std::string payload_id;
  std::uint32_t key_index = 0;
  std::uint64_t position = 0;
};

/// Round-robin stream of rounds*n packets with unique payload ids.
std::vector<sent_packet> make_stream(std::uint32_t key_len,
                                     std::uint32_t rounds = 4);

struct loss_result {
  std::vector<sent_packet> delivered;  // subsequence of the input
  std::vector<bool> lost;              // per input position
  std::size_t lost_count = 0;
};

/// Drops each packet independently with probability p; the realized rate is
/// whatever the draws produced.
loss_result apply_loss(const std::vector<sent_packet>& stream, double p,
                       rng& r);

/// Permutes the stream (multiset-preserving, no loss, no duplication).
std::vector<sent_packet> apply_reorder(const std::vector<sent_packet>& stream,
                                       double q, reorder_model model,
                                       std::uint32_t max_displacement, rng& r);

/// Fraction of stream positions where the reconstructed output matches the
/// delivered-or-lost ground truth.  Both sequences are compared over
/// positions 1..stream_len; a shorter output counts as miss markers there.
double efficiency(const std::vector<slot_value>& reference,
                  const std::vector<slot_value>& output,
                  std::size_t stream_len);

enum class error_axis { loss, reorder };

struct trial_result {
  std::uint32_t key_len = 0;
  std::size_t stream_len = 0;
  std::size_t delivered = 0;
  double realized_rate = 0.0;
  double efficiency = 0.0;
  std::vector<slot_value> reference;
  std::vector<slot_value> output;
};

/// One simulated transmission: build the 4n stream, impair it on one axis,
/// run the reconstruction, and score the output.
trial_result run_trial(std::uint32_t key_len, error_axis axis, double rate,
                       const channel_config& config, buffer_rule buffer,
                       std::uint64_t trial_seed, std::uint32_t rounds = 4);

struct experiment_config {
  std::vector<std::uint32_t> key_sizes{5, 10, 15, 20, 50, 100, 200};
  error_axis axis = error_axis::reorder;
  std::vector<double> rates;
  std::uint32_t runs = 100;
  std::uint64_t seed = 0;
  reorder_model model = reorder_model::adjacent_swap;
  std::uint32_t max_displacement = 1;
  buffer_rule buffer = buffer_rule::half_key;
  std::uint32_t rounds = 4;
};

struct cell_result {
  std::uint32_t key_len = 0;
  double rate_nominal = 0.0;
  double rate_realized_mean = 0.0;
  double efficiency_mean = 0.0;
  std::uint32_t runs = 0;
};

struct experiment_result {
  experiment_config config;
  std::vector<cell_result> cells;  // key size major, rate minor
  const cell_result* find(std::uint32_t n, double rate) const;
};

/// Runs `runs` independently seeded trials per (key size, rate) cell.
/// Throws std::invalid_argument on an empty grid axis.
experiment_result run_experiment(const experiment_config& config);

/// Header: n,rate_nominal,rate_realized_mean,efficiency_mean,runs
std::string to_csv(const experiment_result& result);

/// key=value lines: key_sizes, axis, rates, runs, seed, model,
/// max_displacement, buffer, rounds.  '#' comments allowed.
experiment_config load_experiment_config(std::istream& in);

}  // namespace ipnet
