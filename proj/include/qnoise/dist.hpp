#pragma once

// Star-graph execution of the sampled average algorithm.
//
// Each node agent holds one private value and drives its own qubit: a local
// phase shift and a local sigma_x measurement. The only thing that leaves a
// node is the one-bit outcome, sent to the ruler over a classical channel.
// The ruler XORs the bits, applies the pi correction on odd parity and reads
// itself out.
//
// Entanglement cannot be split across processes, so all quantum operations go
// through one shared Backplane that owns the register. The harness models the
// classical control and communication plane only. Backplane calls are
// serialized by a mutex in request order.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "qnoise/average.hpp"
#include "qnoise/errors.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

/// One measurement outcome on the wire.
struct ClassicalMessage {
  std::uint32_t sender = 0;
  std::uint8_t bit = 0;

  bool operator==(const ClassicalMessage&) const = default;
};

inline constexpr std::size_t kMessageWireSize = 5;
using WireFrame = std::array<std::uint8_t, kMessageWireSize>;

/// Layout: sender as little-endian u32, then the bit as u8.
inline WireFrame encode(const ClassicalMessage& m) {
  detail::require(m.bit <= 1, "message payload must be a single bit");
  return {static_cast<std::uint8_t>(m.sender), static_cast<std::uint8_t>(m.sender >> 8),
          static_cast<std::uint8_t>(m.sender >> 16), static_cast<std::uint8_t>(m.sender >> 24), m.bit};
}

inline ClassicalMessage decode(const WireFrame& f) {
  if (f[4] > 1) throw ChannelError("corrupt frame: payload is not a single bit");
  const std::uint32_t sender = std::uint32_t{f[0]} | std::uint32_t{f[1]} << 8 | std::uint32_t{f[2]} << 16 |
                               std::uint32_t{f[3]} << 24;
  return {sender, f[4]};
}

/// FIFO queue of frames towards the ruler. With a nonzero drop probability
/// each frame is lost independently; the drop draws use their own generator so
/// they never perturb the measurement stream.
class Channel {
 public:
  explicit Channel(double drop_probability = 0.0, std::uint64_t drop_seed = 0)
      : drop_probability_(drop_probability), drop_rng_(drop_seed) {
    detail::require(drop_probability >= 0.0 && drop_probability <= 1.0, "drop probability outside [0,1]");
  }

  void send(const ClassicalMessage& m) {
    const WireFrame f = encode(m);
    std::lock_guard lock(mutex_);
    ++bits_sent_;
    if (drop_probability_ > 0.0 && drop_rng_.uniform() < drop_probability_) return;
    queue_.push_back(f);
  }

  std::optional<ClassicalMessage> receive() {
    std::lock_guard lock(mutex_);
    if (queue_.empty()) return std::nullopt;
    const WireFrame f = queue_.front();
    queue_.pop_front();
    return decode(f);
  }

  /// Reorders queued frames so that senders come out in `order`; senders not
  /// listed keep their relative FIFO position after the listed ones.
  void reorder(const std::vector<std::uint32_t>& order) {
    std::lock_guard lock(mutex_);
    std::stable_sort(queue_.begin(), queue_.end(), [&](const WireFrame& a, const WireFrame& b) {
      return rank(order, decode(a).sender) < rank(order, decode(b).sender);
    });
  }

  std::size_t bits_sent() const { return bits_sent_; }

 private:
  static std::size_t rank(const std::vector<std::uint32_t>& order, std::uint32_t sender) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), sender) - order.begin());
  }

  double drop_probability_;
  Rng drop_rng_;
  std::mutex mutex_;
  std::deque<WireFrame> queue_;
  std::size_t bits_sent_ = 0;
};

/// Owner of the shared register. Draws come from the caller's generator in
/// the order the requests arrive.
class Backplane {
 public:
  Backplane(DensityMatrix resource, Variant variant, Rng& rng)
      : rho_(std::move(resource)), variant_(variant), rng_(rng) {}

  void apply_phase(std::uint32_t node, double angle) {
    std::lock_guard lock(mutex_);
    rho_ = apply_local(rho_, gates::phase_shift(angle), {qubit_of(node)});
  }

  /// sigma_x measurement of the node's qubit; one uniform is consumed.
  int measure_x(std::uint32_t node) {
    std::lock_guard lock(mutex_);
    const int q = qubit_of(node);
    detail::require(q != 1, "the readout qubit is not measured in the x basis");
    MeasurementResult r = measure_projective(rho_, q, Basis::x);
    double p_zero = 0;
    for (const auto& b : r.branches)
      if (b.outcome == 0) p_zero = b.probability;
    int o = draw_binary(rng_, p_zero);
    const auto it = std::find_if(r.branches.begin(), r.branches.end(), [&](const auto& b) { return b.outcome == o; });
    if (it == r.branches.end()) o = 1 - o;
    for (auto& b : r.branches)
      if (b.outcome == o) rho_ = std::move(b.state);
    return o;
  }

  /// Optional R(pi), then Hadamard and z readout of qubit 1; one uniform.
  int correct_and_read(int parity) {
    std::lock_guard lock(mutex_);
    const DensityMatrix ruler = partial_trace(rho_, {1});
    const DensityMatrix corrected = parity ? apply_local(ruler, gates::phase_shift(std::numbers::pi), {1}) : ruler;
    return draw_binary(rng_, ruler_readout(corrected));
  }

 private:
  int qubit_of(std::uint32_t node) const {
    const int q = value_qubit(variant_, static_cast<int>(node));
    detail::check_qubit(rho_.qubits(), q);
    return q;
  }

  std::mutex mutex_;
  DensityMatrix rho_;
  Variant variant_;
  Rng& rng_;
};

/// A node knows its id, its own value and the public (N, theta). It sees
/// nothing of the other nodes.
class NodeAgent {
 public:
  NodeAgent(std::uint32_t id, double private_value, int value_count, double theta)
      : id_(id), value_(private_value), value_count_(value_count), theta_(theta) {}

  std::uint32_t id() const { return id_; }

  void apply_phase(Backplane& plane) const { plane.apply_phase(id_, value_ / (value_count_ * theta_)); }

  void measure_and_report(Backplane& plane, Channel& channel) const {
    channel.send({id_, static_cast<std::uint8_t>(plane.measure_x(id_))});
  }

 private:
  std::uint32_t id_;
  double value_;
  int value_count_;
  double theta_;
};

struct DistributedConfig {
  std::vector<double> values;
  double theta = 0.5;
  Variant variant = Variant::ruler;
  NoiseSpec noise = StaticNoiseSpec{};
  double drop_probability = 0.0;
  std::uint64_t drop_seed = 0;
  std::vector<std::uint32_t> delivery_order;  // empty: FIFO

  AverageConfig average_config() const { return {values, theta, variant, noise, ExactMode{}}; }
};

struct RoundTranscript {
  std::vector<ClassicalMessage> messages;  // in delivery order
  int parity = 0;
  int ruler_outcome = 0;
  double final_estimate = 0;  // ratio estimate from this round alone
  std::size_t message_count = 0;

  /// Outcome bits ordered by sender id.
  std::vector<std::uint8_t> bits_by_sender() const {
    auto sorted = messages;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.sender < b.sender; });
    std::vector<std::uint8_t> bits;
    for (const auto& m : sorted) bits.push_back(m.bit);
    return bits;
  }
};

namespace detail {

inline std::vector<NodeAgent> make_agents(const DistributedConfig& c) {
  std::vector<NodeAgent> agents;
  const int n = static_cast<int>(c.values.size());
  for (int j = 1; j <= n; ++j)
    agents.emplace_back(static_cast<std::uint32_t>(j), c.values[static_cast<std::size_t>(j - 1)], n, c.theta);
  return agents;
}

inline RoundTranscript play_round(const DistributedConfig& config, const DensityMatrix& resource,
                                  const std::vector<NodeAgent>& agents, Rng& rng, Channel& channel) {
  Backplane plane(resource, config.variant, rng);
  for (const NodeAgent& a : agents) a.apply_phase(plane);

  // In the original layout node 1 owns the readout qubit and sends nothing.
  std::vector<std::uint32_t> expected;
  for (const NodeAgent& a : agents) {
    if (config.variant == Variant::original && a.id() == 1) continue;
    a.measure_and_report(plane, channel);
    expected.push_back(a.id());
  }
  if (!config.delivery_order.empty()) channel.reorder(config.delivery_order);

  RoundTranscript t;
  while (auto m = channel.receive()) {
    t.messages.push_back(*m);
    t.parity ^= m->bit;
  }
  t.message_count = t.messages.size();
  if (t.message_count != expected.size())
    throw ChannelError("round aborted: " + std::to_string(expected.size() - t.message_count) + " message(s) lost");
  t.ruler_outcome = plane.correct_and_read(t.parity);
  t.final_estimate = estimate_ratio(t.ruler_outcome == 0 ? 1.0 : 0.0);
  return t;
}

}  // namespace detail

/// One trajectory with a fresh generator seeded by `seed`.
inline RoundTranscript run_distributed_round(const DistributedConfig& config, std::uint64_t seed) {
  const AverageConfig avg = config.average_config();
  avg.validate();
  Rng rng(seed);
  Channel channel(config.drop_probability, config.drop_seed);
  return detail::play_round(config, prepared_resource(avg), detail::make_agents(config), rng, channel);
}

struct DistributedReport {
  AverageReport report;
  std::vector<RoundTranscript> transcripts;
  std::size_t classical_bits = 0;
};

/// alpha rounds sharing one generator, as the monolithic sampled mode does.
/// The fidelity field is a property of the quantum state and comes from the
/// exact simulation.
inline DistributedReport run_distributed_experiment(const DistributedConfig& config, std::size_t alpha,
                                                    std::uint64_t seed) {
  detail::require(alpha >= 1, "alpha must be at least 1");
  const AverageConfig avg = config.average_config();
  avg.validate();
  const DensityMatrix resource = prepared_resource(avg);
  const auto agents = detail::make_agents(config);
  Rng rng(seed);
  Channel channel(config.drop_probability, config.drop_seed);

  DistributedReport out;
  std::size_t zeros = 0;
  out.report.parity_histogram.assign(2, 0);
  for (std::size_t i = 0; i < alpha; ++i) {
    RoundTranscript t = detail::play_round(config, resource, agents, rng, channel);
    ++out.report.parity_histogram[static_cast<std::size_t>(t.parity)];
    if (t.ruler_outcome == 0) ++zeros;
    out.transcripts.push_back(std::move(t));
  }
  out.classical_bits = channel.bits_sent();
  out.report.p_zero = static_cast<double>(zeros) / static_cast<double>(alpha);
  out.report.ratio_estimate = estimate_ratio(out.report.p_zero);
  out.report.true_ratio = avg.true_ratio();
  out.report.distance_ratio = out.report.ratio_estimate - out.report.true_ratio;
  out.report.fidelity = run_average(avg).fidelity;
  return out;
}

}  // namespace qnoise
