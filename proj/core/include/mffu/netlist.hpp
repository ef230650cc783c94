#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mffu {

/// Dense index into one of the circuit's tables. The tag keeps net, gate and
/// flip-flop indices from being mixed up.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
  [[nodiscard]] constexpr std::size_t index() const { return value; }
};

using NetId = Id<struct NetTag>;
using GateId = Id<struct GateTag>;
using FfId = Id<struct FfTag>;

enum class GateKind : std::uint8_t { And, Or, Nand, Nor, Xor, Xnor, Not, Buff };

[[nodiscard]] std::string_view to_string(GateKind kind);
[[nodiscard]] std::optional<GateKind> gate_kind_from_string(std::string_view name);

struct Driver {
  enum class Kind : std::uint8_t { Input, Gate, FlipFlop };
  Kind kind = Kind::Input;
  std::uint32_t index = 0;  // gate or flip-flop index; unused for inputs
};

struct Sink {
  enum class Kind : std::uint8_t { Gate, FlipFlop, Output };
  Kind kind = Kind::Gate;
  std::uint32_t index = 0;  // gate or flip-flop index; unused for outputs
};

struct Net {
  NetId id;
  std::string name;
  Driver driver;
  std::vector<Sink> fanouts;
  bool excluded = false;
};

struct Gate {
  GateId id;
  GateKind kind = GateKind::And;
  std::vector<NetId> inputs;
  NetId output;
};

struct FlipFlop {
  FfId id;
  std::string name;  // the name of the q net
  NetId d;
  NetId q;
};

struct CircuitStats {
  std::size_t num_ffs = 0;
  std::size_t num_gates = 0;
  std::size_t num_pis = 0;
  std::size_t num_pos = 0;
  std::size_t num_nets = 0;

  friend bool operator==(const CircuitStats&, const CircuitStats&) = default;
};

/// Raised for any malformed netlist. `line()` is 0 when the problem is not
/// tied to a source line (e.g. an unknown name in the exclude list).
class NetlistError : public std::runtime_error {
 public:
  NetlistError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable, validated gate-level netlist. Flip-flops share one implicit
/// clock; their q nets cut the combinational graph.
class Circuit {
 public:
  Circuit() = default;

  [[nodiscard]] std::span<const Net> nets() const { return nets_; }
  [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
  [[nodiscard]] std::span<const FlipFlop> flipflops() const { return ffs_; }
  [[nodiscard]] std::span<const NetId> primary_inputs() const { return inputs_; }
  [[nodiscard]] std::span<const NetId> primary_outputs() const { return outputs_; }
  [[nodiscard]] std::span<const NetId> excluded_nets() const { return excluded_; }

  [[nodiscard]] const Net& net(NetId id) const { return nets_.at(id.index()); }
  [[nodiscard]] const Gate& gate(GateId id) const { return gates_.at(id.index()); }
  [[nodiscard]] const FlipFlop& flipflop(FfId id) const { return ffs_.at(id.index()); }

  [[nodiscard]] std::optional<NetId> find_net(std::string_view name) const;
  [[nodiscard]] std::optional<FfId> find_flipflop(std::string_view name) const;

  /// Gates ordered so every gate follows the drivers of its inputs.
  [[nodiscard]] std::span<const GateId> topological_order() const { return topo_; }

  /// Gate input pins plus flip-flop D pins fed by `id`. Primary output
  /// markers are not counted.
  [[nodiscard]] std::size_t fanout_count(NetId id) const;

  /// True for nets that carry combinational values: primary inputs and gate
  /// outputs. Flip-flop q nets are not combinational.
  [[nodiscard]] bool is_combinational(NetId id) const;
  [[nodiscard]] bool is_excluded(NetId id) const { return net(id).excluded; }

  [[nodiscard]] CircuitStats stats() const;

 private:
  friend class CircuitBuilder;

  std::vector<Net> nets_;
  std::vector<Gate> gates_;
  std::vector<FlipFlop> ffs_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<NetId> excluded_;
  std::vector<GateId> topo_;
  std::unordered_map<std::string, NetId> net_index_;
};

/// Incremental construction of a Circuit. Names may be referenced before
/// they are defined; `build()` runs all structural checks.
class CircuitBuilder {
 public:
  void add_input(std::string_view name, std::size_t line = 0);
  void add_output(std::string_view name, std::size_t line = 0);
  void add_gate(GateKind kind, std::string_view output, std::span<const std::string> inputs,
                std::size_t line = 0);
  void add_flipflop(std::string_view q, std::string_view d, std::size_t line = 0);
  void exclude(std::string_view name);
  /// Reserves the next net id for `name` without defining a driver.
  void declare(std::string_view name) { intern(name, 0); }

  /// Throws NetlistError on duplicate drivers, undefined nets, arity
  /// violations and combinational cycles.
  [[nodiscard]] Circuit build() const;

 private:
  struct PendingGate {
    GateKind kind;
    std::uint32_t output;
    std::vector<std::uint32_t> inputs;
    std::size_t line;
  };
  struct PendingFf {
    std::uint32_t q;
    std::uint32_t d;
    std::size_t line;
  };
  struct PendingNet {
    std::string name;
    std::optional<Driver> driver;
    std::size_t driver_line = 0;
    std::size_t first_use_line = 0;
  };

  std::uint32_t intern(std::string_view name, std::size_t line);
  void set_driver(std::uint32_t net, Driver driver, std::size_t line);

  std::vector<PendingNet> nets_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<PendingGate> gates_;
  std::vector<PendingFf> ffs_;
  std::vector<std::uint32_t> inputs_;
  std::vector<std::pair<std::uint32_t, std::size_t>> outputs_;
  std::vector<std::string> exclude_;
};

/// Parses ISCAS-89 style `.bench` text. Nets listed in `exclude` (clock or
/// reset) are marked and never become fault sites.
[[nodiscard]] Circuit parse_bench(std::string_view text, std::span<const std::string> exclude = {});

/// Emits `.bench` text that parses back to an isomorphic circuit.
[[nodiscard]] std::string write_bench(const Circuit& circuit);

[[nodiscard]] inline CircuitStats circuit_stats(const Circuit& c) { return c.stats(); }

}  // namespace mffu

template <class Tag>
struct std::hash<mffu::Id<Tag>> {
  std::size_t operator()(const mffu::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
