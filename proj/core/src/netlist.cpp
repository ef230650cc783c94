#include "mffu/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <sstream>

namespace mffu {

namespace {

constexpr std::array<std::pair<std::string_view, GateKind>, 9> kGateNames{{
    {"AND", GateKind::And},
    {"OR", GateKind::Or},
    {"NAND", GateKind::Nand},
    {"NOR", GateKind::Nor},
    {"XOR", GateKind::Xor},
    {"XNOR", GateKind::Xnor},
    {"NOT", GateKind::Not},
    {"BUFF", GateKind::Buff},
    {"BUF", GateKind::Buff},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char ch) {
    return std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ',' ||
           ch == '=' || ch == '#';
  });
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

// Splits "KIND(a, b, c)" into the keyword and its argument list.
struct Call {
  std::string_view keyword;
  std::vector<std::string> args;
};

Call parse_call(std::string_view text, std::size_t line) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      !trim(text.substr(close + 1)).empty()) {
    throw NetlistError(line, "malformed statement '" + std::string(text) + "'");
  }
  Call call;
  call.keyword = trim(text.substr(0, open));
  std::string_view inner = text.substr(open + 1, close - open - 1);
  if (trim(inner).empty()) return call;
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    const auto arg = trim(inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start));
    if (!valid_name(arg)) {
      throw NetlistError(line, "invalid net name '" + std::string(arg) + "'");
    }
    call.args.emplace_back(arg);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return call;
}

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [name, k] : kGateNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view name) {
  const std::string key = upper(name);
  for (const auto& [n, k] : kGateNames) {
    if (n == key) return k;
  }
  return std::nullopt;
}

NetlistError::NetlistError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::optional<NetId> Circuit::find_net(std::string_view name) const {
  if (auto it = net_index_.find(std::string(name)); it != net_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<FfId> Circuit::find_flipflop(std::string_view name) const {
  for (const auto& ff : ffs_) {
    if (ff.name == name) return ff.id;
  }
  return std::nullopt;
}

std::size_t Circuit::fanout_count(NetId id) const {
  const auto& sinks = net(id).fanouts;
  return static_cast<std::size_t>(std::count_if(
      sinks.begin(), sinks.end(), [](const Sink& s) { return s.kind != Sink::Kind::Output; }));
}

bool Circuit::is_combinational(NetId id) const {
  return net(id).driver.kind != Driver::Kind::FlipFlop;
}

CircuitStats Circuit::stats() const {
  return {ffs_.size(), gates_.size(), inputs_.size(), outputs_.size(), nets_.size()};
}

std::uint32_t CircuitBuilder::intern(std::string_view name, std::size_t line) {
  if (!valid_name(name)) throw NetlistError(line, "invalid net name '" + std::string(name) + "'");
  auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<std::uint32_t>(nets_.size()));
  if (inserted) nets_.push_back({std::string(name), std::nullopt, 0, line});
  return it->second;
}

void CircuitBuilder::set_driver(std::uint32_t net, Driver driver, std::size_t line) {
  auto& pending = nets_[net];
  if (pending.driver) {
    throw NetlistError(line, "net '" + pending.name + "' has more than one driver (first driven at line " +
                                 std::to_string(pending.driver_line) + ")");
  }
  pending.driver = driver;
  pending.driver_line = line;
}

void CircuitBuilder::add_input(std::string_view name, std::size_t line) {
  const auto id = intern(name, line);
  set_driver(id, {Driver::Kind::Input, 0}, line);
  inputs_.push_back(id);
}

void CircuitBuilder::add_output(std::string_view name, std::size_t line) {
  outputs_.emplace_back(intern(name, line), line);
}

void CircuitBuilder::add_gate(GateKind kind, std::string_view output, std::span<const std::string> inputs,
                              std::size_t line) {
  const bool unary = kind == GateKind::Not || kind == GateKind::Buff;
  if (unary && inputs.size() != 1) {
    throw NetlistError(line, std::string(to_string(kind)) + " gate '" + std::string(output) +
                                 "' needs exactly 1 input, got " + std::to_string(inputs.size()));
  }
  if (!unary && inputs.size() < 2) {
    throw NetlistError(line, std::string(to_string(kind)) + " gate '" + std::string(output) +
                                 "' needs at least 2 inputs, got " + std::to_string(inputs.size()));
  }
  PendingGate gate{kind, intern(output, line), {}, line};
  for (const auto& in : inputs) gate.inputs.push_back(intern(in, line));
  set_driver(gate.output, {Driver::Kind::Gate, static_cast<std::uint32_t>(gates_.size())}, line);
  gates_.push_back(std::move(gate));
}

void CircuitBuilder::add_flipflop(std::string_view q, std::string_view d, std::size_t line) {
  const auto q_id = intern(q, line);
  const auto d_id = intern(d, line);
  if (q_id == d_id) throw NetlistError(line, "flip-flop '" + std::string(q) + "' feeds its own input");
  set_driver(q_id, {Driver::Kind::FlipFlop, static_cast<std::uint32_t>(ffs_.size())}, line);
  ffs_.push_back({q_id, d_id, line});
}

void CircuitBuilder::exclude(std::string_view name) { exclude_.emplace_back(name); }

Circuit CircuitBuilder::build() const {
  Circuit c;
  c.nets_.reserve(nets_.size());
  for (std::uint32_t i = 0; i < nets_.size(); ++i) {
    const auto& pending = nets_[i];
    if (!pending.driver) {
      throw NetlistError(pending.first_use_line, "net '" + pending.name + "' is used but never defined");
    }
    c.nets_.push_back({NetId{i}, pending.name, *pending.driver, {}, false});
    c.net_index_.emplace(pending.name, NetId{i});
  }
  for (std::uint32_t g = 0; g < gates_.size(); ++g) {
    const auto& pending = gates_[g];
    Gate gate{GateId{g}, pending.kind, {}, NetId{pending.output}};
    for (auto in : pending.inputs) {
      gate.inputs.push_back(NetId{in});
      c.nets_[in].fanouts.push_back({Sink::Kind::Gate, g});
    }
    c.gates_.push_back(std::move(gate));
  }
  for (std::uint32_t f = 0; f < ffs_.size(); ++f) {
    const auto& pending = ffs_[f];
    c.ffs_.push_back({FfId{f}, nets_[pending.q].name, NetId{pending.d}, NetId{pending.q}});
    c.nets_[pending.d].fanouts.push_back({Sink::Kind::FlipFlop, f});
  }
  for (auto in : inputs_) c.inputs_.push_back(NetId{in});
  for (const auto& [out, line] : outputs_) {
    c.outputs_.push_back(NetId{out});
    c.nets_[out].fanouts.push_back({Sink::Kind::Output, 0});
  }
  for (const auto& name : exclude_) {
    auto it = index_.find(name);
    if (it == index_.end()) throw NetlistError(0, "excluded net '" + name + "' is not defined");
    auto& net = c.nets_[it->second];
    if (!net.excluded) {
      net.excluded = true;
      c.excluded_.push_back(net.id);
    }
  }
  std::sort(c.excluded_.begin(), c.excluded_.end());

  // Kahn's algorithm over gates; flip-flops cut the graph.
  std::vector<std::size_t> pending_inputs(c.gates_.size(), 0);
  std::deque<std::uint32_t> ready;
  for (const auto& gate : c.gates_) {
    for (auto in : gate.inputs) {
      if (c.nets_[in.index()].driver.kind == Driver::Kind::Gate) ++pending_inputs[gate.id.index()];
    }
    if (pending_inputs[gate.id.index()] == 0) ready.push_back(gate.id.value);
  }
  c.topo_.reserve(c.gates_.size());
  while (!ready.empty()) {
    const auto g = ready.front();
    ready.pop_front();
    c.topo_.push_back(GateId{g});
    for (const auto& sink : c.nets_[c.gates_[g].output.index()].fanouts) {
      if (sink.kind == Sink::Kind::Gate && --pending_inputs[sink.index] == 0) ready.push_back(sink.index);
    }
  }
  if (c.topo_.size() != c.gates_.size()) {
    std::size_t line = 0;
    std::string name;
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      if (pending_inputs[g] > 0 && (name.empty() || gates_[g].line < line)) {
        line = gates_[g].line;
        name = nets_[gates_[g].output].name;
      }
    }
    throw NetlistError(line, "combinational cycle through gate '" + name + "'");
  }
  return c;
}

Circuit parse_bench(std::string_view text, std::span<const std::string> exclude) {
  CircuitBuilder builder;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);  // also drops the '\r' of CRLF input
    if (line.empty()) continue;

    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      const auto lhs = trim(line.substr(0, eq));
      if (!valid_name(lhs)) throw NetlistError(line_no, "invalid net name '" + std::string(lhs) + "'");
      const auto call = parse_call(trim(line.substr(eq + 1)), line_no);
      if (upper(call.keyword) == "DFF") {
        if (call.args.size() != 1) {
          throw NetlistError(line_no, "DFF '" + std::string(lhs) + "' needs exactly 1 input");
        }
        builder.add_flipflop(lhs, call.args.front(), line_no);
        continue;
      }
      const auto kind = gate_kind_from_string(call.keyword);
      if (!kind) throw NetlistError(line_no, "unknown gate kind '" + std::string(call.keyword) + "'");
      builder.add_gate(*kind, lhs, call.args, line_no);
      continue;
    }

    const auto call = parse_call(line, line_no);
    const auto keyword = upper(call.keyword);
    if ((keyword != "INPUT" && keyword != "OUTPUT") || call.args.size() != 1) {
      throw NetlistError(line_no, "malformed statement '" + std::string(line) + "'");
    }
    if (keyword == "INPUT") {
      builder.add_input(call.args.front(), line_no);
    } else {
      builder.add_output(call.args.front(), line_no);
    }
  }
  for (const auto& name : exclude) builder.exclude(name);
  return builder.build();
}

std::string write_bench(const Circuit& c) {
  std::ostringstream out;
  for (auto in : c.primary_inputs()) out << "INPUT(" << c.net(in).name << ")\n";
  for (auto po : c.primary_outputs()) out << "OUTPUT(" << c.net(po).name << ")\n";
  for (const auto& ff : c.flipflops()) out << ff.name << " = DFF(" << c.net(ff.d).name << ")\n";
  for (auto gid : c.topological_order()) {
    const auto& gate = c.gate(gid);
    out << c.net(gate.output).name << " = " << to_string(gate.kind) << "(";
    for (std::size_t i = 0; i < gate.inputs.size(); ++i) {
      out << (i ? ", " : "") << c.net(gate.inputs[i]).name;
    }
    out << ")\n";
  }
  return out.str();
}

}  // namespace mffu
