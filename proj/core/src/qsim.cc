// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconformal/qsim.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "qconformal/errors.h"
#include "qconformal/number_format.h"
#include "qconformal/rng.h"

namespace qconformal {

namespace {

constexpr std::array<std::string_view, 11> kGateNames = {
    "H", "X", "Y", "Z", "S", "Sdg", "T", "RX", "RY", "RZ", "CX"};

bool valid_qubit(int q) { return q == 0 || q == 1; }

// Applies u to the amplitude pairs that differ only in `qubit`.
void apply_single(std::array<Complex, 4>& a, const Unitary2& u, int qubit) {
  const int stride = qubit == 0 ? 2 : 1;
  for (int base : {0, qubit == 0 ? 1 : 2}) {
    const Complex a0 = a[base];
    const Complex a1 = a[base + stride];
    a[base] = u[0] * a0 + u[1] * a1;
    a[base + stride] = u[2] * a0 + u[3] * a1;
  }
}

int bit_of(int index, int qubit) { return qubit == 0 ? (index >> 1) & 1 : index & 1; }

}  // namespace

std::string_view gate_name(GateKind kind) {
  return kGateNames[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (std::size_t i = 0; i < kGateNames.size(); ++i) {
    if (kGateNames[i] == name) return kAllGateKinds[i];
  }
  return std::nullopt;
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CX; }

Gate single_gate(GateKind kind, int qubit) { return Gate{kind, {qubit, qubit}, {}}; }

Gate rotation_gate(GateKind kind, double angle, int qubit) {
  return Gate{kind, {qubit, qubit}, angle};
}

Gate cx_gate(int control, int target) { return Gate{GateKind::CX, {control, target}, {}}; }

void validate_gate(const Gate& gate) {
  if (is_two_qubit(gate.kind)) {
    if (!valid_qubit(gate.qubits[0]) || !valid_qubit(gate.qubits[1])) {
      throw OperandError("CX operand outside {0,1}");
    }
    if (gate.qubits[0] == gate.qubits[1]) {
      throw OperandError("CX control equals target");
    }
  } else if (!valid_qubit(gate.qubits[0])) {
    throw OperandError(std::string(gate_name(gate.kind)) + " operand outside {0,1}");
  }
  if (is_rotation(gate.kind) != gate.angle.has_value()) {
    throw OperandError(std::string(gate_name(gate.kind)) +
                       (gate.angle ? " does not take an angle" : " requires an angle"));
  }
}

Unitary2 single_qubit_matrix(GateKind kind, std::optional<double> angle) {
  if (is_two_qubit(kind)) throw OperandError("CX has no single-qubit matrix");
  if (is_rotation(kind) != angle.has_value()) {
    throw OperandError("angle presence does not match gate kind");
  }
  constexpr double r = std::numbers::sqrt2 / 2.0;
  const Complex i(0.0, 1.0);
  switch (kind) {
    case GateKind::H:
      return {r, r, r, -r};
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
      return {0.0, -i, i, 0.0};
    case GateKind::Z:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::S:
      return {1.0, 0.0, 0.0, i};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, -i};
    case GateKind::T:
      return {1.0, 0.0, 0.0, Complex(r, r)};
    case GateKind::RX: {
      const double c = std::cos(*angle / 2.0), s = std::sin(*angle / 2.0);
      return {c, -i * s, -i * s, c};
    }
    case GateKind::RY: {
      const double c = std::cos(*angle / 2.0), s = std::sin(*angle / 2.0);
      return {c, -s, s, c};
    }
    case GateKind::RZ: {
      const double h = *angle / 2.0;
      return {std::polar(1.0, -h), 0.0, 0.0, std::polar(1.0, h)};
    }
    case GateKind::CX:
      break;
  }
  throw OperandError("unknown gate kind");
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amp) total += std::norm(a);
  return total;
}

std::array<double, 4> StateVector::probabilities() const {
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) p[k] = std::norm(amp[k]);
  return p;
}

std::string Circuit::to_text() const {
  std::ostringstream out;
  for (const Gate& g : gates) {
    out << gate_name(g.kind);
    if (g.angle) out << '(' << format_double(*g.angle) << ')';
    out << " @ " << g.qubits[0];
    if (is_two_qubit(g.kind)) out << ',' << g.qubits[1];
    out << '\n';
  }
  return out.str();
}

void validate_config(const CircuitConfig& config) {
  if (config.min_depth < 1 || config.min_depth > config.max_depth) {
    throw ConfigError("depth range must satisfy 1 <= min_depth <= max_depth");
  }
  if (config.gate_set.empty()) throw ConfigError("gate_set is empty");
  if (!(config.two_qubit_prob >= 0.0 && config.two_qubit_prob <= 1.0)) {
    throw ConfigError("two_qubit_prob must lie in [0, 1]");
  }
}

std::string_view basis_name(MeasBasis basis) {
  switch (basis) {
    case MeasBasis::Z:
      return "Z";
    case MeasBasis::X:
      return "X";
    case MeasBasis::Y:
      return "Y";
  }
  return "?";
}

std::optional<MeasBasis> parse_basis(std::string_view name) {
  if (name == "Z" || name == "z") return MeasBasis::Z;
  if (name == "X" || name == "x") return MeasBasis::X;
  if (name == "Y" || name == "y") return MeasBasis::Y;
  return std::nullopt;
}

StateVector apply_gate(const StateVector& state, const Gate& gate) {
  validate_gate(gate);
  StateVector out = state;
  if (gate.kind == GateKind::CX) {
    const int control = gate.qubits[0];
    const int target = gate.qubits[1];
    for (int k = 0; k < 4; ++k) {
      if (bit_of(k, control) == 1 && bit_of(k, target) == 0) {
        const int flipped = k ^ (target == 0 ? 2 : 1);
        std::swap(out.amp[k], out.amp[flipped]);
      }
    }
    return out;
  }
  apply_single(out.amp, single_qubit_matrix(gate.kind, gate.angle), gate.qubits[0]);
  return out;
}

StateVector simulate(std::span<const Gate> gates, const StateVector& initial) {
  StateVector state = initial;
  for (const Gate& g : gates) state = apply_gate(state, g);
  return state;
}

StateVector simulate(const Circuit& circuit) { return simulate(circuit.gates); }

Circuit random_circuit(const CircuitConfig& config, std::uint64_t seed) {
  validate_config(config);
  std::vector<GateKind> singles;
  bool has_cx = false;
  for (GateKind k : config.gate_set) {
    if (is_two_qubit(k)) {
      has_cx = true;
    } else {
      singles.push_back(k);
    }
  }

  Xoshiro256 rng(seed);
  Circuit circuit;
  circuit.seed = seed;
  const auto span = static_cast<std::uint64_t>(config.max_depth - config.min_depth + 1);
  circuit.depth = config.min_depth + static_cast<int>(rng.below(span));

  for (int layer = 0; layer < circuit.depth; ++layer) {
    const double u = rng.uniform();
    if (has_cx && (singles.empty() || u < config.two_qubit_prob)) {
      const int control = static_cast<int>(rng.below(2));
      circuit.gates.push_back(cx_gate(control, 1 - control));
      continue;
    }
    for (int q = 0; q < 2; ++q) {
      const GateKind kind = singles[rng.below(singles.size())];
      if (is_rotation(kind)) {
        circuit.gates.push_back(
            rotation_gate(kind, rng.uniform() * 2.0 * std::numbers::pi, q));
      } else {
        circuit.gates.push_back(single_gate(kind, q));
      }
    }
  }
  return circuit;
}

std::vector<Gate> basis_rotation(MeasBasis basis) {
  switch (basis) {
    case MeasBasis::Z:
      return {};
    case MeasBasis::X:
      return {single_gate(GateKind::H, 0), single_gate(GateKind::H, 1)};
    case MeasBasis::Y:
      return {single_gate(GateKind::Sdg, 0), single_gate(GateKind::H, 0),
              single_gate(GateKind::Sdg, 1), single_gate(GateKind::H, 1)};
  }
  return {};
}

std::array<std::int64_t, 4> sample_counts(const std::array<double, 4>& probs,
                                          int shots, std::uint64_t seed) {
  std::array<double, 4> cumulative{};
  double running = 0.0;
  int last_nonzero = 0;
  for (int k = 0; k < 4; ++k) {
    running += probs[k];
    cumulative[k] = running;
    if (probs[k] > 0.0) last_nonzero = k;
  }
  // Scale the draw onto the actual total so rounding in the probabilities
  // cannot push mass past the last outcome.
  const double total = running;

  Xoshiro256 rng(seed);
  std::array<std::int64_t, 4> counts{};
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    int outcome = last_nonzero;
    for (int k = 0; k < 4; ++k) {
      if (u < cumulative[k]) {
        outcome = k;
        break;
      }
    }
    ++counts[outcome];
  }
  return counts;
}

MeasurementDistribution measure(const Circuit& circuit, MeasBasis basis, int shots,
                                std::uint64_t seed) {
  if (shots < 0) throw InputError("shots must be >= 0");
  StateVector state = simulate(circuit);
  state = simulate(basis_rotation(basis), state);

  MeasurementDistribution dist;
  dist.basis = basis;
  dist.shots = shots;
  dist.p = state.probabilities();
  if (shots == 0) {
    // Rounding can leave |amp|^2 a few ulps above 1.
    for (double& v : dist.p) v = std::min(v, 1.0);
    return dist;
  }

  const auto counts = sample_counts(dist.p, shots, seed);
  for (int k = 0; k < 4; ++k) {
    dist.p[k] = static_cast<double>(counts[k]) / static_cast<double>(shots);
  }
  return dist;
}

}  // namespace qconformal
