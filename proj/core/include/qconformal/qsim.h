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

#ifndef QCONFORMAL_QSIM_H_
#define QCONFORMAL_QSIM_H_

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qconformal {

// Exact two-qubit statevector simulation.
//
// Amplitude ordering: index = 2 * bit(qubit 0) + bit(qubit 1), i.e. qubit 0
// is the left character of the bitstring "q0 q1". Outcome k of a
// measurement distribution is the bitstring of k in that ordering
// (00, 01, 10, 11).

using Complex = std::complex<double>;

enum class GateKind { H, X, Y, Z, S, Sdg, T, RX, RY, RZ, CX };

inline constexpr std::array<GateKind, 11> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,
    GateKind::S,  GateKind::Sdg, GateKind::T, GateKind::RX,
    GateKind::RY, GateKind::RZ, GateKind::CX};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);
bool is_rotation(GateKind kind);
bool is_two_qubit(GateKind kind);

// A gate placed on qubit operands. Single-qubit gates act on qubits[0];
// CX uses qubits = {control, target}. Only rotation kinds carry an angle.
// Construction is unchecked; apply_gate() validates.
struct Gate {
  GateKind kind = GateKind::H;
  std::array<int, 2> qubits{0, 0};
  std::optional<double> angle;

  bool operator==(const Gate&) const = default;
};

Gate single_gate(GateKind kind, int qubit);
Gate rotation_gate(GateKind kind, double angle, int qubit);
Gate cx_gate(int control, int target);

// Throws OperandError if the operands or angle presence are inconsistent
// with the kind.
void validate_gate(const Gate& gate);

// Row-major 2x2 matrix {u00, u01, u10, u11}.
using Unitary2 = std::array<Complex, 4>;

// Matrix of a single-qubit kind. Throws OperandError for CX or for a
// missing/spurious angle.
Unitary2 single_qubit_matrix(GateKind kind, std::optional<double> angle = {});

struct StateVector {
  std::array<Complex, 4> amp{Complex(1.0, 0.0), Complex(), Complex(), Complex()};

  static StateVector zero() { return {}; }
  double norm_squared() const;
  std::array<double, 4> probabilities() const;
};

struct Circuit {
  std::vector<Gate> gates;
  int depth = 1;
  std::uint64_t seed = 0;

  // One gate per line: `KIND @ q`, `KIND(angle) @ q` or `CX @ c,t`.
  std::string to_text() const;

  bool operator==(const Circuit&) const = default;
};

struct CircuitConfig {
  int min_depth = 1;
  int max_depth = 8;
  std::vector<GateKind> gate_set{kAllGateKinds.begin(), kAllGateKinds.end()};
  double two_qubit_prob = 0.5;

  bool operator==(const CircuitConfig&) const = default;
};

// Throws ConfigError when the depth range, gate set or probability is invalid.
void validate_config(const CircuitConfig& config);

enum class MeasBasis { Z, X, Y };

std::string_view basis_name(MeasBasis basis);
std::optional<MeasBasis> parse_basis(std::string_view name);

struct MeasurementDistribution {
  MeasBasis basis = MeasBasis::Z;
  std::array<double, 4> p{};
  int shots = 0;  // 0 means exact probabilities

  bool operator==(const MeasurementDistribution&) const = default;
};

StateVector apply_gate(const StateVector& state, const Gate& gate);

StateVector simulate(std::span<const Gate> gates,
                     const StateVector& initial = StateVector::zero());
StateVector simulate(const Circuit& circuit);

// Seeded random circuit. Draw order per call: depth, then per layer one
// uniform for the CX decision followed by either the CX orientation or,
// for qubit 0 then qubit 1, the gate index and (for rotations) the angle.
Circuit random_circuit(const CircuitConfig& config, std::uint64_t seed);

// Gates that map the basis eigenstates onto the computational basis.
std::vector<Gate> basis_rotation(MeasBasis basis);

// Exact probabilities after rotating into `basis` when shots == 0,
// otherwise multinomial frequencies count_k / shots drawn from `seed`.
MeasurementDistribution measure(const Circuit& circuit, MeasBasis basis,
                                int shots, std::uint64_t seed);

// Categorical sampling of `shots` outcomes; zero-probability outcomes are
// never drawn.
std::array<std::int64_t, 4> sample_counts(const std::array<double, 4>& probs,
                                          int shots, std::uint64_t seed);

}  // namespace qconformal

#endif  // QCONFORMAL_QSIM_H_
