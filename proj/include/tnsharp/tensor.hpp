// Dense tensors over Boolean wires (every wire has dimension 2) with an exact
// integer backend for counting and a double backend for normalized networks.
#pragma once

#include "tnsharp/common.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace tnsharp {

/// Wire label. Labels only need to be unique within one tensor; contraction
/// pairs wires by label.
enum class Wire : std::uint32_t {};

constexpr Wire wire(std::uint32_t id) { return static_cast<Wire>(id); }
constexpr std::uint32_t wire_id(Wire w) { return static_cast<std::uint32_t>(w); }

enum class Backend : std::uint8_t { Exact, Real };

/// Largest rank we are willing to materialize densely.
inline constexpr std::size_t kMaxTensorRank = 24;

class Scalar {
 public:
  Scalar() : value_(BigInt{0}) {}
  Scalar(BigInt v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double v) : value_(v) {}             // NOLINT(google-explicit-constructor)

  Backend backend() const { return value_.index() == 0 ? Backend::Exact : Backend::Real; }
  const BigInt& exact() const;
  double real() const;
  double to_double() const;

  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

 private:
  std::variant<BigInt, double> value_;
};

class Tensor {
 public:
  /// Rank-0 exact tensor holding 1.
  Tensor();

  static Tensor exact(std::vector<Wire> wires, std::vector<BigInt> data);
  static Tensor real(std::vector<Wire> wires, std::vector<double> data);

  Backend backend() const { return data_.index() == 0 ? Backend::Exact : Backend::Real; }
  std::size_t rank() const { return wires_.size(); }
  std::size_t size() const { return std::size_t{1} << rank(); }
  const std::vector<Wire>& wires() const { return wires_; }

  /// Position of `w` in wires(), or throws InvalidArgument.
  std::size_t slot(Wire w) const;
  bool has_wire(Wire w) const;

  /// Entry at a flat index. Wire 0 is the most significant bit.
  Scalar at(std::uint64_t flat) const;
  /// Entry at explicit per-wire bits, in wires() order.
  Scalar at(std::span<const std::uint8_t> bits) const;
  /// Value of a rank-0 tensor.
  Scalar value() const;

  const std::vector<BigInt>& exact_data() const;
  const std::vector<double>& real_data() const;

  Tensor relabeled(std::vector<Wire> wires) const;
  /// Same tensor with its wires listed in `order` (a permutation of wires()).
  Tensor permuted(std::span<const Wire> order) const;
  Tensor to_real() const;

  /// Entrywise sum; wires must match as sets (b is permuted to a's order).
  Tensor plus(const Tensor& other) const;
  Tensor scaled(const Scalar& factor) const;

  /// Exact equality: same wire order, backend and entries.
  bool operator==(const Tensor& other) const;
  /// Max entrywise difference after aligning wire order.
  double max_abs_diff(const Tensor& other) const;

 private:
  Tensor(std::vector<Wire> wires, std::variant<std::vector<BigInt>, std::vector<double>> data);

  std::vector<Wire> wires_;
  std::variant<std::vector<BigInt>, std::vector<double>> data_;
};

/// Sums over the paired wires. Result wires: a's unpaired wires then b's, in
/// their original order. Throws InvalidArgument on unknown or repeated wires
/// and on a backend mismatch.
Tensor contract(const Tensor& a, const Tensor& b, std::span<const std::pair<Wire, Wire>> pairs);

/// Contracts every label that a and b share.
Tensor contract_shared(const Tensor& a, const Tensor& b);

/// |0..0><0..0| + |1..1><1..1| on k+1 wires. Slot 0 is the variable side.
Tensor copy_tensor(std::size_t k);

/// Truth table of f over m inputs; index x reads input 0 as the most
/// significant bit.
using TruthTable = std::vector<std::uint8_t>;

TruthTable or_table(std::size_t m);
TruthTable and_table(std::size_t m);
TruthTable not_table();
/// Disjunction of literals; polarity[i] false negates input i.
TruthTable clause_table(const std::vector<bool>& polarity);

/// Sum_x |x><f(x)|: inputs are wires 0..m-1, the output is wire m.
Tensor gate_tensor(std::span<const std::uint8_t> table);

enum class CapKind : std::uint8_t { Zero, One, Plus };

Tensor cap(CapKind kind);

/// g^dagger g contracted over the inputs: diag(#f^-1(0), #f^-1(1)) on
/// (output, output') wires.
Tensor diagonal_map(const Tensor& gate);

/// Rescales each row x of a gate by 1/sqrt(#f^-1(f(x))) so that the
/// diagonal map becomes the identity. Rejects constant gates.
Tensor normalize_gate(const Tensor& gate);

}  // namespace tnsharp
