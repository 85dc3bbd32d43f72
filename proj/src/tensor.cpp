#include "tnsharp/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace tnsharp {

const BigInt& Scalar::exact() const {
  if (const auto* v = std::get_if<BigInt>(&value_)) return *v;
  throw InvalidArgument("scalar is on the real backend");
}

double Scalar::real() const {
  if (const auto* v = std::get_if<double>(&value_)) return *v;
  throw InvalidArgument("scalar is on the exact backend");
}

double Scalar::to_double() const {
  if (const auto* v = std::get_if<double>(&value_)) return *v;
  return std::get<BigInt>(value_).convert_to<double>();
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) throw InvalidArgument("scalar backend mismatch");
  if (a.backend() == Backend::Exact) return Scalar(BigInt(a.exact() * b.exact()));
  return Scalar(a.real() * b.real());
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) throw InvalidArgument("scalar backend mismatch");
  if (a.backend() == Backend::Exact) return Scalar(BigInt(a.exact() + b.exact()));
  return Scalar(a.real() + b.real());
}

namespace {

void check_wires(const std::vector<Wire>& wires, std::size_t data_size) {
  if (wires.size() > kMaxTensorRank) {
    throw TooLarge("tensor rank " + std::to_string(wires.size()) + " exceeds dense limit " +
                   std::to_string(kMaxTensorRank));
  }
  if (data_size != (std::size_t{1} << wires.size())) {
    throw InvalidArgument("tensor data length " + std::to_string(data_size) + " does not match 2^" +
                          std::to_string(wires.size()));
  }
  auto sorted = wires;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("duplicate wire label in tensor");
  }
}

// Bit of wire `slot` within a flat index of a rank-r tensor.
constexpr std::uint64_t slot_bit(std::size_t rank, std::size_t slot) { return std::uint64_t{1} << (rank - 1 - slot); }

// For each value of a subset of slots (listed most significant first), the
// flat offset those bits contribute.
std::vector<std::uint64_t> offsets(std::size_t rank, const std::vector<std::size_t>& slots) {
  std::vector<std::uint64_t> out(std::size_t{1} << slots.size(), 0);
  const std::size_t k = slots.size();
  for (std::uint64_t v = 0; v < out.size(); ++v) {
    std::uint64_t off = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((v >> (k - 1 - i)) & 1U) off |= slot_bit(rank, slots[i]);
    }
    out[v] = off;
  }
  return out;
}

template <typename T>
std::vector<T> contract_data(const std::vector<T>& a, const std::vector<T>& b, std::size_t rank_a,
                             std::size_t rank_b, const std::vector<std::size_t>& free_a,
                             const std::vector<std::size_t>& free_b, const std::vector<std::size_t>& sum_a,
                             const std::vector<std::size_t>& sum_b) {
  const auto fa = offsets(rank_a, free_a);
  const auto fb = offsets(rank_b, free_b);
  const auto sa = offsets(rank_a, sum_a);
  const auto sb = offsets(rank_b, sum_b);
  std::vector<T> out(fa.size() * fb.size(), T{0});
  const std::size_t shift = free_b.size();
  for (std::size_t s = 0; s < sa.size(); ++s) {
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const T& x = a[fa[i] | sa[s]];
      if (x == 0) continue;
      for (std::size_t j = 0; j < fb.size(); ++j) {
        const T& y = b[fb[j] | sb[s]];
        if (y == 0) continue;
        out[(i << shift) | j] += x * y;
      }
    }
  }
  return out;
}

}  // namespace

Tensor::Tensor() : data_(std::vector<BigInt>{1}) {}

Tensor::Tensor(std::vector<Wire> wires, std::variant<std::vector<BigInt>, std::vector<double>> data)
    : wires_(std::move(wires)), data_(std::move(data)) {
  check_wires(wires_, std::visit([](const auto& d) { return d.size(); }, data_));
}

Tensor Tensor::exact(std::vector<Wire> wires, std::vector<BigInt> data) {
  return Tensor(std::move(wires), std::move(data));
}

Tensor Tensor::real(std::vector<Wire> wires, std::vector<double> data) {
  return Tensor(std::move(wires), std::move(data));
}

std::size_t Tensor::slot(Wire w) const {
  auto it = std::find(wires_.begin(), wires_.end(), w);
  if (it == wires_.end()) throw InvalidArgument("tensor has no wire " + std::to_string(wire_id(w)));
  return static_cast<std::size_t>(it - wires_.begin());
}

bool Tensor::has_wire(Wire w) const { return std::find(wires_.begin(), wires_.end(), w) != wires_.end(); }

Scalar Tensor::at(std::uint64_t flat) const {
  if (flat >= size()) throw InvalidArgument("tensor index out of range");
  return std::visit([&](const auto& d) { return Scalar(d[flat]); }, data_);
}

Scalar Tensor::at(std::span<const std::uint8_t> bits) const {
  if (bits.size() != rank()) throw InvalidArgument("index has wrong number of wires");
  std::uint64_t flat = 0;
  for (auto b : bits) flat = (flat << 1) | (b & 1U);
  return at(flat);
}

Scalar Tensor::value() const {
  if (rank() != 0) throw InvalidArgument("tensor still has " + std::to_string(rank()) + " open wires");
  return at(std::uint64_t{0});
}

const std::vector<BigInt>& Tensor::exact_data() const {
  if (const auto* d = std::get_if<std::vector<BigInt>>(&data_)) return *d;
  throw InvalidArgument("tensor is on the real backend");
}

const std::vector<double>& Tensor::real_data() const {
  if (const auto* d = std::get_if<std::vector<double>>(&data_)) return *d;
  throw InvalidArgument("tensor is on the exact backend");
}

Tensor Tensor::relabeled(std::vector<Wire> wires) const {
  if (wires.size() != rank()) throw InvalidArgument("relabel needs one label per wire");
  return Tensor(std::move(wires), data_);
}

Tensor Tensor::permuted(std::span<const Wire> order) const {
  if (order.size() != rank()) throw InvalidArgument("permutation has wrong length");
  std::vector<std::size_t> src(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) src[i] = slot(order[i]);
  const std::size_t r = rank();
  return std::visit(
      [&](const auto& d) {
        using Vec = std::decay_t<decltype(d)>;
        Vec out(d.size());
        for (std::uint64_t flat = 0; flat < d.size(); ++flat) {
          std::uint64_t from = 0;
          for (std::size_t i = 0; i < r; ++i) {
            if ((flat >> (r - 1 - i)) & 1U) from |= slot_bit(r, src[i]);
          }
          out[flat] = d[from];
        }
        return Tensor(std::vector<Wire>(order.begin(), order.end()), std::move(out));
      },
      data_);
}

Tensor Tensor::to_real() const {
  if (backend() == Backend::Real) return *this;
  const auto& d = exact_data();
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].convert_to<double>();
  return Tensor(wires_, std::move(out));
}

Tensor Tensor::plus(const Tensor& other) const {
  if (backend() != other.backend()) throw InvalidArgument("tensor backend mismatch");
  const Tensor aligned = other.permuted(wires_);
  return std::visit(
      [&](const auto& d) {
        using Vec = std::decay_t<decltype(d)>;
        const auto& e = std::get<Vec>(aligned.data_);
        Vec out(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] + e[i];
        return Tensor(wires_, std::move(out));
      },
      data_);
}

Tensor Tensor::scaled(const Scalar& factor) const {
  if (factor.backend() != backend()) throw InvalidArgument("scalar backend mismatch");
  if (backend() == Backend::Exact) {
    auto d = exact_data();
    for (auto& x : d) x *= factor.exact();
    return Tensor(wires_, std::move(d));
  }
  auto d = real_data();
  for (auto& x : d) x *= factor.real();
  return Tensor(wires_, std::move(d));
}

bool Tensor::operator==(const Tensor& other) const { return wires_ == other.wires_ && data_ == other.data_; }

double Tensor::max_abs_diff(const Tensor& other) const {
  const Tensor a = to_real();
  const Tensor b = other.to_real().permuted(wires_);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.real_data()[i] - b.real_data()[i]));
  }
  return worst;
}

Tensor contract(const Tensor& a, const Tensor& b, std::span<const std::pair<Wire, Wire>> pairs) {
  if (a.backend() != b.backend()) throw InvalidArgument("cannot contract tensors on different backends");
  std::vector<bool> used_a(a.rank(), false);
  std::vector<bool> used_b(b.rank(), false);
  std::vector<std::size_t> sum_a;
  std::vector<std::size_t> sum_b;
  for (const auto& [wa, wb] : pairs) {
    if (!a.has_wire(wa) || !b.has_wire(wb)) throw InvalidArgument("contraction pair names a missing wire");
    const auto sa = a.slot(wa);
    const auto sb = b.slot(wb);
    if (used_a[sa] || used_b[sb]) throw InvalidArgument("wire paired twice in one contraction");
    used_a[sa] = used_b[sb] = true;
    sum_a.push_back(sa);
    sum_b.push_back(sb);
  }
  std::vector<std::size_t> free_a;
  std::vector<std::size_t> free_b;
  std::vector<Wire> out_wires;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!used_a[i]) {
      free_a.push_back(i);
      out_wires.push_back(a.wires()[i]);
    }
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!used_b[i]) {
      free_b.push_back(i);
      out_wires.push_back(b.wires()[i]);
    }
  }
  if (out_wires.size() > kMaxTensorRank) throw TooLarge("contraction result exceeds dense limit");
  if (a.backend() == Backend::Exact) {
    return Tensor::exact(std::move(out_wires), contract_data(a.exact_data(), b.exact_data(), a.rank(), b.rank(),
                                                             free_a, free_b, sum_a, sum_b));
  }
  return Tensor::real(std::move(out_wires),
                      contract_data(a.real_data(), b.real_data(), a.rank(), b.rank(), free_a, free_b, sum_a, sum_b));
}

Tensor contract_shared(const Tensor& a, const Tensor& b) {
  std::vector<std::pair<Wire, Wire>> pairs;
  for (auto w : a.wires()) {
    if (b.has_wire(w)) pairs.emplace_back(w, w);
  }
  return contract(a, b, pairs);
}

namespace {

std::vector<Wire> default_wires(std::size_t rank) {
  std::vector<Wire> w(rank);
  for (std::size_t i = 0; i < rank; ++i) w[i] = wire(static_cast<std::uint32_t>(i));
  return w;
}

}  // namespace

Tensor copy_tensor(std::size_t k) {
  if (k == 0) throw InvalidArgument("COPY-tensor degree must be at least 1");
  if (k + 1 > kMaxTensorRank) throw TooLarge("COPY-tensor of degree " + std::to_string(k) + " is too large to densify");
  std::vector<BigInt> data(std::size_t{1} << (k + 1), BigInt{0});
  data.front() = 1;
  data.back() = 1;
  return Tensor::exact(default_wires(k + 1), std::move(data));
}

TruthTable or_table(std::size_t m) {
  TruthTable t(std::size_t{1} << m, 1);
  t[0] = 0;
  return t;
}

TruthTable and_table(std::size_t m) {
  TruthTable t(std::size_t{1} << m, 0);
  t.back() = 1;
  return t;
}

TruthTable not_table() { return TruthTable{1, 0}; }

TruthTable clause_table(const std::vector<bool>& polarity) {
  const std::size_t m = polarity.size();
  if (m + 1 > kMaxTensorRank) throw TooLarge("clause of width " + std::to_string(m) + " is too large to densify");
  // The single falsifying row sets every positive literal to 0 and every
  // negative literal to 1.
  std::uint64_t falsifying = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!polarity[i]) falsifying |= std::uint64_t{1} << (m - 1 - i);
  }
  TruthTable t(std::size_t{1} << m, 1);
  t[falsifying] = 0;
  return t;
}

Tensor gate_tensor(std::span<const std::uint8_t> table) {
  const std::size_t rows = table.size();
  if (rows == 0 || (rows & (rows - 1)) != 0) throw InvalidArgument("truth table length must be a power of two");
  std::size_t m = 0;
  while ((std::size_t{1} << m) < rows) ++m;
  if (m + 1 > kMaxTensorRank) throw TooLarge("gate with " + std::to_string(m) + " inputs is too large to densify");
  std::vector<BigInt> data(rows * 2, BigInt{0});
  for (std::size_t x = 0; x < rows; ++x) {
    if (table[x] > 1) throw InvalidArgument("truth table entries must be 0 or 1");
    data[(x << 1) | table[x]] = 1;
  }
  return Tensor::exact(default_wires(m + 1), std::move(data));
}

Tensor cap(CapKind kind) {
  switch (kind) {
    case CapKind::Zero:
      return Tensor::exact({wire(0)}, {1, 0});
    case CapKind::One:
      return Tensor::exact({wire(0)}, {0, 1});
    case CapKind::Plus:
      break;
  }
  return Tensor::exact({wire(0)}, {1, 1});
}

namespace {

// A label not used by `t`.
Wire fresh_wire(const Tensor& t) {
  std::uint32_t next = 0;
  for (auto w : t.wires()) next = std::max(next, wire_id(w) + 1);
  return wire(next);
}

}  // namespace

Tensor diagonal_map(const Tensor& gate) {
  if (gate.rank() == 0) throw InvalidArgument("a gate tensor needs an output wire");
  auto primed_wires = gate.wires();
  primed_wires.back() = fresh_wire(gate);
  const Tensor primed = gate.relabeled(primed_wires);
  std::vector<std::pair<Wire, Wire>> pairs;
  for (std::size_t i = 0; i + 1 < gate.rank(); ++i) pairs.emplace_back(gate.wires()[i], gate.wires()[i]);
  return contract(gate, primed, pairs);
}

Tensor normalize_gate(const Tensor& gate) {
  if (gate.backend() != Backend::Exact) throw InvalidArgument("normalize_gate expects an exact gate tensor");
  const auto& data = gate.exact_data();
  const std::size_t rows = gate.size() / 2;
  for (std::size_t x = 0; x < rows; ++x) {
    const bool zero = data[2 * x] == 1 && data[2 * x + 1] == 0;
    const bool one = data[2 * x] == 0 && data[2 * x + 1] == 1;
    if (!zero && !one) throw InvalidArgument("tensor is not the tensor of a Boolean function");
  }
  const Tensor d = diagonal_map(gate);
  const double preimage[2] = {d.at(std::uint64_t{0}).exact().convert_to<double>(),
                              d.at(std::uint64_t{3}).exact().convert_to<double>()};
  if (preimage[1] == 0) throw InvalidArgument("cannot normalize the constant-0 gate");
  if (preimage[0] == 0) throw InvalidArgument("cannot normalize a constant-1 gate to an isometry");
  std::vector<double> out(data.size(), 0.0);
  for (std::size_t x = 0; x < rows; ++x) {
    const std::size_t b = data[2 * x + 1] == 1 ? 1 : 0;
    out[2 * x + b] = 1.0 / std::sqrt(preimage[b]);
  }
  return Tensor::real(gate.wires(), std::move(out));
}

}  // namespace tnsharp
