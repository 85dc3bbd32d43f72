#include "tnsharp/state.hpp"

#include "tnsharp/oracle.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace tnsharp {

bool DenseState::is_zero() const {
  return std::all_of(amplitudes.begin(), amplitudes.end(), [](double a) { return a == 0.0; });
}

double DenseState::norm_squared() const {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return s;
}

Bipartition::Bipartition(Var n, std::uint64_t traced_mask) : n_(n), mask_(traced_mask) {
  if (n > kDenseMaxVars) throw TooLarge("bipartitions are limited to " + std::to_string(kDenseMaxVars) + " variables");
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  if ((mask_ & ~all) != 0) throw InvalidArgument("bipartition names a variable beyond n");
  if (mask_ == 0 || mask_ == all) throw InvalidArgument("both sides of a bipartition must be nonempty");
}

Bipartition Bipartition::tracing_out(Var n, const std::vector<Var>& traced) {
  std::uint64_t mask = 0;
  for (auto v : traced) {
    if (v == 0 || v > n) throw InvalidArgument("bipartition variable " + std::to_string(v) + " out of range");
    mask |= std::uint64_t{1} << (v - 1);
  }
  return Bipartition(n, mask);
}

DenseState dense_state(const Formula& f) {
  if (f.num_vars() > kDenseMaxVars) {
    throw TooLarge("dense states are limited to " + std::to_string(kDenseMaxVars) + " variables");
  }
  DenseState s;
  s.n = f.num_vars();
  s.amplitudes.resize(std::size_t{1} << s.n);
  for (AssignmentIterator it(s.n); !it.done(); ++it) s.amplitudes[*it] = evaluate(f, *it) ? 1.0 : 0.0;
  return s;
}

std::vector<double> reduced_spectrum(const DenseState& s, const Bipartition& p) {
  if (p.n() != s.n) throw InvalidArgument("bipartition and state disagree on n");
  const double z0 = s.norm_squared();
  if (z0 == 0.0) return {};

  // Rows index side A, columns side B; the squared singular values of this
  // matrix are the eigenvalues of Tr_A |psi><psi|.
  std::vector<Var> side_a;
  std::vector<Var> side_b;
  for (Var v = 1; v <= s.n; ++v) ((p.traced_mask() >> (v - 1)) & 1U ? side_a : side_b).push_back(v);
  auto compress = [](std::uint64_t x, const std::vector<Var>& vars) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) out |= ((x >> (vars[i] - 1)) & 1U) << i;
    return out;
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index{1} << side_a.size(), Eigen::Index{1} << side_b.size());
  for (std::uint64_t x = 0; x < s.amplitudes.size(); ++x) {
    if (s.amplitudes[x] != 0.0) {
      m(static_cast<Eigen::Index>(compress(x, side_a)), static_cast<Eigen::Index>(compress(x, side_b))) =
          s.amplitudes[x];
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  std::vector<double> spectrum;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double sigma = svd.singularValues()(i);
    const double lambda = sigma * sigma / z0;
    if (lambda > kEigenvalueCutoff) spectrum.push_back(lambda);
  }
  std::sort(spectrum.rbegin(), spectrum.rend());
  return spectrum;
}

EntropyResult renyi_entropy(const DenseState& s, const Bipartition& p, double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidArgument("Renyi order q must be a finite value >= 0");
  if (q == 1.0) throw InvalidArgument("q = 1 is the von Neumann entropy; use von_neumann_entropy");
  const auto spectrum = reduced_spectrum(s, p);
  if (spectrum.empty()) return {};
  if (q == 0.0) return {std::log(static_cast<double>(spectrum.size()))};
  double trace = 0.0;
  for (double lambda : spectrum) trace += std::pow(lambda, q);
  return {std::log(trace) / (1.0 - q)};
}

EntropyResult von_neumann_entropy(const DenseState& s, const Bipartition& p) {
  const auto spectrum = reduced_spectrum(s, p);
  if (spectrum.empty()) return {};
  double h = 0.0;
  for (double lambda : spectrum) h -= lambda * std::log(lambda);
  return {std::max(h, 0.0)};
}

double partition_trace(const Formula& f, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  const DenseState s = dense_state(f);
  // exp(-beta H) is diagonal with entry exp(-beta * (1 - f(x))).
  const double weight = std::exp(-beta);
  double trace = 0.0;
  for (double a : s.amplitudes) trace += a != 0.0 ? 1.0 : weight;
  return trace;
}

CauchySchwarzReport cauchy_schwarz_check(const Network& x, const Network& y) {
  if (x.closed() || y.closed()) throw InvalidArgument("Cauchy-Schwarz check needs open networks");
  if (x.dangling_signature() != y.dangling_signature()) {
    throw InvalidArgument("networks have different open-wire signatures");
  }
  CauchySchwarzReport r;
  auto inner = [](const Network& a, const Network& b) { return network_value(fuse_copies(join(a, b))).exact(); };
  r.cross = inner(x, y);
  r.xx = inner(x, x);
  r.yy = inner(y, y);
  const BigInt lhs = r.cross * r.cross;
  const BigInt rhs = r.xx * r.yy;
  r.holds = lhs <= rhs;
  r.equality = lhs == rhs;
  if (rhs != 0) r.cos_theta = lhs.convert_to<double>() / rhs.convert_to<double>();
  return r;
}

}  // namespace tnsharp
