// Desk-scale analytics on dense Boolean states psi_f = sum_x f(x)|x>:
// reduced density operators, Renyi / von Neumann entropies, the
// low-temperature partition trace and the Cauchy-Schwarz inequality on
// network inner products.
#pragma once

#include "tnsharp/cnf.hpp"
#include "tnsharp/network.hpp"

#include <optional>
#include <vector>

namespace tnsharp {

inline constexpr Var kDenseMaxVars = 14;

/// Amplitude at index x is f(x); variable v is bit (v-1) of x.
struct DenseState {
  Var n = 0;
  std::vector<double> amplitudes;

  bool is_zero() const;
  /// <psi|psi>, which equals the model count.
  double norm_squared() const;
};

/// Variables in `traced` form side A (traced out); the rest form side B.
/// Both sides must be nonempty.
class Bipartition {
 public:
  Bipartition(Var n, std::uint64_t traced_mask);
  static Bipartition tracing_out(Var n, const std::vector<Var>& traced);

  Var n() const noexcept { return n_; }
  std::uint64_t traced_mask() const noexcept { return mask_; }

 private:
  Var n_;
  std::uint64_t mask_;
};

/// Entropy in nats, or nullopt when the state is zero and no density
/// operator exists.
struct EntropyResult {
  std::optional<double> nats;

  bool defined() const { return nats.has_value(); }
};

inline constexpr double kEigenvalueCutoff = 1e-12;

DenseState dense_state(const Formula& f);

/// Nonzero eigenvalues (above the cutoff) of rho_B = Tr_A |psi><psi| / Z0,
/// in descending order. Empty for the zero state.
std::vector<double> reduced_spectrum(const DenseState& s, const Bipartition& p);

/// (1/(1-q)) ln sum_i lambda_i^q; q = 0 gives ln(rank). q = 1 is rejected,
/// use von_neumann_entropy.
EntropyResult renyi_entropy(const DenseState& s, const Bipartition& p, double q);

/// -sum_i lambda_i ln lambda_i.
EntropyResult von_neumann_entropy(const DenseState& s, const Bipartition& p);

/// Tr exp(-beta H) with H the diagonal projector onto non-satisfying
/// assignments, i.e. #f + exp(-beta) * #(not f).
double partition_trace(const Formula& f, double beta);

struct CauchySchwarzReport {
  BigInt cross;  // C{x,y}
  BigInt xx;     // C{x,x}
  BigInt yy;     // C{y,y}
  bool holds = false;
  bool equality = false;
  std::optional<double> cos_theta;  // C{x,y}^2 / (C{x,x} C{y,y})
};

/// Evaluates the three inner products of two open networks with identical
/// open-wire signatures and checks C{x,y}^2 <= C{x,x} C{y,y}.
CauchySchwarzReport cauchy_schwarz_check(const Network& x, const Network& y);

}  // namespace tnsharp
