#pragma once

// Channel representations (measure-and-prepare, Kraus, Choi), their action on
// states and on halves of bipartite states, entanglement-breaking detection,
// seeded random instances and the weight/conditional-state decomposition of
// (Phi (x) id)(rho12) for a measure-and-prepare channel Phi.

#include <cstdint>
#include <optional>
#include <variant>
#include <utility>
#include <vector>

#include "ebcert/linalg.hpp"

namespace ebcert {

/// One measure-and-prepare term: on outcome X_k prepare R_k.
struct EBPair {
  DensityMatrix state;   // R_k, dim_out x dim_out
  ComplexMatrix effect;  // X_k, dim_in x dim_in, PSD
};

/// Phi(rho) = sum_k R_k Tr(X_k rho) with {X_k} a POVM.
class HolevoEBChannel {
 public:
  HolevoEBChannel(std::size_t dim_in, std::size_t dim_out, std::vector<EBPair> pairs);

  /// Constant channel rho -> sigma (one term, X = I).
  static HolevoEBChannel replace(const DensityMatrix& sigma, std::size_t dim_in);
  /// Complete dephasing in the computational basis, R_k = X_k = |k><k|.
  static HolevoEBChannel dephasing(std::size_t dim);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<EBPair>& pairs() const& { return pairs_; }
  std::vector<EBPair> pairs() && { return std::move(pairs_); }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<EBPair> pairs_;
};

/// rho -> sum_k A_k rho A_k^dagger, trace preserving.
class KrausChannel {
 public:
  KrausChannel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> ops);

  static KrausChannel identity(std::size_t dim);
  /// rho -> lambda rho + (1 - lambda) I/dim, 0 <= lambda <= 1, via Weyl operators.
  static KrausChannel depolarizing(std::size_t dim, double lambda);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& ops() const& { return ops_; }
  std::vector<ComplexMatrix> ops() && { return std::move(ops_); }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<ComplexMatrix> ops_;
};

/// Either representation. The operator-level members perform no validation and
/// are meant for inner loops; use ebcert::apply for checked application.
class Channel {
 public:
  Channel(HolevoEBChannel c) : rep_(std::move(c)) {}  // NOLINT(google-explicit-constructor)
  Channel(KrausChannel c) : rep_(std::move(c)) {}     // NOLINT(google-explicit-constructor)

  std::size_t dim_in() const;
  std::size_t dim_out() const;

  bool is_holevo() const { return std::holds_alternative<HolevoEBChannel>(rep_); }
  const HolevoEBChannel& holevo() const { return std::get<HolevoEBChannel>(rep_); }
  const KrausChannel& kraus() const { return std::get<KrausChannel>(rep_); }

  /// Linear extension to arbitrary dim_in x dim_in operators.
  ComplexMatrix apply_operator(const ComplexMatrix& m) const;
  /// Output for the pure input psi psi^dagger (psi need not be normalized).
  ComplexMatrix apply_pure(const ComplexVector& psi) const;
  /// Heisenberg-picture map, Tr(G c(rho)) = Tr(c*(G) rho).
  ComplexMatrix apply_adjoint(const ComplexMatrix& g) const;
  /// c*(G) psi without forming c*(G).
  ComplexVector apply_adjoint_to(const ComplexMatrix& g, const ComplexVector& psi) const;

 private:
  std::variant<HolevoEBChannel, KrausChannel> rep_;
};

DensityMatrix apply(const Channel& c, const DensityMatrix& rho);

/// (c (x) id)(m12) for m12 on C^dim_in (x) C^dim2.
ComplexMatrix apply_local(const Channel& c, const ComplexMatrix& m12, std::size_t dim2);
DensityMatrix apply_local(const Channel& c, const DensityMatrix& rho12, std::size_t dim2);

/// Kraus form. Holevo terms become r_ki x_kj^dagger from the spectral
/// decompositions R_k = sum r r^dagger and X_k = sum x x^dagger.
KrausChannel to_kraus(const Channel& c);

/// Product channel a (x) b, always returned in Kraus form.
Channel tensor_channels(const Channel& a, const Channel& b);

/// (c (x) id)(|Omega><Omega|) with |Omega> = sum_i |ii>/sqrt(dim_in); the output
/// factor comes first.
class ChoiMatrix {
 public:
  ChoiMatrix(std::size_t dim_in, std::size_t dim_out, const ComplexMatrix& m);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const DensityMatrix& matrix() const { return matrix_; }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  DensityMatrix matrix_;
};

ChoiMatrix to_choi(const Channel& c);

/// Channel action recovered from its Choi matrix: dim_in Tr_2[C (I (x) rho^T)].
ComplexMatrix apply_choi(const ChoiMatrix& choi, const ComplexMatrix& rho);

/// Smallest eigenvalue of the Choi matrix partially transposed on the input factor.
double min_partial_transpose_eigenvalue(const ChoiMatrix& choi);

enum class EBClass { eb, not_eb, undecided };
const char* to_string(EBClass c);

/// Holevo form is EB by construction. Otherwise the PPT test on the Choi
/// matrix: a negative partial-transpose eigenvalue below -psd means NOT_EB;
/// PPT with dim_in * dim_out <= 6 means EB; anything else is UNDECIDED.
EBClass is_entanglement_breaking(const Channel& c);

/// (Phi (x) id)(rho12) = sum_k x_k R_k (x) G_k, plus the Gram matrix of the
/// block row R = [(x_1 R_1)^(1/2) ... (x_K R_K)^(1/2)].
struct BipartiteDecomposition {
  std::vector<double> weights;                              // x_k
  std::vector<std::optional<DensityMatrix>> conditionals;   // G_k, empty when inactive
  std::vector<ComplexMatrix> root_blocks;                   // (x_k R_k)^(1/2), zero when inactive
  ComplexMatrix block_gram;                                 // R^dagger R, K*dim_out square
  std::vector<std::size_t> active_terms;                    // k with x_k > kInactiveWeight
};

inline constexpr double kInactiveWeight = 1e-12;

BipartiteDecomposition bipartite_decomposition(const HolevoEBChannel& phi, const DensityMatrix& rho12,
                                               std::size_t dim2);

/// sum_k x_k R_k (x) G_k over active terms.
ComplexMatrix reconstruct(const HolevoEBChannel& phi, const BipartiteDecomposition& d);

HolevoEBChannel random_eb_channel(std::size_t dim_in, std::size_t dim_out, std::size_t terms,
                                  std::uint64_t seed);
inline HolevoEBChannel random_eb_channel(std::size_t dim, std::size_t terms, std::uint64_t seed) {
  return random_eb_channel(dim, dim, terms, seed);
}

/// Kraus operators sliced from a Haar-like random isometry of shape
/// (kraus_rank * dim_out) x dim_in.
KrausChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t kraus_rank,
                            std::uint64_t seed);

}  // namespace ebcert
