#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stpfault/logical_matrix.hpp"

namespace stpfault {

/// A ⋉ B for one-hot-column matrices whose inner dimensions are equal or
/// one a multiple of the other. Other pairs throw UnsupportedDimensions.
/// The result keeps B's signature only when the inner dimensions agree.
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);

/// Left-to-right product of a chain.
LogicalMatrix stp_chain(std::initializer_list<LogicalMatrix> factors);

/// M ⋉ x for a vector whose dimension equals M.cols().
inline DeltaVector stp(const LogicalMatrix& m, const DeltaVector& x) { return m.apply(x); }

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b);

LogicalMatrix swap_matrix(std::size_t p, std::size_t q);
LogicalMatrix power_reduction_matrix(std::size_t p);
LogicalMatrix dummy_matrix(std::size_t p, std::size_t q);

/// (I_k ⊗ M) Φ_k without building the dense intermediate. When M has k·t
/// columns the result is the t-fold widened form, so that A ⋉ (M A B) = lift_reduce(M, k) A B
/// for A ∈ Δ_k and B ∈ Δ_t.
LogicalMatrix lift_reduce(const LogicalMatrix& m, std::size_t k);

/// M_1 ∏_{i≥2} [(I_k ⊗ M_i) Φ_k], so that M_1 A M_2 A ⋯ M_q A = M* A.
LogicalMatrix compose_repeated(std::span<const LogicalMatrix> ms, std::size_t k);
LogicalMatrix compose_repeated(std::initializer_list<LogicalMatrix> ms, std::size_t k);

/// Fix one named argument. The signature shrinks by that entry.
LogicalMatrix pin_argument(const LogicalMatrix& m, std::string_view name, const DeltaVector& value);

/// Same matrix over a permuted argument list (names must be a permutation).
LogicalMatrix reorder_arguments(const LogicalMatrix& m, std::span<const std::string> order);

/// Evaluate a signed matrix at named values; every argument must be given.
DeltaVector evaluate(const LogicalMatrix& m,
                     std::span<const std::pair<std::string_view, DeltaVector>> values);
DeltaVector evaluate(const LogicalMatrix& m,
                     std::initializer_list<std::pair<std::string_view, DeltaVector>> values);

/// Ordinary product of square transition matrices, a ∘ b (b applied first).
LogicalMatrix compose_square(const LogicalMatrix& a, const LogicalMatrix& b);

/// A^k for square A, by repeated squaring. A^0 is the identity.
LogicalMatrix matrix_power(const LogicalMatrix& a, std::size_t k);

/// Number of diagonal fixed points of a one-hot square matrix.
std::size_t trace(const LogicalMatrix& a);

/// Tr(A^k △ B^k): positions i where exactly one of A^k, B^k fixes i.
std::size_t diag_diff_trace(const LogicalMatrix& a, const LogicalMatrix& b, std::size_t k);

struct DiagonalDiff {
  std::size_t dim = 0;
  std::size_t mismatch_count = 0;
};

/// Memoized powers of one square matrix, local to one analysis call.
class PowerCache {
 public:
  explicit PowerCache(LogicalMatrix base);
  const LogicalMatrix& base() const noexcept { return base_; }
  const LogicalMatrix& power(std::size_t k);

 private:
  LogicalMatrix base_;
  std::map<std::size_t, LogicalMatrix> powers_;
};

std::size_t diag_diff_trace(PowerCache& a, PowerCache& b, std::size_t k);

}  // namespace stpfault
