#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pam {

using Rational = boost::multiprecision::cpp_rational;

/// Returns a description of the first violated membership clause for A_n,
/// or nullopt when `a` belongs to A_n (n = a.size()). A_1 = {(1)}.
std::optional<std::string> exponent_violation(std::span<const int> a);

/// Multi-index a = (a_1, ..., a_n) of a monomial in the expansion of
/// S_n = x_1 (x_1 + x_2)(x_2 + x_3)...(x_{n-1} + x_n).
///
/// Construction validates membership in A_n; positions are 1-based in the
/// accessor to match the usual indexing of the expansion.
class ExponentVector {
 public:
  /// Throws ValidationError naming the violated clause.
  explicit ExponentVector(std::vector<int> a);

  int size() const noexcept { return static_cast<int>(a_.size()); }
  /// a_k for 1 <= k <= n.
  int at(int k) const { return a_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<int>& values() const noexcept { return a_; }
  /// Digit string, e.g. "2110".
  std::string digits() const;

  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

 private:
  std::vector<int> a_;
};

/// Lattice path through (k, h_k), k = 1..n, confined between the diagonal
/// and the diagonal shifted one unit down.
class LatticePath {
 public:
  /// Throws ValidationError naming the violated clause.
  explicit LatticePath(std::vector<int> heights);

  int size() const noexcept { return static_cast<int>(h_.size()); }
  int height(int k) const { return h_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<int>& heights() const noexcept { return h_; }

  friend bool operator==(const LatticePath&, const LatticePath&) = default;

 private:
  std::vector<int> h_;
};

inline constexpr int kMaxEnumerationSize = 24;

/// A_n in descending lexicographic order (for n = 4:
/// 2110, 2101, ..., 1111). Built by the inductive construction
/// A_{m+1} = {(a_1..a_{m-1}, a_m + 1, 0)} ∪ {(a_1..a_m, 1)}.
/// Throws SizeError unless 1 <= n <= 24.
std::vector<ExponentVector> enumerate_exponent_vectors(int n);

/// Segment k of the path rises 2 - a_k, starting at height 1.
LatticePath path_of(const ExponentVector& a);
/// Inverse of path_of; a_k counts the path points on horizontal line k.
ExponentVector exponent_of(const LatticePath& path);

/// Indices i (1 <= i <= n-1) such that the path passes through (i+1, i+1).
std::vector<int> diagonal_touch_points(const ExponentVector& a);

/// Moves the diagonal point (i+1, i+1) one unit down: a_i + 1, a_{i+1} - 1.
/// Throws PreconditionError when i is not a diagonal touch point.
ExponentVector move_down(const ExponentVector& a, int i);

struct IdentitySides {
  Rational lhs;  ///< x_1 Π_{k>=2} (x_k + x_{k-1})
  Rational rhs;  ///< Σ_{a ∈ A_n} Π x_j^{a_j}
  bool holds() const { return lhs == rhs; }
};

/// Evaluates both sides of the product-expansion identity exactly.
/// Requires 2 <= n <= 16 and every x_i > 0.
IdentitySides expand_and_verify_identity(std::span<const Rational> xs);

}  // namespace pam
