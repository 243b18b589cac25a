#include "pam/path_combinatorics.hpp"

#include <algorithm>
#include <functional>

#include "pam/errors.hpp"

namespace pam {
namespace {

std::string at_index(const char* clause, int i) {
  return std::string(clause) + " (i=" + std::to_string(i) + ")";
}

}  // namespace

std::optional<std::string> exponent_violation(std::span<const int> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return "n >= 1";
  if (n == 1) {
    if (a[0] != 1) return "A_1 = {(1)}";
    return std::nullopt;
  }
  if (a[0] != 1 && a[0] != 2) return "a_1 in {1,2}";
  if (a[n - 1] != 0 && a[n - 1] != 1) return "a_n in {0,1}";
  for (int j = 1; j < n - 1; ++j) {
    if (a[j] < 0 || a[j] > 2) return at_index("a_j in {0,1,2}", j + 1);
  }
  int partial = 0;
  for (int i = 1; i <= n - 1; ++i) {
    partial += a[i - 1];
    if (partial != i && partial != i + 1) {
      return at_index("partial sum a_1+..+a_i in {i,i+1}", i);
    }
  }
  if (partial + a[n - 1] != n) return "a_1+..+a_n = n";
  for (int i = 2; i <= n - 2; ++i) {
    const int s = a[i - 1] + a[i];
    if (s < 1 || s > 3) return at_index("a_i+a_{i+1} in {1,2,3}", i);
  }
  const int head = a[0] + a[1];
  if (head != 2 && head != 3) return "a_1+a_2 in {2,3}";
  const int tail = a[n - 2] + a[n - 1];
  if (tail != 1 && tail != 2) return "a_{n-1}+a_n in {1,2}";
  return std::nullopt;
}

ExponentVector::ExponentVector(std::vector<int> a) : a_(std::move(a)) {
  if (auto bad = exponent_violation(a_)) {
    throw ValidationError("ExponentVector: violated " + *bad);
  }
}

std::string ExponentVector::digits() const {
  std::string s;
  s.reserve(a_.size());
  for (int v : a_) s.push_back(static_cast<char>('0' + v));
  return s;
}

LatticePath::LatticePath(std::vector<int> heights) : h_(std::move(heights)) {
  const int n = size();
  if (n == 0) throw ValidationError("LatticePath: empty path");
  if (h_[0] != 1) throw ValidationError("LatticePath: violated h_1 = 1");
  for (int k = 2; k <= n; ++k) {
    const int h = h_[k - 1];
    if (h != k - 1 && h != k) {
      throw ValidationError("LatticePath: violated h_k in {k-1,k} (k=" +
                            std::to_string(k) + ")");
    }
    const int step = h - h_[k - 2];
    if (step < 0 || step > 2) {
      throw ValidationError("LatticePath: violated step in {0,1,2} (k=" +
                            std::to_string(k) + ")");
    }
  }
}

std::vector<ExponentVector> enumerate_exponent_vectors(int n) {
  if (n < 1 || n > kMaxEnumerationSize) {
    throw SizeError("enumerate_exponent_vectors: n must be in [1, " +
                    std::to_string(kMaxEnumerationSize) + "]");
  }
  std::vector<std::vector<int>> level{{1}};
  for (int m = 1; m < n; ++m) {
    std::vector<std::vector<int>> next;
    next.reserve(level.size() * 2);
    for (const auto& a : level) {
      auto raised = a;
      raised.back() += 1;
      raised.push_back(0);
      next.push_back(std::move(raised));
      auto appended = a;
      appended.push_back(1);
      next.push_back(std::move(appended));
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(), std::greater<>());
  std::vector<ExponentVector> out;
  out.reserve(level.size());
  for (auto& a : level) out.emplace_back(std::move(a));
  return out;
}

LatticePath path_of(const ExponentVector& a) {
  const int n = a.size();
  std::vector<int> h(static_cast<std::size_t>(n));
  h[0] = 1;
  for (int k = 1; k < n; ++k) h[k] = h[k - 1] + 2 - a.at(k);
  return LatticePath(std::move(h));
}

ExponentVector exponent_of(const LatticePath& path) {
  const int n = path.size();
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  for (int k = 1; k <= n; ++k) {
    // The last point (n, n-1) sits on line n-1; (n, n) on line n.
    a[path.height(k) - 1] += 1;
  }
  return ExponentVector(std::move(a));
}

std::vector<int> diagonal_touch_points(const ExponentVector& a) {
  const auto path = path_of(a);
  std::vector<int> out;
  for (int i = 1; i <= a.size() - 1; ++i) {
    if (path.height(i + 1) == i + 1) out.push_back(i);
  }
  return out;
}

ExponentVector move_down(const ExponentVector& a, int i) {
  const auto touches = diagonal_touch_points(a);
  if (std::find(touches.begin(), touches.end(), i) == touches.end()) {
    throw PreconditionError("move_down: (" + std::to_string(i + 1) + "," +
                            std::to_string(i + 1) +
                            ") is not a diagonal point of the path");
  }
  auto v = a.values();
  v[i - 1] += 1;
  v[i] -= 1;
  return ExponentVector(std::move(v));
}

IdentitySides expand_and_verify_identity(std::span<const Rational> xs) {
  const int n = static_cast<int>(xs.size());
  if (n < 2 || n > 16) {
    throw SizeError("expand_and_verify_identity: n must be in [2, 16]");
  }
  for (const auto& x : xs) {
    if (x <= 0) throw DomainError("expand_and_verify_identity: x_i must be > 0");
  }
  IdentitySides sides;
  sides.lhs = xs[0];
  for (int k = 1; k < n; ++k) sides.lhs *= xs[k] + xs[k - 1];

  sides.rhs = 0;
  for (const auto& a : enumerate_exponent_vectors(n)) {
    Rational monomial = 1;
    for (int j = 0; j < n; ++j) {
      for (int p = 0; p < a.values()[j]; ++p) monomial *= xs[j];
    }
    sides.rhs += monomial;
  }
  return sides;
}

}  // namespace pam
