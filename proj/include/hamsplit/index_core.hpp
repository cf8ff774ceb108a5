#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hamsplit {

/// A lattice point a in Z^d.
using Point = std::vector<int>;

/// |a| = max_i |a_i|
int sup_norm(const Point& a);

std::string to_string(const Point& a);

enum class IndexSetKind {
  box,              ///< [-K..K]^d
  shifted_box,      ///< [-K..K-1]^d, the collocation set of a 2K-point grid
  nonnegative_box,  ///< [0..K]^d
  sparse            ///< hyperbolic cross (1+|a_1|)...(1+|a_d|) <= K
};

std::string to_string(IndexSetKind kind);
IndexSetKind index_set_kind_from_string(const std::string& name);

/// Finite set N_K of lattice modes, stored in lexicographic order.
///
/// Positions into modes() are the mode identifiers used by SignedIndex and
/// by every coefficient vector over N_K.
class IndexSet {
 public:
  IndexSet(IndexSetKind kind, int K, int d);

  IndexSetKind kind() const noexcept { return kind_; }
  int cutoff() const noexcept { return K_; }
  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return modes_.size(); }

  const Point& mode(std::size_t position) const { return modes_.at(position); }
  std::span<const Point> modes() const noexcept { return modes_; }

  std::optional<std::size_t> find(const Point& a) const;
  /// Position of a; throws std::invalid_argument if a is not a member.
  std::size_t position(const Point& a) const;
  /// Convenience for d = 1.
  std::size_t position(int a) const { return position(Point{a}); }

  /// True for 1D shifted boxes, the sets the FFT path supports.
  bool fft_compatible() const noexcept {
    return kind_ == IndexSetKind::shifted_box && d_ == 1;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  IndexSetKind kind_;
  int K_;
  int d_;
  std::vector<Point> modes_;
};

IndexSet build_index_set(IndexSetKind kind, int K, int d);

/// j = (a, delta) in Z_K = N_K x {+1, -1}. delta = +1 selects xi_a and
/// delta = -1 selects eta_a.
struct SignedIndex {
  std::size_t mode = 0;  ///< position in the owning IndexSet
  int delta = 1;

  SignedIndex conjugate() const noexcept { return {mode, -delta}; }
  friend auto operator<=>(const SignedIndex&, const SignedIndex&) = default;
};

/// Multi-index (j_1, ..., j_r) kept in canonical (sorted) form, so that
/// indices equal up to a permutation compare equal.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<SignedIndex> entries);
  MultiIndex(std::initializer_list<SignedIndex> entries)
      : MultiIndex(std::vector<SignedIndex>(entries)) {}

  std::size_t degree() const noexcept { return entries_.size(); }
  std::span<const SignedIndex> entries() const noexcept { return entries_; }
  const SignedIndex& operator[](std::size_t i) const { return entries_[i]; }

  MultiIndex conjugate() const;
  /// Number of entries equal to j.
  int count(const SignedIndex& j) const;
  /// Canonical concatenation (monomial product z_j z_k).
  MultiIndex merged(const MultiIndex& other) const;
  /// Removes one occurrence of j; j must be present.
  MultiIndex without(const SignedIndex& j) const;

  std::string to_string(const IndexSet& set) const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<SignedIndex> entries_;
};

/// Omega(j) = delta_1 omega_{a_1} + ... + delta_r omega_{a_r}.
/// Throws std::invalid_argument if a mode is outside the frequency table.
double omega_of(const MultiIndex& j, std::span<const double> omega);

/// j in A_K^r: r even and every mode appears as often with +1 as with -1.
bool is_action_class(const MultiIndex& j);

}  // namespace hamsplit
