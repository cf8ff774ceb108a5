#include "hamsplit/index_core.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hamsplit {

int sup_norm(const Point& a) {
  int m = 0;
  for (int c : a) m = std::max(m, std::abs(c));
  return m;
}

std::string to_string(const Point& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(a[i]);
  }
  return s;
}

std::string to_string(IndexSetKind kind) {
  switch (kind) {
    case IndexSetKind::box: return "box";
    case IndexSetKind::shifted_box: return "shifted_box";
    case IndexSetKind::nonnegative_box: return "nonnegative_box";
    case IndexSetKind::sparse: return "sparse";
  }
  return "?";
}

IndexSetKind index_set_kind_from_string(const std::string& name) {
  if (name == "box") return IndexSetKind::box;
  if (name == "shifted_box") return IndexSetKind::shifted_box;
  if (name == "nonnegative_box") return IndexSetKind::nonnegative_box;
  if (name == "sparse") return IndexSetKind::sparse;
  throw std::invalid_argument("unknown index set kind '" + name + "'");
}

namespace {

// Visits [lo..hi]^d in lexicographic order.
template <class Visit>
void for_each_in_cube(int lo, int hi, int d, Visit&& visit) {
  Point a(static_cast<std::size_t>(d), lo);
  while (true) {
    visit(a);
    int i = d - 1;
    while (i >= 0 && a[static_cast<std::size_t>(i)] == hi) {
      a[static_cast<std::size_t>(i)] = lo;
      --i;
    }
    if (i < 0) return;
    ++a[static_cast<std::size_t>(i)];
  }
}

}  // namespace

IndexSet::IndexSet(IndexSetKind kind, int K, int d) : kind_(kind), K_(K), d_(d) {
  if (K < 1) throw std::invalid_argument("index set cutoff K must be >= 1");
  if (d < 1) throw std::invalid_argument("index set dimension d must be >= 1");

  switch (kind) {
    case IndexSetKind::box:
      for_each_in_cube(-K, K, d, [&](const Point& a) { modes_.push_back(a); });
      break;
    case IndexSetKind::shifted_box:
      for_each_in_cube(-K, K - 1, d, [&](const Point& a) { modes_.push_back(a); });
      break;
    case IndexSetKind::nonnegative_box:
      for_each_in_cube(0, K, d, [&](const Point& a) { modes_.push_back(a); });
      break;
    case IndexSetKind::sparse:
      for_each_in_cube(-K, K, d, [&](const Point& a) {
        long long weight = 1;
        for (int c : a) {
          weight *= 1 + std::abs(c);
          if (weight > K) return;
        }
        modes_.push_back(a);
      });
      break;
  }
}

std::optional<std::size_t> IndexSet::find(const Point& a) const {
  if (static_cast<int>(a.size()) != d_) return std::nullopt;
  auto it = std::lower_bound(modes_.begin(), modes_.end(), a);
  if (it == modes_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::size_t IndexSet::position(const Point& a) const {
  if (auto p = find(a)) return *p;
  throw std::invalid_argument("mode (" + hamsplit::to_string(a) + ") is not in the index set");
}

IndexSet build_index_set(IndexSetKind kind, int K, int d) { return IndexSet(kind, K, d); }

MultiIndex::MultiIndex(std::vector<SignedIndex> entries) : entries_(std::move(entries)) {
  for (const auto& j : entries_) {
    if (j.delta != 1 && j.delta != -1)
      throw std::invalid_argument("signed index delta must be +1 or -1");
  }
  std::sort(entries_.begin(), entries_.end());
}

MultiIndex MultiIndex::conjugate() const {
  std::vector<SignedIndex> e;
  e.reserve(entries_.size());
  for (const auto& j : entries_) e.push_back(j.conjugate());
  return MultiIndex(std::move(e));
}

int MultiIndex::count(const SignedIndex& j) const {
  auto [lo, hi] = std::equal_range(entries_.begin(), entries_.end(), j);
  return static_cast<int>(hi - lo);
}

MultiIndex MultiIndex::merged(const MultiIndex& other) const {
  MultiIndex out;
  out.entries_.reserve(entries_.size() + other.entries_.size());
  std::merge(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
             std::back_inserter(out.entries_));
  return out;
}

MultiIndex MultiIndex::without(const SignedIndex& j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j);
  if (it == entries_.end() || *it != j)
    throw std::invalid_argument("MultiIndex::without: entry not present");
  MultiIndex out;
  out.entries_.reserve(entries_.size() - 1);
  out.entries_.insert(out.entries_.end(), entries_.begin(), it);
  out.entries_.insert(out.entries_.end(), it + 1, entries_.end());
  return out;
}

std::string MultiIndex::to_string(const IndexSet& set) const {
  std::string s;
  for (const auto& j : entries_) {
    s += '(';
    s += hamsplit::to_string(set.mode(j.mode));
    s += j.delta > 0 ? ",+)" : ",-)";
  }
  return s;
}

double omega_of(const MultiIndex& j, std::span<const double> omega) {
  double sum = 0.0;
  for (const auto& e : j.entries()) {
    if (e.mode >= omega.size())
      throw std::invalid_argument("omega_of: mode outside the index set");
    sum += e.delta * omega[e.mode];
  }
  return sum;
}

bool is_action_class(const MultiIndex& j) {
  if (j.degree() % 2 != 0) return false;
  // Canonical order puts (a,-1) right before (a,+1), so a single sweep
  // balancing the two counts per mode is enough.
  auto e = j.entries();
  std::size_t i = 0;
  while (i < e.size()) {
    const std::size_t mode = e[i].mode;
    int balance = 0;
    while (i < e.size() && e[i].mode == mode) balance += e[i++].delta;
    if (balance != 0) return false;
  }
  return true;
}

}  // namespace hamsplit
