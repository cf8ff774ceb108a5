#include "hamsplit/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include "hamsplit/errors.hpp"

namespace hamsplit {

double small_divisor(double h, double Omega) { return 2.0 * std::abs(std::sin(h * Omega / 2.0)); }

std::size_t multiset_count(std::size_t n, int r) {
  // C(n + r - 1, r), computed incrementally with saturation.
  if (r <= 0) return 1;
  if (n == 0) return 0;
  long double c = 1.0L;
  for (int k = 1; k <= r; ++k) {
    c = c * static_cast<long double>(n + static_cast<std::size_t>(k) - 1) / k;
    if (c >= static_cast<long double>(std::numeric_limits<std::size_t>::max()))
      return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(std::llround(c));
}

std::vector<std::size_t> modes_within(const IndexSet& set, int K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < set.size(); ++k)
    if (sup_norm(set.mode(k)) <= K) out.push_back(k);
  return out;
}

void for_each_multi_index(std::span<const std::size_t> modes, int r,
                          const std::function<bool(const MultiIndex&)>& visit) {
  if (r < 1) throw std::invalid_argument("multi-index degree r must be >= 1");
  // Signed slots 2m (delta -1) and 2m+1 (delta +1) follow SignedIndex order.
  const std::size_t n = 2 * modes.size();
  if (n == 0) return;
  std::vector<std::size_t> slot(static_cast<std::size_t>(r), 0);
  std::vector<SignedIndex> entries(static_cast<std::size_t>(r));
  while (true) {
    for (std::size_t i = 0; i < slot.size(); ++i)
      entries[i] = {modes[slot[i] / 2], slot[i] % 2 ? 1 : -1};
    if (!visit(MultiIndex(entries))) return;
    // next nondecreasing sequence
    std::ptrdiff_t i = r - 1;
    while (i >= 0 && slot[static_cast<std::size_t>(i)] == n - 1) --i;
    if (i < 0) return;
    const std::size_t v = slot[static_cast<std::size_t>(i)] + 1;
    for (auto k = static_cast<std::size_t>(i); k < slot.size(); ++k) slot[k] = v;
  }
}

namespace {

void check_omega(std::span<const double> omega, const IndexSet& set) {
  if (omega.size() != set.size()) throw std::invalid_argument("frequency table does not match the index set");
}

}  // namespace

OmegaClassTable build_omega_classes(std::span<const double> omega, const IndexSet& set, int r, int K,
                                    const EnumerationOptions& options) {
  check_omega(omega, set);
  const auto modes = modes_within(set, K);
  const std::size_t total = multiset_count(2 * modes.size(), r);

  OmegaClassTable table;
  table.r = r;
  table.K = K;
  if (total > options.budget && !options.allow_partial)
    throw BudgetExceeded(0, "class enumeration needs " + std::to_string(total) + " multi-indices, budget is " +
                                std::to_string(options.budget));

  // (Omega, sequence number) of every non-action class.
  std::vector<std::pair<double, std::size_t>> values;
  std::size_t seq = 0;
  for_each_multi_index(modes, r, [&](const MultiIndex& j) {
    if (seq >= options.budget) {
      table.partial = true;
      return false;
    }
    const std::size_t s = seq++;
    if (is_action_class(j)) return true;
    const double w = omega_of(j, omega);
    if (std::abs(w) <= options.dedup_tol) {
      ++table.zero_omega_count;
      if (table.zero_omega_examples.size() < 16) table.zero_omega_examples.push_back(j);
    }
    values.emplace_back(w, s);
    return true;
  });
  table.scanned = seq;

  std::sort(values.begin(), values.end());
  struct Group {
    double omega;
    std::size_t first_seq;
    std::size_t members;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < values.size();) {
    // Chain within dedup_tol of the group's first value.
    std::size_t k = i;
    std::size_t first = values[i].second;
    while (k < values.size() && values[k].first - values[i].first <= options.dedup_tol) {
      first = std::min(first, values[k].second);
      ++k;
    }
    groups.push_back({values[i].first, first, k - i});
    i = k;
  }

  // Second pass recovers the representative multi-indices by sequence number.
  std::vector<std::pair<std::size_t, std::size_t>> wanted;  // (seq, group)
  wanted.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) wanted.emplace_back(groups[g].first_seq, g);
  std::sort(wanted.begin(), wanted.end());
  table.classes.resize(groups.size());
  std::size_t cursor = 0, s2 = 0;
  for_each_multi_index(modes, r, [&](const MultiIndex& j) {
    if (cursor == wanted.size()) return false;
    if (s2 == wanted[cursor].first) {
      const auto& g = groups[wanted[cursor].second];
      table.classes[wanted[cursor].second] = {g.omega, j, g.members};
      ++cursor;
    }
    ++s2;
    return true;
  });
  return table;
}

OmegaClassTable build_omega_classes(const FrequencyModel& model, int r, int K, const EnumerationOptions& options) {
  return build_omega_classes(model.omega(), model.index_set(), r, K, options);
}

std::vector<double> naive_class_omegas(std::span<const double> omega, const IndexSet& set, int r, int K) {
  check_omega(omega, set);
  const auto modes = modes_within(set, K);
  const std::size_t n = 2 * modes.size();
  std::set<MultiIndex> seen;
  std::vector<std::size_t> slot(static_cast<std::size_t>(r), 0);
  std::vector<SignedIndex> entries(static_cast<std::size_t>(r));
  while (true) {
    for (std::size_t i = 0; i < slot.size(); ++i)
      entries[i] = {modes[slot[i] / 2], slot[i] % 2 ? 1 : -1};
    MultiIndex j(entries);
    if (!is_action_class(j)) seen.insert(std::move(j));
    std::ptrdiff_t i = r - 1;
    while (i >= 0 && slot[static_cast<std::size_t>(i)] == n - 1) slot[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++slot[static_cast<std::size_t>(i)];
  }
  std::vector<double> out;
  out.reserve(seen.size());
  for (const auto& j : seen) out.push_back(omega_of(j, omega));
  std::sort(out.begin(), out.end());
  return out;
}

DivisorReport certify_hypothesis1(const FrequencyModel& model, int r, int K, double h, double alpha_star,
                                  const EnumerationOptions& options) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  const auto modes = modes_within(model.index_set(), K);
  const std::size_t total = multiset_count(2 * modes.size(), r);
  if (total > options.budget)
    throw BudgetExceeded(0, "class enumeration needs " + std::to_string(total) + " multi-indices, budget is " +
                                std::to_string(options.budget));

  DivisorReport rep;
  rep.r = r;
  rep.K = K;
  rep.h = h;
  rep.alpha_star = alpha_star;
  const double scale = std::pow(static_cast<double>(K), alpha_star) / h;
  double best = std::numeric_limits<double>::infinity();
  double best_nonzero = std::numeric_limits<double>::infinity();
  const auto omega = model.omega();

  for_each_multi_index(modes, r, [&](const MultiIndex& j) {
    ++rep.classes_scanned;
    if (is_action_class(j)) return true;
    const double w = omega_of(j, omega);
    const double g = scale * small_divisor(h, w);
    if (g < best) {
      best = g;
      rep.argmin = j;
      rep.argmin_omega = w;
    }
    if (std::abs(w) <= options.dedup_tol) {
      ++rep.zero_omega_count;
    } else if (g < best_nonzero) {
      best_nonzero = g;
      rep.argmin_nonzero = j;
    }
    return true;
  });
  rep.gamma_star_min = std::isfinite(best) ? best : 0.0;
  rep.gamma_star_min_nonzero = std::isfinite(best_nonzero) ? best_nonzero : 0.0;
  return rep;
}

double find_resonant_h(const FrequencyModel& model, const Point& a, const Point& b) {
  const auto& set = model.index_set();
  const double wa = model.omega(set.position(a));
  const double wb = model.omega(set.position(b));
  const double diff = wb - wa;
  if (std::abs(diff) <= 1e-14 * std::max(1.0, std::abs(wa)))
    throw DivisionDegenerate("omega_" + to_string(a) + " and omega_" + to_string(b) + " coincide");
  return 2.0 * std::numbers::pi / std::abs(diff);
}

double find_resonant_h(const FrequencyModel& model, int a, int b) {
  return find_resonant_h(model, Point{a}, Point{b});
}

std::vector<ResonantPair> locate_resonant_pairs(const FrequencyModel& model, double target, std::size_t count) {
  const auto& set = model.index_set();
  std::vector<ResonantPair> pairs;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t k = i + 1; k < set.size(); ++k) {
      const double diff = std::abs(model.omega(k) - model.omega(i));
      if (diff <= 1e-14) continue;
      pairs.push_back({set.mode(i), set.mode(k), 2.0 * std::numbers::pi / diff});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const ResonantPair& x, const ResonantPair& y) {
    return std::abs(x.h - target) < std::abs(y.h - target);
  });
  if (pairs.size() > count) pairs.resize(count);
  return pairs;
}

ScanResult scan_h(const FrequencyModel& model, int r, int K, double h_max, double alpha_star, double gamma_star,
                  std::size_t n_samples, const ScanOptions& options) {
  if (n_samples < 100) throw std::invalid_argument("scan_h needs at least 100 samples");
  if (!(h_max > 0.0)) throw std::invalid_argument("h_max must be positive");
  if (gamma_star < 0.0) throw std::invalid_argument("gamma_star must be nonnegative");

  const OmegaClassTable table = build_omega_classes(model, r, K, options.enumeration);
  std::vector<const OmegaClass*> classes;
  for (const auto& c : table.classes) {
    if (options.exclude_zero_omega && std::abs(c.omega) <= options.enumeration.dedup_tol) continue;
    classes.push_back(&c);
  }

  ScanResult res;
  res.r = r;
  res.K = K;
  res.h_max = h_max;
  res.alpha_star = alpha_star;
  res.gamma_star = gamma_star;
  res.classes = classes.size();

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double kpow = std::pow(static_cast<double>(K), alpha_star);
  res.samples.resize(n_samples);
  std::size_t flagged = 0;
  for (auto& s : res.samples) {
    // (0, h_max]: map [0,1) to (0,1].
    s.h = h_max * (1.0 - unif(rng));
    s.min_divisor = std::numeric_limits<double>::infinity();
    for (const auto* c : classes) {
      const double d = small_divisor(s.h, c->omega);
      if (d < s.min_divisor) {
        s.min_divisor = d;
        s.argmin = c->representative;
      }
    }
    s.flagged = s.min_divisor < s.h * gamma_star / kpow;
    flagged += s.flagged;
  }
  std::sort(res.samples.begin(), res.samples.end(), [](const ScanSample& a, const ScanSample& b) { return a.h < b.h; });

  const double n = static_cast<double>(n_samples);
  res.flagged_fraction = static_cast<double>(flagged) / n;
  res.standard_error = std::sqrt(res.flagged_fraction * (1.0 - res.flagged_fraction) / n);
  for (std::size_t i = 0; i < res.samples.size();) {
    if (!res.samples[i].flagged) {
      ++i;
      continue;
    }
    std::size_t k = i;
    while (k + 1 < res.samples.size() && res.samples[k + 1].flagged) ++k;
    res.flagged_intervals.emplace_back(res.samples[i].h, res.samples[k].h);
    i = k + 1;
  }
  return res;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan, const IndexSet& set) {
  out << "h,min_divisor,argmin_class,flagged\n";
  char buf[64];
  for (const auto& s : scan.samples) {
    std::snprintf(buf, sizeof buf, "%.16e", s.h);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.16e", s.min_divisor);
    // The class label contains commas, so it is quoted.
    out << buf << ",\"" << s.argmin.to_string(set) << "\"," << (s.flagged ? 1 : 0) << '\n';
  }
}

}  // namespace hamsplit
