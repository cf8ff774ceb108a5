#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hamsplit/index_core.hpp"
#include "hamsplit/models.hpp"

namespace hamsplit {

/// |1 - e^{i h Omega}| = 2 |sin(h Omega / 2)|
double small_divisor(double h, double Omega);

struct EnumerationOptions {
  std::size_t budget = 10'000'000;
  double dedup_tol = 1e-12;
  /// Return what was enumerated instead of throwing BudgetExceeded.
  bool allow_partial = false;
};

/// Number of multisets of size r drawn from n items, saturating at SIZE_MAX.
std::size_t multiset_count(std::size_t n, int r);

/// Positions of the modes with |a| <= K.
std::vector<std::size_t> modes_within(const IndexSet& set, int K);

/// Visits every canonical multi-index of degree r over the given mode
/// positions in lexicographic order. The visitor returns false to stop.
void for_each_multi_index(std::span<const std::size_t> modes, int r,
                          const std::function<bool(const MultiIndex&)>& visit);

struct OmegaClass {
  double omega = 0.0;
  MultiIndex representative;  ///< lexicographically first member
  std::size_t members = 0;
};

/// Distinct Omega values over Z_K^r minus A_K^r, sorted ascending.
struct OmegaClassTable {
  int r = 0;
  int K = 0;
  std::vector<OmegaClass> classes;
  std::size_t scanned = 0;
  bool partial = false;
  /// Non-action multi-indices with |Omega| <= dedup_tol, e.g. ((-a,+),(a,-))
  /// when omega_{-a} = omega_a.
  std::size_t zero_omega_count = 0;
  std::vector<MultiIndex> zero_omega_examples;
};

OmegaClassTable build_omega_classes(std::span<const double> omega, const IndexSet& set, int r, int K,
                                    const EnumerationOptions& options = {});
OmegaClassTable build_omega_classes(const FrequencyModel& model, int r, int K,
                                    const EnumerationOptions& options = {});

/// Omega values of all distinct non-action classes, found by running over
/// every ordered r-tuple of Z_K^r. Brute-force reference for small r, K.
std::vector<double> naive_class_omegas(std::span<const double> omega, const IndexSet& set, int r, int K);

struct DivisorReport {
  int r = 0;
  int K = 0;
  double h = 0.0;
  double alpha_star = 0.0;
  /// min over non-action classes of K^alpha |1 - e^{i h Omega}| / h
  double gamma_star_min = 0.0;
  MultiIndex argmin;
  double argmin_omega = 0.0;
  std::size_t classes_scanned = 0;
  /// Non-action classes with Omega = 0 (within tolerance).
  std::size_t zero_omega_count = 0;
  /// Same minimum with the zero-Omega classes left out.
  double gamma_star_min_nonzero = 0.0;
  MultiIndex argmin_nonzero;
};

DivisorReport certify_hypothesis1(const FrequencyModel& model, int r, int K, double h, double alpha_star,
                                  const EnumerationOptions& options = {});

/// 2 pi / |omega_b - omega_a|; throws DivisionDegenerate when they coincide.
double find_resonant_h(const FrequencyModel& model, const Point& a, const Point& b);
double find_resonant_h(const FrequencyModel& model, int a, int b);

struct ResonantPair {
  Point a;
  Point b;
  double h = 0.0;
};

/// Pairs a < b whose resonant step 2 pi / |omega_b - omega_a| lies closest to
/// target, best first.
std::vector<ResonantPair> locate_resonant_pairs(const FrequencyModel& model, double target, std::size_t count);

struct ScanSample {
  double h = 0.0;
  double min_divisor = 0.0;
  MultiIndex argmin;
  bool flagged = false;
};

struct ScanOptions {
  std::uint64_t seed = 1;
  /// Leave out the Omega = 0 non-action classes.
  bool exclude_zero_omega = false;
  EnumerationOptions enumeration{};
};

struct ScanResult {
  int r = 0;
  int K = 0;
  double h_max = 0.0;
  double alpha_star = 0.0;
  double gamma_star = 0.0;
  std::vector<ScanSample> samples;  ///< sorted by h
  double flagged_fraction = 0.0;
  double standard_error = 0.0;
  /// [first, last] sampled h of each run of consecutive flagged samples
  std::vector<std::pair<double, double>> flagged_intervals;
  std::size_t classes = 0;
};

/// Monte-Carlo estimate of the measure of h in (0, h_max] violating
/// |1 - e^{i h Omega(j)}| >= h gamma / K^alpha for some non-action class.
ScanResult scan_h(const FrequencyModel& model, int r, int K, double h_max, double alpha_star, double gamma_star,
                  std::size_t n_samples, const ScanOptions& options = {});

/// CSV with header h,min_divisor,argmin_class,flagged.
void write_scan_csv(std::ostream& out, const ScanResult& scan, const IndexSet& set);

}  // namespace hamsplit
