#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvpdc/common.hpp"

namespace curvpdc::fock {

struct FockIndex {
  int n_s = 0;
  int n_i = 0;

  friend auto operator<=>(const FockIndex&, const FockIndex&) = default;
};

struct Entry {
  FockIndex index;
  Complex amplitude;
};

/// Pure state on the truncated space {0..cutoff_s} x {0..cutoff_i}.
///
/// Amplitudes are stored sparsely, sorted lexicographically by (n_s, n_i).
/// Missing entries are zero. Values are immutable once built.
class TwoModeState {
 public:
  /// The zero vector on the given cutoffs.
  TwoModeState(int cutoff_s, int cutoff_i);

  /// Builds a state from unordered entries. Duplicate indices are summed,
  /// entries with |amplitude| <= drop_threshold are discarded afterwards
  /// (exact zeros are always discarded). Throws InvalidArgument when an
  /// index lies outside the cutoffs.
  static TwoModeState from_entries(int cutoff_s, int cutoff_i, std::vector<Entry> entries,
                                   double drop_threshold = 0.0);

  int cutoff_s() const { return cutoff_s_; }
  int cutoff_i() const { return cutoff_i_; }
  int cutoff(Mode mode) const { return mode == Mode::signal ? cutoff_s_ : cutoff_i_; }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Complex amplitude(FockIndex index) const;
  Complex amplitude(int n_s, int n_i) const { return amplitude(FockIndex{n_s, n_i}); }

  double norm_squared() const;
  double norm() const;

  TwoModeState scaled(Complex factor) const;

  /// Same amplitudes on larger (or equal) cutoffs.
  TwoModeState embedded(int cutoff_s, int cutoff_i) const;

  TwoModeState pruned(double drop_threshold) const;

 private:
  // Takes entries already sorted and free of duplicates.
  TwoModeState(int cutoff_s, int cutoff_i, std::vector<Entry> sorted_entries);

  int cutoff_s_;
  int cutoff_i_;
  std::vector<Entry> entries_;
};

struct LadderResult {
  TwoModeState state;
  /// Probability weight of the input components pushed past the cutoff.
  double dropped_norm = 0.0;
  /// True when dropped_norm exceeded the leakage bound passed to apply_creation.
  bool leakage_warning = false;
};

inline constexpr double kDefaultLeakageBound = 1e-12;

TwoModeState basis_state(int n_s, int n_i, int cutoff_s, int cutoff_i);

TwoModeState apply_annihilation(const TwoModeState& state, Mode mode);

LadderResult apply_creation(const TwoModeState& state, Mode mode,
                            double leakage_bound = kDefaultLeakageBound);

/// <a|b>, conjugate-linear in the first argument. Cutoffs may differ.
Complex inner_product(const TwoModeState& a, const TwoModeState& b);

/// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const TwoModeState& a, const TwoModeState& b);

/// Throws InvalidArgument on the zero state.
TwoModeState normalize(const TwoModeState& state);

/// JSON object {cutoff_s, cutoff_i, amplitudes: [[n_s, n_i, re, im], ...]},
/// rows sorted by (n_s, n_i), floats with 17 significant digits.
std::string to_json(const TwoModeState& state);

/// Inverse of to_json. Throws InvalidArgument on malformed input.
TwoModeState state_from_json(std::string_view text);

}  // namespace curvpdc::fock
