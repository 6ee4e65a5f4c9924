#include "curvpdc/fock.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "json.hpp"

namespace curvpdc::fock {

namespace {

bool index_less(const Entry& a, const Entry& b) { return a.index < b.index; }

void check_cutoffs(int cutoff_s, int cutoff_i) {
  if (cutoff_s < 0 || cutoff_i < 0) {
    throw InvalidArgument(fmt::format("cutoffs must be non-negative, got ({}, {})", cutoff_s, cutoff_i));
  }
}

}  // namespace

TwoModeState::TwoModeState(int cutoff_s, int cutoff_i) : cutoff_s_(cutoff_s), cutoff_i_(cutoff_i) {
  check_cutoffs(cutoff_s, cutoff_i);
}

TwoModeState::TwoModeState(int cutoff_s, int cutoff_i, std::vector<Entry> sorted_entries)
    : cutoff_s_(cutoff_s), cutoff_i_(cutoff_i), entries_(std::move(sorted_entries)) {}

TwoModeState TwoModeState::from_entries(int cutoff_s, int cutoff_i, std::vector<Entry> entries,
                                        double drop_threshold) {
  check_cutoffs(cutoff_s, cutoff_i);
  for (const auto& e : entries) {
    if (e.index.n_s < 0 || e.index.n_i < 0 || e.index.n_s > cutoff_s || e.index.n_i > cutoff_i) {
      throw InvalidArgument(fmt::format("index ({}, {}) outside cutoffs ({}, {})", e.index.n_s,
                                        e.index.n_i, cutoff_s, cutoff_i));
    }
  }
  if (!std::is_sorted(entries.begin(), entries.end(), index_less)) {
    std::stable_sort(entries.begin(), entries.end(), index_less);
  }
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().amplitude += e.amplitude;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [drop_threshold](const Entry& e) {
    return e.amplitude == Complex{} || std::abs(e.amplitude) <= drop_threshold;
  });
  return TwoModeState(cutoff_s, cutoff_i, std::move(merged));
}

Complex TwoModeState::amplitude(FockIndex index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, const FockIndex& i) { return e.index < i; });
  if (it != entries_.end() && it->index == index) return it->amplitude;
  return {};
}

double TwoModeState::norm_squared() const {
  long double sum = 0.0L;
  for (const auto& e : entries_) sum += std::norm(e.amplitude);
  return static_cast<double>(sum);
}

double TwoModeState::norm() const { return std::sqrt(norm_squared()); }

TwoModeState TwoModeState::scaled(Complex factor) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.amplitude *= factor;
  std::erase_if(out, [](const Entry& e) { return e.amplitude == Complex{}; });
  return TwoModeState(cutoff_s_, cutoff_i_, std::move(out));
}

TwoModeState TwoModeState::embedded(int cutoff_s, int cutoff_i) const {
  if (cutoff_s < cutoff_s_ || cutoff_i < cutoff_i_) {
    throw InvalidArgument(fmt::format("cannot embed cutoffs ({}, {}) into smaller ({}, {})", cutoff_s_,
                                      cutoff_i_, cutoff_s, cutoff_i));
  }
  return TwoModeState(cutoff_s, cutoff_i, entries_);
}

TwoModeState TwoModeState::pruned(double drop_threshold) const {
  std::vector<Entry> out = entries_;
  std::erase_if(out, [drop_threshold](const Entry& e) { return std::abs(e.amplitude) <= drop_threshold; });
  return TwoModeState(cutoff_s_, cutoff_i_, std::move(out));
}

TwoModeState basis_state(int n_s, int n_i, int cutoff_s, int cutoff_i) {
  check_cutoffs(cutoff_s, cutoff_i);
  if (n_s < 0 || n_i < 0 || n_s > cutoff_s || n_i > cutoff_i) {
    throw InvalidArgument(
        fmt::format("basis state ({}, {}) outside cutoffs ({}, {})", n_s, n_i, cutoff_s, cutoff_i));
  }
  return TwoModeState::from_entries(cutoff_s, cutoff_i, {{{n_s, n_i}, Complex{1.0, 0.0}}});
}

// Shifting one coordinate by a constant keeps lexicographic order, so both
// ladder operators map sorted entries to sorted entries.
TwoModeState apply_annihilation(const TwoModeState& state, Mode mode) {
  std::vector<Entry> out;
  out.reserve(state.size());
  for (const auto& e : state.entries()) {
    int n = mode == Mode::signal ? e.index.n_s : e.index.n_i;
    if (n == 0) continue;
    Entry shifted = e;
    (mode == Mode::signal ? shifted.index.n_s : shifted.index.n_i) = n - 1;
    shifted.amplitude *= std::sqrt(static_cast<double>(n));
    out.push_back(shifted);
  }
  return TwoModeState::from_entries(state.cutoff_s(), state.cutoff_i(), std::move(out));
}

LadderResult apply_creation(const TwoModeState& state, Mode mode, double leakage_bound) {
  const int cutoff = state.cutoff(mode);
  std::vector<Entry> out;
  out.reserve(state.size());
  double dropped = 0.0;
  for (const auto& e : state.entries()) {
    int n = mode == Mode::signal ? e.index.n_s : e.index.n_i;
    if (n == cutoff) {
      dropped += std::norm(e.amplitude);
      continue;
    }
    Entry shifted = e;
    (mode == Mode::signal ? shifted.index.n_s : shifted.index.n_i) = n + 1;
    shifted.amplitude *= std::sqrt(static_cast<double>(n + 1));
    out.push_back(shifted);
  }
  LadderResult result{TwoModeState::from_entries(state.cutoff_s(), state.cutoff_i(), std::move(out)),
                      dropped, dropped > leakage_bound};
  return result;
}

Complex inner_product(const TwoModeState& a, const TwoModeState& b) {
  // Merge walk over two sorted entry lists.
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  long double re = 0.0L;
  long double im = 0.0L;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index < eb[j].index) {
      ++i;
    } else if (eb[j].index < ea[i].index) {
      ++j;
    } else {
      Complex term = std::conj(ea[i].amplitude) * eb[j].amplitude;
      re += term.real();
      im += term.imag();
      ++i;
      ++j;
    }
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

double fidelity(const TwoModeState& a, const TwoModeState& b) {
  double na = a.norm_squared();
  double nb = b.norm_squared();
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("fidelity of a zero state is undefined");
  return std::norm(inner_product(a, b)) / (na * nb);
}

TwoModeState normalize(const TwoModeState& state) {
  double n = state.norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero state");
  return state.scaled(Complex{1.0 / n, 0.0});
}

std::string to_json(const TwoModeState& state) {
  std::string out = fmt::format("{{\"cutoff_s\": {}, \"cutoff_i\": {}, \"amplitudes\": [", state.cutoff_s(),
                                state.cutoff_i());
  bool first = true;
  for (const auto& e : state.entries()) {
    out += fmt::format("{}[{}, {}, {:.17g}, {:.17g}]", first ? "" : ", ", e.index.n_s, e.index.n_i,
                       e.amplitude.real(), e.amplitude.imag());
    first = false;
  }
  out += "]}";
  return out;
}

TwoModeState state_from_json(std::string_view text) {
  try {
    auto doc = nlohmann::json::parse(text);
    int cutoff_s = doc.at("cutoff_s").get<int>();
    int cutoff_i = doc.at("cutoff_i").get<int>();
    std::vector<Entry> entries;
    for (const auto& row : doc.at("amplitudes")) {
      if (!row.is_array() || row.size() != 4) throw InvalidArgument("amplitude rows must be [n_s, n_i, re, im]");
      entries.push_back({{row[0].get<int>(), row[1].get<int>()},
                         Complex{row[2].get<double>(), row[3].get<double>()}});
    }
    return TwoModeState::from_entries(cutoff_s, cutoff_i, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(fmt::format("malformed state JSON: {}", e.what()));
  }
}

}  // namespace curvpdc::fock
