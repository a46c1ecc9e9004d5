#pragma once

// Synthetic dataset families with known ground truth. Every generator is a
// pure function of its parameters and seed: one Rng drives all draws, in the
// documented per-row order, so outputs are bit-identical across runs.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/rng.hpp"

namespace relieve {

struct GroundTruth {
  std::vector<std::string> relevant;
  std::vector<std::string> irrelevant;
};

struct SynthResult {
  Dataset data;
  GroundTruth truth;
};

namespace detail {

inline FeatureSchema nominal_feature(std::string name, std::vector<std::string> sorted_values) {
  FeatureSchema fs;
  fs.name = std::move(name);
  fs.kind = FeatureKind::kNominal;
  fs.values = std::move(sorted_values);
  return fs;
}

inline std::vector<std::string> binary_values() { return {"0", "1"}; }

// Symbols "0".."k-1" in lexicographic order plus a map numeric -> code.
struct SymbolSet {
  std::vector<std::string> sorted;
  std::vector<int> code_of;  // code_of[numeric value] = index into sorted
};

inline SymbolSet numeric_symbols(int k) {
  SymbolSet s;
  std::vector<std::string> raw;
  raw.reserve(static_cast<std::size_t>(k));
  for (int v = 0; v < k; ++v) raw.push_back(std::to_string(v));
  s.sorted = raw;
  std::sort(s.sorted.begin(), s.sorted.end());
  s.code_of.resize(static_cast<std::size_t>(k));
  for (int v = 0; v < k; ++v) {
    const auto it = std::lower_bound(s.sorted.begin(), s.sorted.end(), raw[static_cast<std::size_t>(v)]);
    s.code_of[static_cast<std::size_t>(v)] = static_cast<int>(it - s.sorted.begin());
  }
  return s;
}

}  // namespace detail

// Class is the sum of the first `important` feature values, modulo p.
// Features I1..I<important> are relevant by construction; R1..R<random>
// are i.i.d. uniform noise. Draw order per row: I's, then R's.
inline SynthResult gen_modulo(int p, int important, int random_features, std::size_t n,
                              std::uint64_t seed) {
  if (p < 2) throw UsageError("gen modulo: p must be at least 2");
  if (important < 1) throw UsageError("gen modulo: need at least one important feature");
  if (random_features < 0) throw UsageError("gen modulo: random feature count may not be negative");
  if (n == 0) throw UsageError("gen modulo: need at least one instance");

  const auto sym = detail::numeric_symbols(p);
  SynthResult r;
  Dataset& d = r.data;
  d.name = "modulo-" + std::to_string(p) + "-" + std::to_string(important);
  d.class_values = sym.sorted;
  for (int f = 0; f < important; ++f) {
    const std::string nm = "I" + std::to_string(f + 1);
    d.schema.push_back(detail::nominal_feature(nm, sym.sorted));
    r.truth.relevant.push_back(nm);
  }
  for (int f = 0; f < random_features; ++f) {
    const std::string nm = "R" + std::to_string(f + 1);
    d.schema.push_back(detail::nominal_feature(nm, sym.sorted));
    r.truth.irrelevant.push_back(nm);
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Cell> row(d.schema.size());
    int sum = 0;
    for (int f = 0; f < important; ++f) {
      const int v = static_cast<int>(rng.uniform_int(0, p - 1));
      sum += v;
      row[static_cast<std::size_t>(f)].value = sym.code_of[static_cast<std::size_t>(v)];
    }
    for (int f = 0; f < random_features; ++f) {
      const int v = static_cast<int>(rng.uniform_int(0, p - 1));
      row[static_cast<std::size_t>(important + f)].value = sym.code_of[static_cast<std::size_t>(v)];
    }
    d.rows.push_back(std::move(row));
    d.labels.push_back(sym.code_of[static_cast<std::size_t>(sum % p)]);
  }
  check_valid(d);
  return r;
}

namespace detail {

inline int corral_class(int a0, int a1, int b0, int b1) { return ((a0 & a1) | (b0 & b1)); }

inline GroundTruth corral_truth() {
  return GroundTruth{{"A0", "A1", "B0", "B1"}, {"C", "I"}};
}

inline Dataset corral_shell() {
  Dataset d;
  d.name = "corral";
  d.class_values = binary_values();
  for (const char* nm : {"A0", "A1", "B0", "B1", "C", "I"})
    d.schema.push_back(nominal_feature(nm, binary_values()));
  return d;
}

}  // namespace detail

// Boolean target (A0 and A1) or (B0 and B1). C agrees with the class with
// probability 0.75 (independently per row), I is uniform noise. Draw order
// per row: A0, A1, B0, B1, the C-agreement coin, then I.
inline SynthResult gen_corral(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("gen corral: need at least one instance");
  SynthResult r;
  r.truth = detail::corral_truth();
  Dataset& d = r.data;
  d = detail::corral_shell();

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int a0 = static_cast<int>(rng.uniform_int(0, 1));
    const int a1 = static_cast<int>(rng.uniform_int(0, 1));
    const int b0 = static_cast<int>(rng.uniform_int(0, 1));
    const int b1 = static_cast<int>(rng.uniform_int(0, 1));
    const int cls = detail::corral_class(a0, a1, b0, b1);
    const int c = rng.bernoulli(0.75) ? cls : 1 - cls;
    const int irr = static_cast<int>(rng.uniform_int(0, 1));
    d.rows.push_back({Cell{double(a0)}, Cell{double(a1)}, Cell{double(b0)}, Cell{double(b1)},
                      Cell{double(c)}, Cell{double(irr)}});
    d.labels.push_back(cls);
  }
  check_valid(d);
  return r;
}

// Canonical 64-row expansion: the 16 configurations of the defining bits
// (A0 slowest .. B1 fastest), each expanded to four rows whose (C, I) pairs
// realize the exact 0.75 C-agreement rate and a balanced I. The lone
// C-disagreeing row alternates its I value with the configuration index so
// neither I value is tied to disagreement.
inline SynthResult gen_corral_exhaustive() {
  SynthResult r;
  r.truth = detail::corral_truth();
  Dataset& d = r.data;
  d = detail::corral_shell();

  for (int base = 0; base < 16; ++base) {
    const int a0 = (base >> 3) & 1;
    const int a1 = (base >> 2) & 1;
    const int b0 = (base >> 1) & 1;
    const int b1 = base & 1;
    const int cls = detail::corral_class(a0, a1, b0, b1);
    const int x = base & 1;
    const int quad[4][2] = {{cls, 0}, {cls, 1}, {cls, x}, {1 - cls, 1 - x}};
    for (const auto& ci : quad) {
      d.rows.push_back({Cell{double(a0)}, Cell{double(a1)}, Cell{double(b0)}, Cell{double(b1)},
                        Cell{double(ci[0])}, Cell{double(ci[1])}});
      d.labels.push_back(cls);
    }
  }
  check_valid(d);
  return r;
}

namespace detail {

// Seven-segment display, segments numbered by position: I1 upper-left,
// I2 upper-right, I3 top, I4 middle, I5 lower-left, I6 lower-right,
// I7 bottom. led_segments[digit][segment].
inline const std::array<std::array<int, 7>, 10>& led_segments() {
  static const std::array<std::array<int, 7>, 10> table = {{
      {1, 1, 1, 0, 1, 1, 1},  // 0
      {0, 1, 0, 0, 0, 1, 0},  // 1
      {0, 1, 1, 1, 1, 0, 1},  // 2
      {0, 1, 1, 1, 0, 1, 1},  // 3
      {1, 1, 0, 1, 0, 1, 0},  // 4
      {1, 0, 1, 1, 0, 1, 1},  // 5
      {1, 0, 1, 1, 1, 1, 1},  // 6
      {0, 1, 1, 0, 0, 1, 0},  // 7
      {1, 1, 1, 1, 1, 1, 1},  // 8
      {1, 1, 1, 1, 0, 1, 1},  // 9
  }};
  return table;
}

}  // namespace detail

// Ten-digit display recognition. Each of the 7 segment features is negated
// independently with probability `noise`; `irrelevant` (0 or 17) uniform
// binary features are appended. Draw order per row: digit, the 7 noise
// coins, then the irrelevant features.
inline SynthResult gen_led(std::size_t n, int irrelevant, double noise, std::uint64_t seed) {
  if (n == 0) throw UsageError("gen led: need at least one instance");
  if (irrelevant != 0 && irrelevant != 17)
    throw UsageError("gen led: irrelevant feature count must be 0 or 17");
  if (noise < 0.0 || noise > 1.0) throw UsageError("gen led: noise must be in [0, 1]");

  const auto digits = detail::numeric_symbols(10);
  SynthResult r;
  Dataset& d = r.data;
  d.name = irrelevant == 0 ? "led7" : "led24";
  d.class_values = digits.sorted;
  for (int s = 1; s <= 7; ++s) {
    const std::string nm = "I" + std::to_string(s);
    d.schema.push_back(detail::nominal_feature(nm, detail::binary_values()));
    r.truth.relevant.push_back(nm);
  }
  for (int f = 1; f <= irrelevant; ++f) {
    const std::string nm = "R" + std::to_string(f);
    d.schema.push_back(detail::nominal_feature(nm, detail::binary_values()));
    r.truth.irrelevant.push_back(nm);
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int digit = static_cast<int>(rng.uniform_int(0, 9));
    std::vector<Cell> row(d.schema.size());
    for (int s = 0; s < 7; ++s) {
      int bit = detail::led_segments()[static_cast<std::size_t>(digit)][static_cast<std::size_t>(s)];
      if (rng.bernoulli(noise)) bit = 1 - bit;
      row[static_cast<std::size_t>(s)].value = bit;
    }
    for (int f = 0; f < irrelevant; ++f)
      row[static_cast<std::size_t>(7 + f)].value = static_cast<double>(rng.uniform_int(0, 1));
    d.rows.push_back(std::move(row));
    d.labels.push_back(digits.code_of[static_cast<std::size_t>(digit)]);
  }
  check_valid(d);
  return r;
}

namespace detail {

inline constexpr std::array<int, 6> monk_cardinalities = {3, 3, 2, 3, 4, 2};

inline int monk_class(int which, const std::array<int, 6>& a) {
  // Attribute values are 1-based.
  if (which == 1) return (a[0] == a[1] || a[4] == 1) ? 1 : 0;
  return ((a[4] == 3 && a[3] == 1) || (a[4] != 4 && a[1] != 3)) ? 1 : 0;  // Monk-3
}

inline GroundTruth monk_truth(int which) {
  if (which == 1) return GroundTruth{{"A1", "A2", "A5"}, {"A3", "A4", "A6"}};
  return GroundTruth{{"A2", "A4", "A5"}, {"A1", "A3", "A6"}};
}

inline Dataset monk_shell(int which) {
  Dataset d;
  d.name = "monk" + std::to_string(which);
  d.class_values = binary_values();
  for (int f = 0; f < 6; ++f) {
    std::vector<std::string> vals;
    for (int v = 1; v <= monk_cardinalities[static_cast<std::size_t>(f)]; ++v)
      vals.push_back(std::to_string(v));
    d.schema.push_back(nominal_feature("A" + std::to_string(f + 1), std::move(vals)));
  }
  return d;
}

inline void monk_validate(int which, double noise) {
  if (which == 2)
    throw UsageError("gen monk: Monk-2 does not contain unimportant features; use 1 or 3");
  if (which != 1 && which != 3) throw UsageError("gen monk: which must be 1 or 3");
  if (noise < 0.0 || noise > 1.0) throw UsageError("gen monk: noise must be in [0, 1]");
}

}  // namespace detail

// Six nominal attributes with cardinalities (3,3,2,3,4,2). Monk-1 target:
// A1 = A2 or A5 = 1. Monk-3 target: (A5 = 3 and A4 = 1) or (A5 != 4 and
// A2 != 3); its conventional noise level is 5% flipped class labels.
// Draw order per row: A1..A6, then the noise coin.
inline SynthResult gen_monk(int which, std::size_t n, double noise, std::uint64_t seed) {
  detail::monk_validate(which, noise);
  if (n == 0) throw UsageError("gen monk: need at least one instance");

  SynthResult r;
  r.truth = detail::monk_truth(which);
  Dataset& d = r.data;
  d = detail::monk_shell(which);

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int, 6> a{};
    std::vector<Cell> row(6);
    for (int f = 0; f < 6; ++f) {
      a[static_cast<std::size_t>(f)] = static_cast<int>(
          rng.uniform_int(1, detail::monk_cardinalities[static_cast<std::size_t>(f)]));
      row[static_cast<std::size_t>(f)].value = a[static_cast<std::size_t>(f)] - 1;
    }
    int cls = detail::monk_class(which, a);
    if (rng.bernoulli(noise)) cls = 1 - cls;
    d.rows.push_back(std::move(row));
    d.labels.push_back(cls);
  }
  check_valid(d);
  return r;
}

// All 432 attribute configurations, A1 slowest .. A6 fastest. Class noise
// (label flips) is applied after enumeration, one coin per row.
inline SynthResult gen_monk_exhaustive(int which, double noise, std::uint64_t seed) {
  detail::monk_validate(which, noise);

  SynthResult r;
  r.truth = detail::monk_truth(which);
  Dataset& d = r.data;
  d = detail::monk_shell(which);

  Rng rng(seed);
  std::array<int, 6> a{};
  const auto& card = detail::monk_cardinalities;
  for (a[0] = 1; a[0] <= card[0]; ++a[0])
    for (a[1] = 1; a[1] <= card[1]; ++a[1])
      for (a[2] = 1; a[2] <= card[2]; ++a[2])
        for (a[3] = 1; a[3] <= card[3]; ++a[3])
          for (a[4] = 1; a[4] <= card[4]; ++a[4])
            for (a[5] = 1; a[5] <= card[5]; ++a[5]) {
              std::vector<Cell> row(6);
              for (int f = 0; f < 6; ++f)
                row[static_cast<std::size_t>(f)].value = a[static_cast<std::size_t>(f)] - 1;
              int cls = detail::monk_class(which, a);
              if (rng.bernoulli(noise)) cls = 1 - cls;
              d.rows.push_back(std::move(row));
              d.labels.push_back(cls);
            }
  check_valid(d);
  return r;
}

}  // namespace relieve
