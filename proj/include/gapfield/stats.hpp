#pragma once

#include <cstdint>
#include <vector>

namespace gapfield {

struct LineFit {
    double slope{0.0};
    double intercept{0.0};
    double r_squared{0.0};
    int count{0};
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

double geometric_mean(const std::vector<double>& v);

struct Envelope {
    double lo;
    double hi;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Deterministic RNG for the seeded suites (splitmix-initialized xoshiro-style
/// generator would be overkill; a fixed-algorithm engine keeps reports
/// byte-stable across platforms).
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    uint64_t next();
    double uniform(double lo, double hi);

  private:
    uint64_t state_;
};

} // namespace gapfield
