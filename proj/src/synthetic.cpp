#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "edpdcs/ingestion.hpp"
#include "edpdcs/laplace.hpp"

namespace edpdcs {
namespace {

// Portable draws built on the sampler's 53-bit uniforms; the standard
// distributions are implementation-defined.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform_open(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double mean) { return -mean * std::log(uniform()); }
  double normal(double mean, double sd) {
    const double u1 = uniform();
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  LaplaceSampler rng_;
};

double clamp_round(double v, double lo, double hi) {
  return std::clamp(std::round(v), lo, hi);
}

}  // namespace

LoadedData synthetic_blood_like(std::uint64_t seed) {
  constexpr std::size_t kRows = 748;
  constexpr std::size_t kDonors = 178;
  Draws rng(seed);
  std::vector<double> values;
  values.reserve(kRows * 4);
  std::vector<std::vector<std::string>> labels;
  for (std::size_t i = 0; i < kRows; ++i) {
    // Interleave the two groups so row order carries no structure.
    const bool donor = (i * kDonors) / kRows != ((i + 1) * kDonors) / kRows;
    const double recency = clamp_round(rng.exponential(donor ? 4.5 : 11.0), 0.0, 74.0);
    const double frequency =
        clamp_round(1.0 + rng.exponential(donor ? 7.5 : 3.5), 1.0, 50.0);
    const double per_visit = rng.uniform(2.0, 5.0);
    const double time = clamp_round(
        recency + 2.0 + (frequency - 1.0) * per_visit + rng.exponential(10.0),
        2.0, 98.0);
    values.insert(values.end(), {recency, frequency, 250.0 * frequency, time});
    labels.push_back({donor ? "1" : "0"});
  }
  DatasetPreset p = blood_preset();
  std::vector<ColumnSpec> features(p.columns.begin(), p.columns.begin() + 4);
  return LoadedData{Dataset(std::move(values), 4, false, "synthetic:blood"),
                    std::move(features), std::move(labels), 0};
}

LoadedData synthetic_adult_like(std::uint64_t seed) {
  constexpr std::size_t kRows = 48842;
  static const char* const kRaces[] = {"White", "Black", "Asian-Pac-Islander",
                                       "Amer-Indian-Eskimo", "Other"};
  static const double kRaceCdf[] = {0.855, 0.951, 0.982, 0.992, 1.0};
  Draws rng(seed);
  std::vector<double> values;
  values.reserve(kRows * 6);
  std::vector<std::vector<std::string>> labels;
  for (std::size_t i = 0; i < kRows; ++i) {
    const double age = clamp_round(rng.normal(38.6, 13.7), 17.0, 90.0);
    const double fnlwgt =
        clamp_round(std::exp(rng.normal(12.0, 0.5)), 12285.0, 1490400.0);
    const double education = clamp_round(rng.normal(10.1, 2.6), 1.0, 16.0);
    double gain = 0.0;
    if (rng.bernoulli(0.005)) {
      gain = 99999.0;
    } else if (rng.bernoulli(0.078)) {
      gain = clamp_round(std::exp(rng.normal(8.5, 1.0)), 114.0, 41310.0);
    }
    const double loss =
        rng.bernoulli(0.047) ? clamp_round(rng.normal(1870.0, 370.0), 155.0, 4356.0) : 0.0;
    const double hours =
        rng.bernoulli(0.47) ? 40.0 : clamp_round(rng.normal(41.0, 13.0), 1.0, 99.0);
    values.insert(values.end(), {age, fnlwgt, education, gain, loss, hours});
    const double u = rng.uniform();
    std::size_t race = 0;
    while (u > kRaceCdf[race]) ++race;
    labels.push_back({kRaces[race]});
  }
  std::vector<ColumnSpec> features;
  for (const auto& c : adult_preset().columns) {
    if (c.role == ColumnRole::kFeature) features.push_back(c);
  }
  return LoadedData{Dataset(std::move(values), 6, false, "synthetic:adult"),
                    std::move(features), std::move(labels), 0};
}

}  // namespace edpdcs
