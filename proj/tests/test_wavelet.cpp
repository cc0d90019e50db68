#include "doctest.h"
#include "eeg/wavelet.hpp"
#include "test_util.hpp"

#include <cmath>
#include <stdexcept>

using namespace eeg;
using namespace testutil;

TEST_CASE("perfect reconstruction on random signals") {
  for (std::size_t n : {256u, 512u, 513u, 1280u, 7680u}) {
    const auto x = white_noise(n, 128.0, n);
    const auto dec = wavelet::dwt_decompose(x);
    CHECK(dec.details.size() == 5);
    const auto rec = wavelet::dwt_reconstruct(dec);
    REQUIRE(rec.size() == n);
    CHECK(rel_l2(rec, x.samples) < 1e-10);
  }
}

TEST_CASE("single-stage round trip") {
  const auto x = white_noise(100, 128.0, 1);
  std::vector<double> ca, cd;
  wavelet::dwt_step(x.samples, ca, cd);
  CHECK(ca.size() == (100 + 7) / 2);
  const auto rec = wavelet::idwt_step(ca, cd, 100);
  CHECK(rel_l2(rec, x.samples) < 1e-12);
}

TEST_CASE("40 Hz tone concentrates in gamma") {
  const auto dec = wavelet::dwt_decompose(tone(40.0, 128.0, 10.0));
  double total = 0.0;
  std::vector<double> energies;
  for (const auto& d : dec.details) {
    energies.push_back(wavelet::band_energy(d));
    total += energies.back();
  }
  CHECK(energies[0] == 0.0);          // beyond-Nyquist slot
  CHECK(energies[1] / total >= 0.8);  // D2 = gamma
}

TEST_CASE("6 Hz tone concentrates in theta") {
  const auto dec = wavelet::dwt_decompose(tone(6.0, 128.0, 10.0));
  double total = 0.0;
  std::vector<double> energies;
  for (const auto& d : dec.details) {
    energies.push_back(wavelet::band_energy(d));
    total += energies.back();
  }
  CHECK(energies[4] / total >= 0.7);  // D5 = theta
}

TEST_CASE("band energy and entropy on degenerate coefficient sets") {
  const std::vector<double> lone{1.0, 0.0, 0.0, 0.0};
  CHECK(wavelet::band_energy(lone) == 1.0);
  CHECK(wavelet::band_entropy(lone) == 0.0);

  const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
  CHECK(wavelet::band_energy(flat) == 4.0);
  CHECK(wavelet::band_entropy(flat) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const std::vector<double> zeros(8, 0.0);
  CHECK(wavelet::band_energy(zeros) == 0.0);
  CHECK(wavelet::band_entropy(zeros) == 0.0);
}

TEST_CASE("band features drop the top slot and order theta..gamma") {
  const auto dec = wavelet::dwt_decompose(tone(40.0, 128.0, 10.0));
  const auto bands = wavelet::band_features(dec);
  REQUIRE(bands.size() == 4);
  CHECK(bands[0].band == "theta");
  CHECK(bands[1].band == "alpha");
  CHECK(bands[2].band == "beta");
  CHECK(bands[3].band == "gamma");
  CHECK(bands[3].energy > bands[0].energy);
  for (const auto& b : bands) {
    CHECK(b.energy >= 0.0);
    CHECK(b.entropy >= 0.0);
  }
}

TEST_CASE("white-noise band energies scale with bandwidth") {
  // average over many draws; gamma:beta:alpha:theta should approach 8:4:2:1
  std::vector<double> mean(4, 0.0);
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto x = white_noise(1280, 128.0, 9000 + static_cast<std::uint64_t>(t));
    const auto bands = wavelet::band_features(wavelet::dwt_decompose(x));
    for (std::size_t b = 0; b < 4; ++b) mean[b] += bands[b].energy / trials;
  }
  const double widths[4] = {4.0, 8.0, 16.0, 32.0};
  for (std::size_t b = 0; b < 4; ++b) {
    const double per_hz = mean[b] / widths[b];
    const double ref = mean[3] / widths[3];
    CHECK(per_hz == doctest::Approx(ref).epsilon(0.15));
  }
}

TEST_CASE("entropy stays within its bound") {
  const auto x = white_noise(512, 128.0, 17);
  const auto bands = wavelet::band_features(wavelet::dwt_decompose(x));
  const auto dec = wavelet::dwt_decompose(x);
  for (std::size_t b = 0; b < 4; ++b) {
    const double len = static_cast<double>(dec.details[4 - b].size());
    CHECK(bands[b].entropy <= std::log(len) + 1e-12);
  }
}

TEST_CASE("energy is approximately conserved for taper-friendly input") {
  // taper the ends so the symmetric extension adds negligible energy
  auto x = tone(10.0, 128.0, 10.0);
  const std::size_t n = x.samples.size();
  const std::size_t ramp = n / 8;
  for (std::size_t i = 0; i < ramp; ++i) {
    const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(ramp));
    x.samples[i] *= w;
    x.samples[n - 1 - i] *= w;
  }
  const auto dec = wavelet::dwt_decompose(x);
  double coeff_energy = wavelet::band_energy(dec.approximation);
  for (const auto& d : dec.details) coeff_energy += wavelet::band_energy(d);
  const double signal_energy = wavelet::band_energy(x.samples);
  CHECK(coeff_energy == doctest::Approx(signal_energy).epsilon(0.01));
}

TEST_CASE("too-short input names the minimum length") {
  const Signal tiny{std::vector<double>(64, 1.0), 128.0};
  CHECK_THROWS_WITH_AS(wavelet::dwt_decompose(tiny),
                       "signal too short for 5-level decomposition: need at least 128 samples",
                       std::invalid_argument);
}
