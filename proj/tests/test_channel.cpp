#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tbrova/channel.hpp"

using namespace tbrova;

TEST_CASE("snr and ebn0 conversions") {
  CodeSpec third = build_code(1, 3, 6, {"117", "127", "155"});
  CodeSpec half = build_code(1, 2, 2, {"7", "5"});

  // 0 dB SNR for rate 1/3 sits at Eb/N0 = 10 log10(3/2)
  CHECK(snr_from_ebn0(third, 1.76) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(snr_from_ebn0(third, 10.0 * std::log10(1.5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(snr_from_ebn0(half, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double e : {-2.0, 0.0, 3.7, 6.0})
    CHECK(ebn0_from_snr(third, snr_from_ebn0(third, e)) == doctest::Approx(e).epsilon(1e-12));
  CHECK(sigma2_from_ebn0(half, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigma2_from_ebn0(half, 0.0, 4.0) == doctest::Approx(4.0).epsilon(1e-12));
  // hard-decision crossover at SNR 1: Q(1) = 0.1586552539...
  CHECK(bsc_crossover_from_ebn0(half, 0.0) == doctest::Approx(0.15865525393).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ChannelParams::awgn(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::awgn(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::bsc(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::bsc(0.5), std::invalid_argument);
}

TEST_CASE("transmit") {
  CodeSpec code = build_code(1, 2, 2, {"7", "5"});
  Trellis trellis(code, 8);
  InfoWord u = {1, 0, 1, 1, 0, 0, 1, 0};
  Codeword cw = trellis.encode(u);

  SUBCASE("vanishing noise reproduces the constellation") {
    ReceivedSequence y = transmit(cw, 2, ChannelParams::awgn(1e-20), 1);
    REQUIRE(y.samples.size() == 16);
    for (size_t i = 0; i < y.samples.size(); ++i)
      CHECK(y.samples[i] == doctest::Approx(cw.bits[i] ? -1.0 : 1.0).epsilon(1e-9));
  }
  SUBCASE("deterministic per seed") {
    ReceivedSequence a = transmit(cw, 2, ChannelParams::awgn(0.5), 42);
    ReceivedSequence b = transmit(cw, 2, ChannelParams::awgn(0.5), 42);
    ReceivedSequence c = transmit(cw, 2, ChannelParams::awgn(0.5), 43);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
  }
  SUBCASE("empirical noise variance") {
    const double sigma2 = 0.37;
    Trellis longer(code, 50000);
    Codeword big = longer.encode(InfoWord(50000, 0));
    ReceivedSequence y = transmit(big, 2, ChannelParams::awgn(sigma2), 7);
    double acc = 0.0;
    for (double v : y.samples) acc += (v - 1.0) * (v - 1.0);
    CHECK(acc / double(y.samples.size()) == doctest::Approx(sigma2).epsilon(0.03));
  }
  SUBCASE("bsc emits hard bits at the configured rate") {
    const double p = 0.11;
    Trellis longer(code, 50000);
    Codeword big = longer.encode(InfoWord(50000, 0));
    ReceivedSequence y = transmit(big, 2, ChannelParams::bsc(p), 7);
    double flips = 0.0;
    for (double v : y.samples) {
      REQUIRE((v == 0.0 || v == 1.0));
      flips += v;  // transmitted bits are all zero
    }
    CHECK(flips / double(y.samples.size()) == doctest::Approx(p).epsilon(0.05));
  }
}

TEST_CASE("branch likelihood closed forms") {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  SUBCASE("received equals the branch constellation") {
    const double sigma2 = 0.25;
    std::vector<double> y = {1.0, -1.0};
    ChannelParams params = ChannelParams::awgn(sigma2);
    const double expect = std::pow(2.0 * std::numbers::pi * sigma2, -1.0);  // n = 2
    CHECK(branch_likelihood(y, 0b10, 2, params) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("unit variance, one unit of error distance") {
    std::vector<double> y = {2.0, 1.0, 1.0};  // branch output 000 -> +1,+1,+1
    ChannelParams params = ChannelParams::awgn(1.0);
    const double expect = std::pow(inv_sqrt_2pi, 3) * std::exp(-0.5);
    CHECK(branch_likelihood(y, 0, 3, params) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(branch_log_likelihood(y, 0, 3, params) ==
          doctest::Approx(std::log(expect)).epsilon(1e-12));
  }
  SUBCASE("bsc hamming form") {
    std::vector<double> y = {1.0, 0.0};
    ChannelParams params = ChannelParams::bsc(0.2);
    CHECK(branch_likelihood(y, 0b00, 2, params) == doctest::Approx(0.2 * 0.8).epsilon(1e-12));
    CHECK(branch_likelihood(y, 0b01, 2, params) == doctest::Approx(0.8 * 0.8).epsilon(1e-12));
    CHECK(branch_likelihood(y, 0b10, 2, params) == doctest::Approx(0.2 * 0.2).epsilon(1e-12));
  }
  SUBCASE("bsc likelihoods over all patterns sum to one") {
    ChannelParams params = ChannelParams::bsc(0.3);
    for (uint32_t x : {0u, 3u, 5u}) {
      double total = 0.0;
      for (uint32_t pat = 0; pat < 8; ++pat) {
        std::vector<double> y = {double(pat & 1), double((pat >> 1) & 1),
                                 double((pat >> 2) & 1)};
        total += branch_likelihood(y, x, 3, params);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("likelihood ratios depend only on the labels") {
    ChannelParams params = ChannelParams::awgn(0.8);
    std::vector<double> y = {0.3, -1.2};
    const double r1 = branch_likelihood(y, 0b01, 2, params) / branch_likelihood(y, 0b10, 2, params);
    const double r2 = std::exp(branch_log_likelihood(y, 0b01, 2, params) -
                               branch_log_likelihood(y, 0b10, 2, params));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
  }
}

TEST_CASE("density tables") {
  CodeSpec code = build_code(1, 2, 2, {"7", "5"});
  Trellis trellis(code, 8);
  InfoWord u = {0, 1, 1, 0, 1, 0, 0, 1};
  Codeword cw = trellis.encode(u);
  ReceivedSequence y = transmit(cw, 2, ChannelParams::awgn(0.5), 99);
  DensityTable dens = branch_densities(trellis, y);
  REQUIRE(dens.segments == 8);
  REQUIRE(dens.branches == 8);

  SUBCASE("linear entries are max-rescaled logs") {
    for (int ell = 0; ell < 8; ++ell) {
      double mx = 0.0;
      for (uint32_t b = 0; b < 8; ++b) {
        CHECK(dens.lin_at(ell, b) ==
              doctest::Approx(std::exp(dens.log_at(ell, b) - dens.offset[size_t(ell)]))
                  .epsilon(1e-12));
        mx = std::max(mx, dens.lin_at(ell, b));
      }
      CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("logs agree with direct branch evaluation") {
    for (int ell = 0; ell < 8; ++ell)
      for (uint32_t b = 0; b < 8; ++b)
        CHECK(dens.log_at(ell, b) ==
              doctest::Approx(branch_log_likelihood(y.segment(ell),
                                                    trellis.branch(b).output, 2, y.params))
                  .epsilon(1e-12));
  }
  SUBCASE("from_log round trip") {
    DensityTable copy = DensityTable::from_log(dens.segments, dens.branches, dens.logd);
    CHECK(copy.lin == dens.lin);
    CHECK(copy.offset == dens.offset);
  }
}
