#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "tbrova/oracle.hpp"

using namespace tbrova;

namespace {

ReceivedSequence random_received(const CodeSpec& code, int length, double ebn0, uint64_t seed) {
  Trellis trellis(code, length);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  InfoWord u(size_t(code.k) * length);
  for (auto& b : u) b = uint8_t(bit(rng));
  Codeword cw = trellis.encode(u);
  return transmit(cw, code.n, ChannelParams::awgn(sigma2_from_ebn0(code, ebn0)), seed + 1);
}

}  // namespace

TEST_CASE("codebook enumeration") {
  CodeSpec code = build_code(1, 2, 2, {"7", "5"});

  SUBCASE("256 codewords in 4 equal start-state classes") {
    auto book = enumerate_codebook(code, 8);
    REQUIRE(book.size() == 256);
    std::map<uint32_t, int> classes;
    std::set<std::vector<uint8_t>> distinct;
    for (const auto& e : book) {
      classes[e.codeword.start_state]++;
      distinct.insert(e.codeword.bits);
    }
    CHECK(distinct.size() == 256);  // duplicate-free, info<->codeword one-to-one
    REQUIRE(classes.size() == 4);
    for (const auto& [s, count] : classes) CHECK(count == 64);
  }
  SUBCASE("length nu collapses to one word per state") {
    auto book = enumerate_codebook(code, 2);
    CHECK(book.size() == 4);
  }
  SUBCASE("codebook is linear") {
    auto book = enumerate_codebook(code, 8);
    std::set<std::vector<uint8_t>> members;
    for (const auto& e : book) members.insert(e.codeword.bits);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<size_t> pick(0, book.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      const auto& a = book[pick(rng)].codeword.bits;
      const auto& b = book[pick(rng)].codeword.bits;
      std::vector<uint8_t> x(a.size());
      for (size_t i = 0; i < a.size(); ++i) x[i] = a[i] ^ b[i];
      CHECK(members.count(x) == 1);
    }
  }
  SUBCASE("cap enforced") {
    CHECK_THROWS_AS(enumerate_codebook(code, 21), std::length_error);  // 2^21 entries
    CHECK_NOTHROW(enumerate_codebook(code, 10, 1024));
    CHECK_THROWS_AS(enumerate_codebook(code, 11, 1024), std::length_error);
  }
}

TEST_CASE("posteriors by direct summation") {
  CodeSpec code = build_code(1, 2, 2, {"7", "5"});
  const int L = 8;

  SUBCASE("noiseless input crowns the transmitted word") {
    Trellis trellis(code, L);
    InfoWord u = {1, 1, 0, 1, 0, 0, 1, 0};
    Codeword cw = trellis.encode(u);
    ReceivedSequence y = transmit(cw, code.n, ChannelParams::awgn(1e-6), 5);
    OracleResult oracle = oracle_posteriors(code, L, y);
    CHECK(oracle.codebook[oracle.ml_index].codeword.bits == cw.bits);
    CHECK(oracle.posterior[oracle.ml_index] > 0.999999);
    CHECK(oracle.map_state == cw.start_state);
  }

  SUBCASE("probabilities behave like probabilities") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
      ReceivedSequence y = random_received(code, L, 1.0, seed * 17);
      OracleResult oracle = oracle_posteriors(code, L, y);
      double total = 0.0;
      for (double p : oracle.posterior) total += p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      double stotal = 0.0;
      for (double p : oracle.state_posterior) stotal += p;
      CHECK(stotal == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("state posterior aggregates its class") {
    for (uint64_t seed : {11ull, 12ull, 13ull}) {
      ReceivedSequence y = random_received(code, L, 0.0, seed);
      OracleResult oracle = oracle_posteriors(code, L, y);
      std::vector<double> grouped(code.num_states(), 0.0);
      for (size_t i = 0; i < oracle.codebook.size(); ++i)
        grouped[oracle.codebook[i].codeword.start_state] += oracle.posterior[i];
      for (uint32_t s = 0; s < code.num_states(); ++s)
        CHECK(grouped[s] == doctest::Approx(oracle.state_posterior[s]).epsilon(1e-12));
    }
  }

  SUBCASE("confident instances put the map state on the ml codeword") {
    int confident = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
      ReceivedSequence y = random_received(code, L, 3.0, 1000 + seed);
      OracleResult oracle = oracle_posteriors(code, L, y);
      if (oracle.posterior[oracle.ml_index] > 0.5) {
        ++confident;
        CHECK(oracle.map_state == oracle.codebook[oracle.ml_index].codeword.start_state);
      }
    }
    CHECK(confident > 100);  // the regime actually occurs
  }

  SUBCASE("state evidences recombine into the total") {
    ReceivedSequence y = random_received(code, L, 2.0, 77);
    OracleResult oracle = oracle_posteriors(code, L, y);
    double acc = -INFINITY;
    for (double le : oracle.state_log_evidence)
      acc = std::max(acc, le) + std::log1p(std::exp(-std::fabs(le - acc)));
    // log evidence also carries the uniform 2^-nu state prior
    CHECK(acc - code.nu * std::log(2.0) ==
          doctest::Approx(oracle.log_evidence).epsilon(1e-9));
  }

  SUBCASE("lookup by bits") {
    auto book = enumerate_codebook(code, L);
    ReceivedSequence y = random_received(code, L, 1.0, 123);
    OracleResult oracle = oracle_posteriors(code, L, y);
    CHECK(oracle.find(book[37].codeword.bits) == 37);
    std::vector<uint8_t> junk(book[0].codeword.bits.size(), 1);
    junk[0] = 0;
    junk[1] = 0;
    junk[2] = 0;
    if (std::none_of(book.begin(), book.end(),
                     [&](const CodebookEntry& e) { return e.codeword.bits == junk; }))
      CHECK_THROWS_AS(oracle.find(junk), std::invalid_argument);
  }
}
