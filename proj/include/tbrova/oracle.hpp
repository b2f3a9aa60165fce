#pragma once

#include <cstdint>
#include <vector>

#include "tbrova/channel.hpp"
#include "tbrova/trellis.hpp"

namespace tbrova {

struct CodebookEntry {
  InfoWord info;
  Codeword codeword;
};

// All 2^(kL) tail-biting codewords in ascending info-word order (info bits
// little-endian in the enumeration index).  Throws std::length_error when the
// codebook would exceed `cap` entries.
std::vector<CodebookEntry> enumerate_codebook(const CodeSpec& code, int length,
                                              uint64_t cap = uint64_t(1) << 20);

// Brute-force posteriors by direct summation over the whole codebook, done in
// log domain with log-sum-exp.  Likelihoods come straight from the codeword
// bits and the channel, independent of the trellis recursions under test.
struct OracleResult {
  std::vector<CodebookEntry> codebook;
  std::vector<double> log_likelihood;       // log f(y|x) per entry
  std::vector<double> posterior;            // P(x|y)
  std::vector<double> state_posterior;      // P(s|y)
  std::vector<double> state_log_evidence;   // log f(y|s), prior 2^-(kL-nu)
  double log_evidence = 0.0;                // log f(y)
  size_t ml_index = 0;
  uint32_t map_state = 0;

  size_t find(const std::vector<uint8_t>& bits) const;  // throws if absent
};

OracleResult oracle_posteriors(const CodeSpec& code, int length, const ReceivedSequence& y,
                               uint64_t cap = uint64_t(1) << 20);

}  // namespace tbrova
