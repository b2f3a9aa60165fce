#include "tbrova/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "tbrova/numeric.hpp"

namespace tbrova {

std::vector<CodebookEntry> enumerate_codebook(const CodeSpec& code, int length, uint64_t cap) {
  if (length < code.nu) throw std::invalid_argument("length must be >= nu");
  int bits = code.k * length;
  if (bits >= 63 || (uint64_t(1) << bits) > cap)
    throw std::length_error("codebook larger than cap");
  uint64_t count = uint64_t(1) << bits;
  std::vector<CodebookEntry> book;
  book.reserve(count);
  InfoWord u(bits);
  for (uint64_t w = 0; w < count; ++w) {
    for (int j = 0; j < bits; ++j) u[j] = uint8_t((w >> j) & 1u);
    book.push_back({u, encode_tailbiting(code, u)});
  }
  return book;
}

OracleResult oracle_posteriors(const CodeSpec& code, int length, const ReceivedSequence& y,
                               uint64_t cap) {
  if (y.segments != length || y.n != code.n)
    throw std::invalid_argument("received sequence does not match code dimensions");
  OracleResult r;
  r.codebook = enumerate_codebook(code, length, cap);
  const size_t M = r.codebook.size();
  r.log_likelihood.resize(M);
  for (size_t i = 0; i < M; ++i) {
    const auto& bits = r.codebook[i].codeword.bits;
    double acc = 0.0;
    for (int ell = 0; ell < length; ++ell) {
      uint32_t pattern = 0;
      for (int j = 0; j < code.n; ++j)
        pattern |= uint32_t(bits[size_t(ell) * code.n + j]) << j;
      acc += branch_log_likelihood(y.segment(ell), pattern, code.n, y.params);
    }
    r.log_likelihood[i] = acc;
  }

  double lse_all = log_sum_exp(r.log_likelihood);
  r.posterior.resize(M);
  r.ml_index = 0;
  for (size_t i = 0; i < M; ++i) {
    r.posterior[i] = std::exp(r.log_likelihood[i] - lse_all);
    if (r.log_likelihood[i] > r.log_likelihood[r.ml_index]) r.ml_index = i;
  }

  const uint32_t S = code.num_states();
  std::vector<std::vector<double>> per_state(S);
  for (size_t i = 0; i < M; ++i)
    per_state[r.codebook[i].codeword.start_state].push_back(r.log_likelihood[i]);
  r.state_posterior.resize(S, 0.0);
  r.state_log_evidence.resize(S, neg_inf);
  const double log2 = std::log(2.0);
  const double prior_exp = double(code.k * length - code.nu);
  r.map_state = 0;
  for (uint32_t s = 0; s < S; ++s) {
    double lse_s = log_sum_exp(per_state[s]);
    r.state_posterior[s] = std::exp(lse_s - lse_all);
    r.state_log_evidence[s] = lse_s - prior_exp * log2;
    if (r.state_posterior[s] > r.state_posterior[r.map_state]) r.map_state = s;
  }
  r.log_evidence = lse_all - double(code.k * length) * log2;
  return r;
}

size_t OracleResult::find(const std::vector<uint8_t>& bits) const {
  for (size_t i = 0; i < codebook.size(); ++i)
    if (codebook[i].codeword.bits == bits) return i;
  throw std::invalid_argument("bits are not a codeword");
}

}  // namespace tbrova
