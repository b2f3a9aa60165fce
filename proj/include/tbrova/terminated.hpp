#pragma once

#include <cstdint>
#include <vector>

#include "tbrova/channel.hpp"
#include "tbrova/counters.hpp"
#include "tbrova/trellis.hpp"

namespace tbrova {

// Decoders over the trellis terminated at a known start = end state s.
// Survivor ties resolve toward the smaller predecessor state, then the
// smaller input label.

struct ViterbiResult {
  InfoWord info;
  Codeword codeword;
  double log_likelihood = 0.0;  // log f(y | path, s)
};

ViterbiResult viterbi(const Trellis& trellis, const DensityTable& dens, uint32_t start_state);
ViterbiResult viterbi(const Trellis& trellis, const ReceivedSequence& y, uint32_t start_state);

struct RovaTrace {
  // sum over states of (survivor-correct + nonsurvivor-correct) after each
  // segment's normalization; identically 1 up to rounding
  std::vector<double> partition_sums;
};

struct RovaResult {
  InfoWord info;
  Codeword codeword;
  double word_correct_prob = 0.0;  // exact P(decoded word correct | y, s)
  double log_evidence = 0.0;       // log f(y|s), prior 2^-(kL-nu) per word
  double log_likelihood = 0.0;     // log f(y | decoded word, s)
};

// Single forward pass carrying, per state, the survivor-correct and
// nonsurvivor-correct probabilities, renormalized every segment by the sum of
// all branch-weighted contributions; the evidence accumulates the per-segment
// normalizers in log form.
RovaResult rova(const Trellis& trellis, const DensityTable& dens, uint32_t start_state,
                OpCounters* ops = nullptr, RovaTrace* trace = nullptr);
RovaResult rova(const Trellis& trellis, const ReceivedSequence& y, uint32_t start_state,
                OpCounters* ops = nullptr, RovaTrace* trace = nullptr);

struct ApproxRovaResult {
  InfoWord info;
  Codeword codeword;
  double word_correct_prob = 0.0;  // survivor-merge estimate, in (0, 1]
  double log_evidence = 0.0;       // log of likelihood / (2^(kL-nu) * estimate)
  double log_likelihood = 0.0;
};

// Stores, for each merge, the survivor's share (survivor branch density *
// path metric) / (sum of the merging products); the word reliability is the
// product of these shares along the decoded path.  Runs in log domain;
// decodes the identical word as viterbi().
ApproxRovaResult approx_rova(const Trellis& trellis, const DensityTable& dens,
                             uint32_t start_state, OpCounters* ops = nullptr);
ApproxRovaResult approx_rova(const Trellis& trellis, const ReceivedSequence& y,
                             uint32_t start_state, OpCounters* ops = nullptr);

namespace detail {
// Walk a survivor chain: pred[(ell-1)*S + state] holds the branch index chosen
// into `state` at segment ell, or -1.  Fills the path's bits and start state.
void survivor_traceback(const Trellis& trellis, const std::vector<int32_t>& pred,
                        uint32_t end_state, InfoWord& info, Codeword& cw);
}  // namespace detail

}  // namespace tbrova
