#pragma once

#include <cstdint>
#include <vector>

#include "tbrova/channel.hpp"
#include "tbrova/counters.hpp"
#include "tbrova/terminated.hpp"
#include "tbrova/trellis.hpp"

namespace tbrova {

struct StatePosterior {
  std::vector<double> probs;  // P(start state | y), sums to 1

  uint32_t map_state() const;  // argmax, smallest index on ties
};

// Common shape of every reliability-output tail-biting decode: the decoded
// word, the probability it is the transmitted word, and the start-state
// posterior the decoder worked with.  codeword.start_state is the decoder's
// state estimate.
struct DecodeResult {
  InfoWord info;
  Codeword codeword;
  double word_correct_prob = 0.0;
  StatePosterior state_posterior;
  OpCounters counters;
};

// Exact: runs the per-state reliability pass for every start state, picks the
// maximum-likelihood word, and combines the per-state evidences into the
// unconditioned word and state posteriors.
DecodeResult tb_rova(const Trellis& trellis, const DensityTable& dens);
DecodeResult tb_rova(const Trellis& trellis, const ReceivedSequence& y);

// Same selection (hence the identical decoded word), with the per-state
// reliabilities and evidences replaced by their survivor-merge estimates.
DecodeResult approx_tb_rova(const Trellis& trellis, const DensityTable& dens);
DecodeResult approx_tb_rova(const Trellis& trellis, const ReceivedSequence& y);

struct PrcTrace {
  std::vector<double> partition_sums;        // sum of the start x current table, per segment
  std::vector<double> candidate_probs;       // candidate-correct value, per segment
  std::vector<double> overall_at_candidate;  // table entry covering the candidate, per segment
};

struct PrcResult {
  double word_correct_prob = 0.0;  // exact P(candidate | y)
  StatePosterior state_posterior;
  OpCounters counters;
};

// Exact posterior of one externally supplied tail-biting path: a joint
// forward recursion over (start state, current state) correctness
// probabilities plus one candidate-correct probability, renormalized per
// segment.  Throws if the candidate does not follow the trellis, does not
// bite its tail, or disagrees with s_hat.
PrcResult prc(const Trellis& trellis, const DensityTable& dens, const Codeword& candidate,
              uint32_t s_hat, PrcTrace* trace = nullptr);
PrcResult prc(const Trellis& trellis, const ReceivedSequence& y, const Codeword& candidate,
              uint32_t s_hat, PrcTrace* trace = nullptr);

struct SeaResult {
  uint32_t map_state = 0;
  StatePosterior state_posterior;
  OpCounters counters;
};

// The overall-table half of the same recursion: exact start-state posterior
// without decoding a word.
SeaResult tb_sea(const Trellis& trellis, const DensityTable& dens, PrcTrace* trace = nullptr);
SeaResult tb_sea(const Trellis& trellis, const ReceivedSequence& y, PrcTrace* trace = nullptr);

// Exact state posterior first, then the terminated reliability pass at its
// argmax; the word posterior is the product of the two.
DecodeResult tb_sea_rova(const Trellis& trellis, const DensityTable& dens);
DecodeResult tb_sea_rova(const Trellis& trellis, const ReceivedSequence& y);

// One uniform-start forward sweep, normalized per segment; approximates the
// start-state posterior by the end-state occupancy and ignores the
// tail-biting restriction.
StatePosterior tb_bcjr_state_estimate(const Trellis& trellis, const DensityTable& dens,
                                      OpCounters* ops = nullptr);
StatePosterior tb_bcjr_state_estimate(const Trellis& trellis, const ReceivedSequence& y,
                                      OpCounters* ops = nullptr);

// State estimate by the sweep above, then the terminated reliability pass.
DecodeResult tb_bcjr_rova(const Trellis& trellis, const DensityTable& dens);
DecodeResult tb_bcjr_rova(const Trellis& trellis, const ReceivedSequence& y);

struct WavaResult {
  InfoWord info;
  Codeword codeword;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;            // stopped because the best path bit its tail
  bool exhaustive_fallback = false;  // no tail-biting survivor; per-state passes used
};

// Wrap-around Viterbi: repeated unterminated passes feeding end metrics back
// into start metrics; stops when the best survivor is tail-biting, otherwise
// returns the best tail-biting survivor seen, falling back to the best
// per-state terminated path.
WavaResult wava_decode(const Trellis& trellis, const DensityTable& dens, int max_iters = 2,
                       OpCounters* ops = nullptr);
WavaResult wava_decode(const Trellis& trellis, const ReceivedSequence& y, int max_iters = 2,
                       OpCounters* ops = nullptr);

// wava_decode for the word, then the exact candidate posterior.
DecodeResult wava_prc(const Trellis& trellis, const DensityTable& dens, int max_iters = 2);
DecodeResult wava_prc(const Trellis& trellis, const ReceivedSequence& y, int max_iters = 2);

namespace detail {
// Shared forward recursion behind prc/tb_sea.  `candidate` may be null.
// `generic_accumulation` forces the any-k inner loop even when k == 1; the
// unrolled two-branch form and the generic form produce identical bits.
void sea_forward(const Trellis& trellis, const DensityTable& dens,
                 const std::vector<Branch>* candidate_path, std::vector<double>& final_table,
                 double* candidate_prob, OpCounters& ops, PrcTrace* trace,
                 bool generic_accumulation);
}  // namespace detail

}  // namespace tbrova
