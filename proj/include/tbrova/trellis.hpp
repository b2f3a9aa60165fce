#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tbrova/code.hpp"

namespace tbrova {

using InfoWord = std::vector<uint8_t>;  // k*L bits, values 0/1

struct Codeword {
  std::vector<uint8_t> bits;  // n*L bits, segment-major, bit j of segment = stream j
  uint32_t start_state = 0;   // tail-biting start (= end) state

  bool operator==(const Codeword& o) const {
    return bits == o.bits && start_state == o.start_state;
  }
};

struct Branch {
  uint32_t from = 0;
  uint32_t to = 0;
  uint32_t input = 0;   // packed k input bits
  uint32_t output = 0;  // packed n output bits
};

// Tail-biting start state: the register contents produced by the final nu
// input bits, so that encoding from it returns to it.
uint32_t tail_biting_start_state(const CodeSpec& code, const InfoWord& u);

// Circular encoding over L = |u|/k segments; requires L >= nu.
Codeword encode_tailbiting(const CodeSpec& code, const InfoWord& u);

// Time-invariant tail-biting trellis of L segments.  The branch set is the
// same for every segment; segment indices run 1..L.
class Trellis {
 public:
  Trellis(CodeSpec code, int length);

  const CodeSpec& code() const { return code_; }
  int length() const { return length_; }
  int unconstrained_length() const { return length_ - code_.nu; }  // K
  uint32_t num_states() const { return code_.num_states(); }
  uint32_t num_inputs() const { return code_.num_inputs(); }
  uint32_t branch_count() const { return uint32_t(branches_.size()); }

  std::span<const Branch> segment_branches() const { return branches_; }
  std::span<const Branch> branches(int ell) const;  // validates 1 <= ell <= L
  const Branch& branch(uint32_t index) const { return branches_[index]; }
  uint32_t branch_index(uint32_t from, uint32_t input) const {
    return (from << code_.k) | input;
  }
  // Indices of the 2^k branches entering `state`, ascending (from, input).
  std::span<const uint32_t> incoming(uint32_t state) const;

  uint32_t next_state(uint32_t state, uint32_t input) const {
    return branches_[branch_index(state, input)].to;
  }
  uint32_t output(uint32_t state, uint32_t input) const {
    return branches_[branch_index(state, input)].output;
  }

  // True when some length-(L-ell) input sequence leads from `state` at time
  // ell to `target` at time L.  Vacuously true for ell <= K.
  bool reaches(uint32_t state, int ell, uint32_t target) const;

  Codeword encode(const InfoWord& u) const;

  // Branch sequence of a codeword walked from its start state; throws if the
  // bits do not follow the trellis or the walk does not bite its tail.
  std::vector<Branch> path_from_codeword(const Codeword& cw) const;

 private:
  CodeSpec code_;
  int length_;
  std::vector<Branch> branches_;
  std::vector<uint32_t> incoming_;  // num_states * 2^k branch indices
};

}  // namespace tbrova
