#include "tbrova/trellis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tbrova {

namespace {

int segment_count(const CodeSpec& code, const InfoWord& u) {
  if (u.size() % size_t(code.k) != 0)
    throw std::invalid_argument("info word length is not a multiple of k");
  int L = int(u.size()) / code.k;
  if (L < code.nu) throw std::invalid_argument("tail-biting needs L >= nu");
  for (uint8_t b : u)
    if (b > 1) throw std::invalid_argument("info bits must be 0 or 1");
  return L;
}

}  // namespace

uint32_t tail_biting_start_state(const CodeSpec& code, const InfoWord& u) {
  int L = segment_count(code, u);
  uint32_t s = 0;
  for (int i = 0; i < code.k; ++i) {
    int len = code.reg_len[i];
    uint32_t reg = 0;
    for (int j = 1; j <= len; ++j)
      reg |= uint32_t(u[size_t(L - j) * code.k + i]) << (len - j);
    s |= reg << code.reg_off[i];
  }
  return s;
}

Codeword encode_tailbiting(const CodeSpec& code, const InfoWord& u) {
  int L = segment_count(code, u);
  Codeword cw;
  cw.start_state = tail_biting_start_state(code, u);
  cw.bits.resize(size_t(code.n) * L);
  uint32_t state = cw.start_state;
  for (int ell = 0; ell < L; ++ell) {
    uint32_t input = 0;
    for (int i = 0; i < code.k; ++i)
      input |= uint32_t(u[size_t(ell) * code.k + i]) << i;
    uint32_t out = code_output(code, state, input);
    for (int j = 0; j < code.n; ++j)
      cw.bits[size_t(ell) * code.n + j] = uint8_t((out >> j) & 1u);
    state = code_next_state(code, state, input);
  }
  // circular convolution: the walk re-enters its own start state
  if (state != cw.start_state) throw std::logic_error("encoder failed to bite its tail");
  return cw;
}

Trellis::Trellis(CodeSpec code, int length) : code_(std::move(code)), length_(length) {
  if (length_ < code_.nu) throw std::invalid_argument("trellis length must be >= nu");
  const uint32_t S = code_.num_states();
  const uint32_t A = code_.num_inputs();
  branches_.resize(size_t(S) * A);
  for (uint32_t m = 0; m < S; ++m)
    for (uint32_t a = 0; a < A; ++a)
      branches_[(size_t(m) << code_.k) | a] =
          Branch{m, code_next_state(code_, m, a), a, code_output(code_, m, a)};

  incoming_.assign(size_t(S) * A, 0);
  std::vector<uint32_t> fill(S, 0);
  for (uint32_t b = 0; b < branches_.size(); ++b) {
    uint32_t r = branches_[b].to;
    incoming_[size_t(r) * A + fill[r]++] = b;  // branch order keeps (from, input) ascending
  }
  for (uint32_t r = 0; r < S; ++r)
    if (fill[r] != A) throw std::logic_error("trellis is not 2^k-regular");
}

std::span<const Branch> Trellis::branches(int ell) const {
  if (ell < 1 || ell > length_) throw std::out_of_range("segment index out of range");
  return branches_;
}

std::span<const uint32_t> Trellis::incoming(uint32_t state) const {
  const uint32_t A = code_.num_inputs();
  return {incoming_.data() + size_t(state) * A, A};
}

bool Trellis::reaches(uint32_t state, int ell, uint32_t target) const {
  if (ell < 1 || ell > length_) throw std::out_of_range("segment index out of range");
  int t = length_ - ell;
  for (int i = 0; i < code_.k; ++i) {
    int len = code_.reg_len[i];
    int tt = t < len ? t : len;
    uint32_t mask = (1u << len) - 1u;
    uint32_t r = (state >> code_.reg_off[i]) & mask;
    uint32_t s = (target >> code_.reg_off[i]) & mask;
    // in t more shifts the newest len-tt bits of r become the oldest of target
    if ((r >> tt) != (s & ((1u << (len - tt)) - 1u))) return false;
  }
  return true;
}

Codeword Trellis::encode(const InfoWord& u) const {
  if (int(u.size()) != length_ * code_.k)
    throw std::invalid_argument("info word length does not match trellis length");
  return encode_tailbiting(code_, u);
}

std::vector<Branch> Trellis::path_from_codeword(const Codeword& cw) const {
  if (int(cw.bits.size()) != length_ * code_.n)
    throw std::invalid_argument("codeword length does not match trellis length");
  if (cw.start_state >= num_states())
    throw std::invalid_argument("start state out of range");
  std::vector<Branch> path;
  path.reserve(length_);
  uint32_t state = cw.start_state;
  const uint32_t A = code_.num_inputs();
  for (int ell = 0; ell < length_; ++ell) {
    uint32_t want = 0;
    for (int j = 0; j < code_.n; ++j) {
      uint8_t b = cw.bits[size_t(ell) * code_.n + j];
      if (b > 1) throw std::invalid_argument("codeword bits must be 0 or 1");
      want |= uint32_t(b) << j;
    }
    int hit = -1;
    for (uint32_t a = 0; a < A; ++a) {
      if (output(state, a) == want) {
        if (hit >= 0) throw std::invalid_argument("codeword is trellis-ambiguous");
        hit = int(a);
      }
    }
    if (hit < 0)
      throw std::invalid_argument("codeword is not a trellis path (segment " +
                                  std::to_string(ell + 1) + ")");
    path.push_back(branch(branch_index(state, uint32_t(hit))));
    state = path.back().to;
  }
  if (state != cw.start_state)
    throw std::invalid_argument("codeword path does not bite its tail");
  return path;
}

}  // namespace tbrova
