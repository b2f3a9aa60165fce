#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tbrova {

// Catalog facts about a code; zero means unknown.
struct CodeMetadata {
  int d_free = 0;
  int a_dfree = 0;          // number of weight-d_free paths
  int traceback_depth = 0;  // decision depth for near-ML truncated decoding
};

// Feedforward binary convolutional code, rate k/n, total encoder memory nu.
//
// Generators are octal, row-major (k rows of n entries), read right-aligned in
// a width-(nu_i+1) window: the most significant bit of the window multiplies
// the current input bit, the least significant the oldest register bit.
// A state packs the k shift registers, register 0 in the low bits; within a
// register the most recent input bit occupies the most significant position.
struct CodeSpec {
  int k = 0;
  int n = 0;
  int nu = 0;
  std::vector<uint32_t> taps;      // k*n tap words, row-major
  std::vector<int> reg_len;        // per-input register length, sums to nu
  std::vector<int> reg_off;        // bit offset of each register within a state
  std::vector<std::string> octal;  // generators as given
  CodeMetadata meta;

  uint32_t num_states() const { return 1u << nu; }
  uint32_t num_inputs() const { return 1u << k; }
  uint32_t branches_per_segment() const { return 1u << (nu + k); }
  uint32_t tap(int row, int col) const { return taps[size_t(row) * n + col]; }
  double rate() const { return double(k) / double(n); }
};

// Throws std::invalid_argument on malformed octal, generator degree > nu,
// k >= n, or (k > 1) register lengths that do not sum to nu.
CodeSpec build_code(int k, int n, int nu, const std::vector<std::string>& generators_octal,
                    CodeMetadata meta = {});

// Register contents after shifting the packed input bits into `state`.
uint32_t code_next_state(const CodeSpec& code, uint32_t state, uint32_t input);

// Packed n output bits for the transition; bit j is output stream j.
uint32_t code_output(const CodeSpec& code, uint32_t state, uint32_t input);

}  // namespace tbrova
