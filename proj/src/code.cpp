#include "tbrova/code.hpp"

#include <bit>
#include <stdexcept>

namespace tbrova {

namespace {

uint32_t parse_octal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty generator string");
  uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '7') throw std::invalid_argument("generator '" + s + "' is not octal");
    v = v * 8 + uint64_t(c - '0');
    if (v > 0xffffffffull) throw std::invalid_argument("generator '" + s + "' out of range");
  }
  return uint32_t(v);
}

}  // namespace

CodeSpec build_code(int k, int n, int nu, const std::vector<std::string>& generators_octal,
                    CodeMetadata meta) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n <= k) throw std::invalid_argument("rate must be k/n with n > k");
  if (nu < 1) throw std::invalid_argument("nu must be >= 1");
  if (nu + k > 26) throw std::invalid_argument("nu + k too large for a dense trellis");
  if (generators_octal.size() != size_t(k) * size_t(n))
    throw std::invalid_argument("expected k*n generators");

  CodeSpec c;
  c.k = k;
  c.n = n;
  c.nu = nu;
  c.octal = generators_octal;
  c.taps.reserve(generators_octal.size());
  for (const auto& s : generators_octal) {
    uint32_t g = parse_octal(s);
    if (g >= (1u << (nu + 1)))
      throw std::invalid_argument("generator '" + s + "' has degree > nu");
    c.taps.push_back(g);
  }

  c.reg_len.resize(k);
  if (k == 1) {
    c.reg_len[0] = nu;  // leading delays representable, window pinned to nu+1
  } else {
    for (int i = 0; i < k; ++i) {
      uint32_t widest = 0;
      for (int j = 0; j < n; ++j) widest |= c.tap(i, j);
      if (widest == 0) throw std::invalid_argument("generator row is all zero");
      c.reg_len[i] = std::bit_width(widest) - 1;
    }
    int total = 0;
    for (int len : c.reg_len) total += len;
    if (total != nu)
      throw std::invalid_argument("per-input register lengths do not sum to nu");
  }
  c.reg_off.resize(k);
  int off = 0;
  for (int i = 0; i < k; ++i) {
    c.reg_off[i] = off;
    off += c.reg_len[i];
  }
  c.meta = meta;
  return c;
}

uint32_t code_next_state(const CodeSpec& code, uint32_t state, uint32_t input) {
  uint32_t next = 0;
  for (int i = 0; i < code.k; ++i) {
    int len = code.reg_len[i];
    if (len == 0) continue;
    uint32_t reg = (state >> code.reg_off[i]) & ((1u << len) - 1u);
    uint32_t bit = (input >> i) & 1u;
    reg = (bit << (len - 1)) | (reg >> 1);
    next |= reg << code.reg_off[i];
  }
  return next;
}

uint32_t code_output(const CodeSpec& code, uint32_t state, uint32_t input) {
  uint32_t out = 0;
  for (int i = 0; i < code.k; ++i) {
    int len = code.reg_len[i];
    uint32_t reg = len ? (state >> code.reg_off[i]) & ((1u << len) - 1u) : 0u;
    uint32_t window = (((input >> i) & 1u) << len) | reg;
    for (int j = 0; j < code.n; ++j)
      out ^= uint32_t(std::popcount(window & code.tap(i, j)) & 1) << j;
  }
  return out;
}

}  // namespace tbrova
