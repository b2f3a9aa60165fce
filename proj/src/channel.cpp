#include "tbrova/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tbrova/numeric.hpp"

namespace tbrova {

ChannelParams ChannelParams::awgn(double sigma2, double power) {
  if (sigma2 <= 0 || power <= 0) throw std::invalid_argument("sigma2 and power must be > 0");
  ChannelParams p;
  p.kind = ChannelKind::awgn;
  p.sigma2 = sigma2;
  p.power = power;
  return p;
}

ChannelParams ChannelParams::bsc(double crossover) {
  if (crossover <= 0 || crossover >= 0.5)
    throw std::invalid_argument("crossover must be in (0, 0.5)");
  ChannelParams p;
  p.kind = ChannelKind::bsc;
  p.crossover = crossover;
  return p;
}

double snr_from_ebn0(const CodeSpec& code, double ebn0_db) {
  return 2.0 * code.rate() * std::pow(10.0, ebn0_db / 10.0);
}

double ebn0_from_snr(const CodeSpec& code, double snr_linear) {
  if (snr_linear <= 0) throw std::invalid_argument("snr must be > 0");
  return 10.0 * std::log10(snr_linear / (2.0 * code.rate()));
}

double sigma2_from_ebn0(const CodeSpec& code, double ebn0_db, double power) {
  return power / snr_from_ebn0(code, ebn0_db);
}

double bsc_crossover_from_ebn0(const CodeSpec& code, double ebn0_db) {
  double x = std::sqrt(snr_from_ebn0(code, ebn0_db));
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

ReceivedSequence transmit(const Codeword& cw, int n, const ChannelParams& params, uint64_t seed) {
  if (n < 1 || cw.bits.size() % size_t(n) != 0)
    throw std::invalid_argument("codeword length is not a multiple of n");
  ReceivedSequence y;
  y.n = n;
  y.segments = int(cw.bits.size()) / n;
  y.params = params;
  y.samples.resize(cw.bits.size());
  std::mt19937_64 rng(seed);
  if (params.kind == ChannelKind::awgn) {
    const double amp = std::sqrt(params.power);
    std::normal_distribution<double> noise(0.0, std::sqrt(params.sigma2));
    for (size_t i = 0; i < cw.bits.size(); ++i)
      y.samples[i] = (cw.bits[i] ? -amp : amp) + noise(rng);
  } else {
    std::bernoulli_distribution flip(params.crossover);
    for (size_t i = 0; i < cw.bits.size(); ++i)
      y.samples[i] = double(cw.bits[i] ^ uint8_t(flip(rng)));
  }
  return y;
}

double branch_log_likelihood(std::span<const double> y_segment, uint32_t output_bits, int n,
                             const ChannelParams& params) {
  double acc = 0.0;
  if (params.kind == ChannelKind::awgn) {
    const double amp = std::sqrt(params.power);
    const double norm = -0.5 * std::log(2.0 * std::numbers::pi * params.sigma2);
    const double inv2s = 0.5 / params.sigma2;
    for (int j = 0; j < n; ++j) {
      double x = ((output_bits >> j) & 1u) ? -amp : amp;
      double d = y_segment[j] - x;
      acc += norm - d * d * inv2s;
    }
  } else {
    const double lp = std::log(params.crossover);
    const double lq = std::log1p(-params.crossover);
    for (int j = 0; j < n; ++j) {
      uint32_t bit = (output_bits >> j) & 1u;
      acc += (uint32_t(y_segment[j]) != bit) ? lp : lq;
    }
  }
  return acc;
}

double branch_likelihood(std::span<const double> y_segment, uint32_t output_bits, int n,
                         const ChannelParams& params) {
  return std::exp(branch_log_likelihood(y_segment, output_bits, n, params));
}

void DensityTable::rescale() {
  lin.resize(logd.size());
  offset.resize(segments);
  for (int ell = 0; ell < segments; ++ell) {
    double m = neg_inf;
    for (int b = 0; b < branches; ++b) {
      double v = logd[size_t(ell) * branches + b];
      if (v > m) m = v;
    }
    offset[ell] = m;
    for (int b = 0; b < branches; ++b)
      lin[size_t(ell) * branches + b] = std::exp(logd[size_t(ell) * branches + b] - m);
  }
}

DensityTable DensityTable::from_log(int segments, int branches, std::vector<double> logd) {
  if (logd.size() != size_t(segments) * branches)
    throw std::invalid_argument("log density matrix has wrong shape");
  DensityTable t;
  t.segments = segments;
  t.branches = branches;
  t.logd = std::move(logd);
  t.rescale();
  return t;
}

DensityTable branch_densities(const Trellis& trellis, const ReceivedSequence& y) {
  if (y.segments != trellis.length() || y.n != trellis.code().n)
    throw std::invalid_argument("received sequence does not match trellis dimensions");
  DensityTable t;
  t.segments = y.segments;
  t.branches = int(trellis.branch_count());
  t.logd.resize(size_t(t.segments) * t.branches);
  const int n = y.n;
  auto branches = trellis.segment_branches();
  if (n <= 12) {
    // one density per distinct output pattern, then fan out to branches
    std::vector<double> pattern(size_t(1) << n);
    for (int ell = 0; ell < t.segments; ++ell) {
      auto seg = y.segment(ell);
      for (uint32_t p = 0; p < pattern.size(); ++p)
        pattern[p] = branch_log_likelihood(seg, p, n, y.params);
      double* row = t.logd.data() + size_t(ell) * t.branches;
      for (int b = 0; b < t.branches; ++b) row[b] = pattern[branches[b].output];
    }
  } else {
    for (int ell = 0; ell < t.segments; ++ell) {
      auto seg = y.segment(ell);
      double* row = t.logd.data() + size_t(ell) * t.branches;
      for (int b = 0; b < t.branches; ++b)
        row[b] = branch_log_likelihood(seg, branches[b].output, n, y.params);
    }
  }
  t.rescale();
  return t;
}

}  // namespace tbrova
