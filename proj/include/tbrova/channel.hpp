#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tbrova/trellis.hpp"

namespace tbrova {

enum class ChannelKind { awgn, bsc };

// BPSK over AWGN (bit 0 -> +sqrt(power), bit 1 -> -sqrt(power)) or a binary
// symmetric channel with the given crossover probability.
struct ChannelParams {
  ChannelKind kind = ChannelKind::awgn;
  double sigma2 = 1.0;     // noise variance per real symbol
  double power = 1.0;      // symbol energy
  double crossover = 0.0;  // BSC flip probability

  static ChannelParams awgn(double sigma2, double power = 1.0);
  static ChannelParams bsc(double crossover);
};

// Linear SNR P/sigma^2 = 2 (k/n) Eb/N0 for the given code rate.
double snr_from_ebn0(const CodeSpec& code, double ebn0_db);
double ebn0_from_snr(const CodeSpec& code, double snr_linear);  // dB
double sigma2_from_ebn0(const CodeSpec& code, double ebn0_db, double power = 1.0);
// Hard-decision BPSK equivalent crossover Q(sqrt(2 (k/n) Eb/N0)).
double bsc_crossover_from_ebn0(const CodeSpec& code, double ebn0_db);

struct ReceivedSequence {
  std::vector<double> samples;  // segments * n, BSC stores hard bits as 0.0/1.0
  int segments = 0;
  int n = 0;
  ChannelParams params;

  std::span<const double> segment(int ell0) const {
    return {samples.data() + size_t(ell0) * n, size_t(n)};
  }
};

// Deterministic for a given seed.
ReceivedSequence transmit(const Codeword& cw, int n, const ChannelParams& params, uint64_t seed);

double branch_log_likelihood(std::span<const double> y_segment, uint32_t output_bits, int n,
                             const ChannelParams& params);
double branch_likelihood(std::span<const double> y_segment, uint32_t output_bits, int n,
                         const ChannelParams& params);

// Per-segment branch densities in two forms: exact natural logs, and linear
// values rescaled so each segment's maximum is 1 (offset holds the shift).
// Decoder posteriors are invariant to the per-segment offsets; absolute
// evidences add them back.
struct DensityTable {
  int segments = 0;
  int branches = 0;
  std::vector<double> logd;        // segments x branches
  std::vector<double> lin;         // exp(logd - offset)
  std::vector<double> offset;      // per segment

  double log_at(int ell0, uint32_t b) const { return logd[size_t(ell0) * branches + b]; }
  double lin_at(int ell0, uint32_t b) const { return lin[size_t(ell0) * branches + b]; }
  std::span<const double> lin_segment(int ell0) const {
    return {lin.data() + size_t(ell0) * branches, size_t(branches)};
  }
  std::span<const double> log_segment(int ell0) const {
    return {logd.data() + size_t(ell0) * branches, size_t(branches)};
  }

  // Rebuilds lin/offset from logd; use after editing logd.
  void rescale();

  static DensityTable from_log(int segments, int branches, std::vector<double> logd);
};

DensityTable branch_densities(const Trellis& trellis, const ReceivedSequence& y);

}  // namespace tbrova
