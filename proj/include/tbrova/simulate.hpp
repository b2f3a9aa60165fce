#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tbrova/tailbiting.hpp"

namespace tbrova {

enum class DecoderKind { tb_rova, approx_tb_rova, tb_sea_rova, wava_prc, tb_bcjr_rova };

const char* decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(const std::string& name);  // throws on unknown name

struct ExperimentConfig {
  CodeSpec code;
  int length = 0;
  ChannelKind channel = ChannelKind::awgn;
  std::vector<double> ebn0_db;
  int words = 0;
  DecoderKind decoder = DecoderKind::tb_rova;
  uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency
  int wava_iters = 2;
};

// One decode; word index i is reproducible from (seed, i) alone, and the
// received sequence depends only on (seed, i), not on the decoder, so
// different decoders can share realizations.
DecodeResult decode_word(DecoderKind kind, const Trellis& trellis, const DensityTable& dens,
                         int wava_iters = 2);

struct ResultRow {
  double ebn0_db = 0.0;
  double snr_db = 0.0;
  std::string decoder;
  int words = 0;
  long errors = 0;
  double actual_wer = 0.0;
  double mean_computed_wer = 0.0;
  double mean_computed_correct_prob = 0.0;
  double wilson_95_halfwidth = 0.0;
  double adds_per_seg = 0.0;
  double mults_per_seg = 0.0;
  double divs_per_seg = 0.0;
};

std::vector<ResultRow> run_wer_sweep(const ExperimentConfig& config);

// Fixed column set; the measured-rate field is left blank below 100 errors,
// the usual plotting floor for a trustworthy point.
std::string wer_csv(const std::vector<ResultRow>& rows);

struct HistogramRow {
  int word_index = 0;
  double computed_error_prob = 0.0;  // 1 - word_correct_prob
  bool correct = false;
};

// Per-word reliabilities at a single grid point.
std::vector<HistogramRow> run_histogram(const ExperimentConfig& config, double ebn0_db);
std::string histogram_csv(const std::vector<HistogramRow>& rows, DecoderKind kind,
                          double ebn0_db);

// counts[d] covers (10^-(d+1), 10^-d] for d < decades; counts[decades] is
// everything at or below 10^-decades.
std::vector<uint64_t> decade_bin_counts(const std::vector<double>& probs, int decades);
std::string decade_csv(const std::vector<uint64_t>& counts);

// 95% Wilson score interval half-width for errors/n.
double wilson_halfwidth(long errors, long n);

// Closed-form per-segment arithmetic for each decoder selection, parametric
// in (k, nu) with q = 2.
struct PerSegmentOps {
  double adds = 0.0;
  double mults = 0.0;
  double divs = 0.0;
};
PerSegmentOps nominal_ops(DecoderKind kind, int k, int nu);

struct OpReportRow {
  std::string algorithm;
  PerSegmentOps measured;
  PerSegmentOps nominal;
};

// Runs every decoder on a few shared words and reports measured per-segment
// counters beside the closed forms.
std::vector<OpReportRow> report_op_counts(const ExperimentConfig& config, int sample_words = 4);
std::string op_report_text(const std::vector<OpReportRow>& rows);

// Plain key=value lines; '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

}  // namespace tbrova
