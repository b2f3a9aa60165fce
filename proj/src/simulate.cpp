#include "tbrova/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tbrova/rng.hpp"

namespace tbrova {

namespace {

constexpr int kChunkWords = 32;  // aggregation granularity, independent of thread count

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ChannelParams point_params(const ExperimentConfig& config, double ebn0_db) {
  if (config.channel == ChannelKind::awgn)
    return ChannelParams::awgn(sigma2_from_ebn0(config.code, ebn0_db));
  return ChannelParams::bsc(bsc_crossover_from_ebn0(config.code, ebn0_db));
}

struct WordOutcome {
  bool correct = false;
  double p = 0.0;  // decoder's computed P(word correct)
  OpCounters ops;
};

WordOutcome simulate_word(const Trellis& trellis, DecoderKind kind, const ChannelParams& params,
                          uint64_t seed, int index, int wava_iters) {
  const CodeSpec& code = trellis.code();
  const uint64_t word_seed = substream_seed(seed, uint64_t(index));
  std::mt19937_64 rng(word_seed);
  std::uniform_int_distribution<int> bit(0, 1);
  InfoWord info(size_t(code.k) * size_t(trellis.length()));
  for (auto& b : info) b = uint8_t(bit(rng));
  const Codeword sent = trellis.encode(info);
  // noise stream keyed off the word seed only, so every decoder sees the
  // same realization for a given (seed, index)
  const ReceivedSequence y = transmit(sent, code.n, params, substream_seed(word_seed, 1));
  const DensityTable dens = branch_densities(trellis, y);
  const DecodeResult r = decode_word(kind, trellis, dens, wava_iters);
  WordOutcome out;
  out.correct = (r.codeword.bits == sent.bits);
  out.p = r.word_correct_prob;
  out.ops = r.counters;
  return out;
}

// Fills outcomes[0..words); worker threads claim fixed 32-word chunks and the
// caller reduces in index order, so results do not depend on thread count.
void run_words(const Trellis& trellis, DecoderKind kind, const ChannelParams& params,
               uint64_t seed, int words, int threads, int wava_iters,
               std::vector<WordOutcome>& outcomes) {
  outcomes.assign(size_t(words), WordOutcome{});
  int nthreads = threads == 0 ? int(std::thread::hardware_concurrency()) : threads;
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min<int>(nthreads, std::max(1, (words + kChunkWords - 1) / kChunkWords));
  if (nthreads == 1) {
    for (int i = 0; i < words; ++i)
      outcomes[size_t(i)] = simulate_word(trellis, kind, params, seed, i, wava_iters);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const int begin = next.fetch_add(kChunkWords);
        if (begin >= words || failed.load()) return;
        const int end = std::min(begin + kChunkWords, words);
        for (int i = begin; i < end; ++i)
          outcomes[size_t(i)] = simulate_word(trellis, kind, params, seed, i, wava_iters);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(size_t(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

const char* decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::tb_rova: return "tb_rova";
    case DecoderKind::approx_tb_rova: return "approx_tb_rova";
    case DecoderKind::tb_sea_rova: return "tb_sea_rova";
    case DecoderKind::wava_prc: return "wava_prc";
    case DecoderKind::tb_bcjr_rova: return "tb_bcjr_rova";
  }
  throw std::logic_error("unhandled decoder kind");
}

DecoderKind decoder_from_name(const std::string& name) {
  for (DecoderKind kind : {DecoderKind::tb_rova, DecoderKind::approx_tb_rova,
                           DecoderKind::tb_sea_rova, DecoderKind::wava_prc,
                           DecoderKind::tb_bcjr_rova})
    if (name == decoder_name(kind)) return kind;
  throw std::invalid_argument("unknown decoder name: " + name);
}

DecodeResult decode_word(DecoderKind kind, const Trellis& trellis, const DensityTable& dens,
                         int wava_iters) {
  switch (kind) {
    case DecoderKind::tb_rova: return tb_rova(trellis, dens);
    case DecoderKind::approx_tb_rova: return approx_tb_rova(trellis, dens);
    case DecoderKind::tb_sea_rova: return tb_sea_rova(trellis, dens);
    case DecoderKind::wava_prc: return wava_prc(trellis, dens, wava_iters);
    case DecoderKind::tb_bcjr_rova: return tb_bcjr_rova(trellis, dens);
  }
  throw std::logic_error("unhandled decoder kind");
}

std::vector<ResultRow> run_wer_sweep(const ExperimentConfig& config) {
  if (config.words <= 0) throw std::invalid_argument("word count must be positive");
  if (config.ebn0_db.empty()) throw std::invalid_argument("empty Eb/N0 grid");
  const Trellis trellis(config.code, config.length);
  std::vector<ResultRow> rows;
  rows.reserve(config.ebn0_db.size());
  std::vector<WordOutcome> outcomes;
  for (double ebn0 : config.ebn0_db) {
    const ChannelParams params = point_params(config, ebn0);
    run_words(trellis, config.decoder, params, config.seed, config.words, config.threads,
              config.wava_iters, outcomes);
    ResultRow row;
    row.ebn0_db = ebn0;
    row.snr_db = 10.0 * std::log10(snr_from_ebn0(config.code, ebn0));
    row.decoder = decoder_name(config.decoder);
    row.words = config.words;
    uint64_t adds = 0, mults = 0, divs = 0;
    double sum_p = 0.0;
    for (const WordOutcome& o : outcomes) {
      if (!o.correct) ++row.errors;
      sum_p += o.p;
      adds += o.ops.additions;
      mults += o.ops.multiplications;
      divs += o.ops.divisions;
    }
    row.actual_wer = double(row.errors) / double(config.words);
    row.mean_computed_correct_prob = sum_p / double(config.words);
    row.mean_computed_wer = 1.0 - row.mean_computed_correct_prob;
    row.wilson_95_halfwidth = wilson_halfwidth(row.errors, config.words);
    const double segments = double(config.words) * double(config.length);
    row.adds_per_seg = double(adds) / segments;
    row.mults_per_seg = double(mults) / segments;
    row.divs_per_seg = double(divs) / segments;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string wer_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "ebn0_db,snr_db,decoder,words,actual_wer,mean_computed_wer,"
      "mean_computed_correct_prob,wilson_95_halfwidth,adds_per_seg,mults_per_seg,divs_per_seg\n";
  for (const ResultRow& r : rows) {
    out += fmt_g(r.ebn0_db);
    out += ',';
    out += fmt_g(r.snr_db);
    out += ',';
    out += r.decoder;
    out += ',';
    out += std::to_string(r.words);
    out += ',';
    if (r.errors >= 100) out += fmt_g(r.actual_wer);  // blank below the plotting floor
    out += ',';
    out += fmt_g(r.mean_computed_wer);
    out += ',';
    out += fmt_g(r.mean_computed_correct_prob);
    out += ',';
    out += fmt_g(r.wilson_95_halfwidth);
    out += ',';
    out += fmt_g(r.adds_per_seg);
    out += ',';
    out += fmt_g(r.mults_per_seg);
    out += ',';
    out += fmt_g(r.divs_per_seg);
    out += '\n';
  }
  return out;
}

std::vector<HistogramRow> run_histogram(const ExperimentConfig& config, double ebn0_db) {
  if (config.words <= 0) throw std::invalid_argument("word count must be positive");
  const Trellis trellis(config.code, config.length);
  const ChannelParams params = point_params(config, ebn0_db);
  std::vector<WordOutcome> outcomes;
  run_words(trellis, config.decoder, params, config.seed, config.words, config.threads,
            config.wava_iters, outcomes);
  std::vector<HistogramRow> rows(outcomes.size());
  for (size_t i = 0; i < outcomes.size(); ++i) {
    rows[i].word_index = int(i);
    rows[i].computed_error_prob = 1.0 - outcomes[i].p;
    rows[i].correct = outcomes[i].correct;
  }
  return rows;
}

std::string histogram_csv(const std::vector<HistogramRow>& rows, DecoderKind kind,
                          double ebn0_db) {
  std::string out = "word_index,decoder,ebn0_db,computed_error_prob,correct\n";
  for (const HistogramRow& r : rows) {
    out += std::to_string(r.word_index);
    out += ',';
    out += decoder_name(kind);
    out += ',';
    out += fmt_g(ebn0_db);
    out += ',';
    out += fmt_g(r.computed_error_prob);
    out += ',';
    out += r.correct ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<uint64_t> decade_bin_counts(const std::vector<double>& probs, int decades) {
  if (decades < 1) throw std::invalid_argument("decades must be positive");
  std::vector<uint64_t> counts(size_t(decades) + 1, 0);
  for (double p : probs) {
    int d;
    if (!(p > 0.0)) {
      d = decades;  // exact zero and below sink to the underflow bin
    } else {
      d = int(std::floor(-std::log10(p)));
      if (d < 0) d = 0;
      if (d > decades) d = decades;
    }
    ++counts[size_t(d)];
  }
  return counts;
}

std::string decade_csv(const std::vector<uint64_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("empty decade counts");
  const int decades = int(counts.size()) - 1;
  std::string out = "bin_lo,bin_hi,count\n";
  for (int d = 0; d < decades; ++d) {
    out += fmt_g(std::pow(10.0, -(d + 1)));
    out += ',';
    out += fmt_g(std::pow(10.0, -d));
    out += ',';
    out += std::to_string(counts[size_t(d)]);
    out += '\n';
  }
  out += "0,";
  out += fmt_g(std::pow(10.0, -decades));
  out += ',';
  out += std::to_string(counts[size_t(decades)]);
  out += '\n';
  return out;
}

double wilson_halfwidth(long errors, long n) {
  if (n <= 0) return 0.0;
  const double z = 1.96;
  const double p = double(errors) / double(n);
  const double nn = double(n);
  return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / (1.0 + z * z / nn);
}

PerSegmentOps nominal_ops(DecoderKind kind, int k, int nu) {
  if (k < 1 || nu < 1) throw std::invalid_argument("need k >= 1 and nu >= 1");
  const double qn = std::ldexp(1.0, nu);        // q^nu states
  const double qk = std::ldexp(1.0, k);         // q^k inputs
  const double S2 = std::ldexp(1.0, 2 * nu);    // q^{2nu}
  const double S2k = std::ldexp(1.0, 2 * nu + k);
  const double Bk = std::ldexp(1.0, nu + k);    // q^{nu+k} branches
  PerSegmentOps r;
  switch (kind) {
    case DecoderKind::tb_rova:
      // q^nu exact per-state passes, each 2q^nu(2q^k - 1) - 1 adds,
      // 3q^{nu+k} mults, 2q^nu divs
      r.adds = qn * (2.0 * qn * (2.0 * qk - 1.0) - 1.0);
      r.mults = 3.0 * S2k;
      r.divs = 2.0 * S2;
      break;
    case DecoderKind::approx_tb_rova:
      // q^nu one-pass approximations, each q^nu(q^k - 1) adds,
      // q^{nu+k} + 1 mults, q^nu divs
      r.adds = S2 * (qk - 1.0);
      r.mults = S2k + qn;
      r.divs = S2;
      break;
    case DecoderKind::tb_sea_rova:
      // dense table recursion plus one exact per-state pass
      r.adds = (S2 + 2.0 * qn) * (2.0 * qk - 1.0) - 2.0;
      r.mults = S2k + 3.0 * Bk;
      r.divs = S2 + 2.0 * qn;
      break;
    case DecoderKind::wava_prc:
      // candidate-tracking dense recursion; path search itself works in
      // the log domain and adds no products
      r.adds = S2 * (2.0 * qk - 1.0) - 1.0;
      r.mults = S2k;
      r.divs = S2 + 1.0;
      break;
    case DecoderKind::tb_bcjr_rova:
      // uniform-start forward sweep plus one exact per-state pass
      r.adds = qn * (qk - 1.0) + qn + 2.0 * qn * (2.0 * qk - 1.0) - 1.0;
      r.mults = Bk + 3.0 * Bk;
      r.divs = 3.0 * qn;
      break;
  }
  return r;
}

std::vector<OpReportRow> report_op_counts(const ExperimentConfig& config, int sample_words) {
  if (sample_words <= 0) throw std::invalid_argument("sample word count must be positive");
  const Trellis trellis(config.code, config.length);
  const double ebn0 = config.ebn0_db.empty() ? 2.0 : config.ebn0_db.front();
  const ChannelParams params = point_params(config, ebn0);
  const DecoderKind kinds[] = {DecoderKind::tb_rova, DecoderKind::approx_tb_rova,
                               DecoderKind::tb_sea_rova, DecoderKind::wava_prc,
                               DecoderKind::tb_bcjr_rova};
  std::vector<OpReportRow> rows;
  rows.reserve(std::size(kinds));
  for (DecoderKind kind : kinds) {
    uint64_t adds = 0, mults = 0, divs = 0;
    for (int i = 0; i < sample_words; ++i) {
      const WordOutcome o =
          simulate_word(trellis, kind, params, config.seed, i, config.wava_iters);
      adds += o.ops.additions;
      mults += o.ops.multiplications;
      divs += o.ops.divisions;
    }
    const double segments = double(sample_words) * double(config.length);
    OpReportRow row;
    row.algorithm = decoder_name(kind);
    row.measured = {double(adds) / segments, double(mults) / segments, double(divs) / segments};
    row.nominal = nominal_ops(kind, config.code.k, config.code.nu);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string op_report_text(const std::vector<OpReportRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %14s %14s %14s %14s %14s %14s\n", "algorithm",
                "adds/seg", "nominal", "mults/seg", "nominal", "divs/seg", "nominal");
  out << line;
  for (const OpReportRow& r : rows) {
    std::snprintf(line, sizeof line, "%-16s %14.1f %14.1f %14.1f %14.1f %14.1f %14.1f\n",
                  r.algorithm.c_str(), r.measured.adds, r.nominal.adds, r.measured.mults,
                  r.nominal.mults, r.measured.divs, r.nominal.divs);
    out << line;
  }
  return out.str();
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    const size_t a = s.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    const size_t b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
  };
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

}  // namespace tbrova
