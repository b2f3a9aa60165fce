#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbrova/simulate.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  for (const std::string& p : split_list(s)) {
    size_t used = 0;
    grid.push_back(std::stod(p, &used));
    if (used != p.size()) throw std::invalid_argument("bad Eb/N0 value: " + p);
  }
  return grid;
}

void parse_rate(const std::string& s, int& k, int& n) {
  const size_t slash = s.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("rate must look like k/n");
  k = std::stoi(s.substr(0, slash));
  n = std::stoi(s.substr(slash + 1));
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tail-biting reliability-output decoder simulator"};

  std::string code_str = "117,127,155";
  std::string rate_str = "1/3";
  int nu = 6;
  int length = 128;
  std::string ebn0_str = "1,1.5,2";
  int words = 1000;
  std::string decoder_str = "tb_rova";
  uint64_t seed = 1;
  std::string channel_str = "awgn";
  std::string out_path;
  bool histogram = false;
  bool op_report = false;
  std::string config_path;
  int threads = 1;
  int decade_bins = 0;
  int wava_iters = 2;

  auto* o_code = app.add_option("--code", code_str, "octal generators, comma separated");
  auto* o_rate = app.add_option("--rate", rate_str, "code rate k/n");
  auto* o_nu = app.add_option("--nu", nu, "encoder memory");
  auto* o_length = app.add_option("--length", length, "trellis segments per word");
  auto* o_ebn0 = app.add_option("--ebn0", ebn0_str, "Eb/N0 grid in dB, comma separated");
  auto* o_words = app.add_option("--words", words, "words per grid point");
  auto* o_decoder = app.add_option(
      "--decoder", decoder_str,
      "tb_rova | approx_tb_rova | tb_sea_rova | wava_prc | tb_bcjr_rova");
  auto* o_seed = app.add_option("--seed", seed, "base seed; word i derives from (seed, i)");
  auto* o_channel = app.add_option("--channel", channel_str, "awgn | bsc");
  auto* o_out = app.add_option("--out", out_path, "output path, '-' or empty for stdout");
  auto* o_hist = app.add_flag("--histogram", histogram,
                              "per-word reliabilities at the first grid point");
  auto* o_opr = app.add_flag("--op-report", op_report, "measured vs nominal counter table");
  app.add_option("--config", config_path, "key=value file; flags override it");
  auto* o_threads = app.add_option("--threads", threads, "worker threads, 0 = all cores");
  auto* o_decades =
      app.add_option("--decade-bins", decade_bins,
                     "with --histogram: also print counts per error-probability decade");
  auto* o_wava = app.add_option("--wava-iters", wava_iters, "wrap-around passes for wava_prc");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      const auto cfg = tbrova::parse_config_file(config_path);
      auto take_str = [&](const char* key, const CLI::Option* opt, std::string& dst) {
        auto it = cfg.find(key);
        if (it != cfg.end() && opt->count() == 0) dst = it->second;
      };
      auto take_int = [&](const char* key, const CLI::Option* opt, int& dst) {
        auto it = cfg.find(key);
        if (it != cfg.end() && opt->count() == 0) dst = std::stoi(it->second);
      };
      take_str("code", o_code, code_str);
      take_str("rate", o_rate, rate_str);
      take_int("nu", o_nu, nu);
      take_int("length", o_length, length);
      take_str("ebn0", o_ebn0, ebn0_str);
      take_int("words", o_words, words);
      take_str("decoder", o_decoder, decoder_str);
      if (auto it = cfg.find("seed"); it != cfg.end() && o_seed->count() == 0)
        seed = std::stoull(it->second);
      take_str("channel", o_channel, channel_str);
      take_str("out", o_out, out_path);
      if (auto it = cfg.find("histogram"); it != cfg.end() && o_hist->count() == 0)
        histogram = (it->second == "1" || it->second == "true");
      if (auto it = cfg.find("op_report"); it != cfg.end() && o_opr->count() == 0)
        op_report = (it->second == "1" || it->second == "true");
      take_int("threads", o_threads, threads);
      take_int("decade_bins", o_decades, decade_bins);
      take_int("wava_iters", o_wava, wava_iters);
    }

    int k = 0, n = 0;
    parse_rate(rate_str, k, n);

    tbrova::ExperimentConfig config;
    config.code = tbrova::build_code(k, n, nu, split_list(code_str));
    config.length = length;
    if (channel_str == "awgn") {
      config.channel = tbrova::ChannelKind::awgn;
    } else if (channel_str == "bsc") {
      config.channel = tbrova::ChannelKind::bsc;
    } else {
      throw std::invalid_argument("channel must be awgn or bsc");
    }
    config.ebn0_db = parse_grid(ebn0_str);
    config.words = words;
    config.decoder = tbrova::decoder_from_name(decoder_str);
    config.seed = seed;
    config.threads = threads;
    config.wava_iters = wava_iters;

    if (op_report) {
      write_output(out_path, tbrova::op_report_text(tbrova::report_op_counts(config)));
      return 0;
    }
    if (histogram) {
      if (config.ebn0_db.empty()) throw std::invalid_argument("empty Eb/N0 grid");
      const double point = config.ebn0_db.front();
      const auto rows = tbrova::run_histogram(config, point);
      std::string text = tbrova::histogram_csv(rows, config.decoder, point);
      if (decade_bins > 0) {
        std::vector<double> probs;
        probs.reserve(rows.size());
        for (const auto& r : rows) probs.push_back(r.computed_error_prob);
        text += tbrova::decade_csv(tbrova::decade_bin_counts(probs, decade_bins));
      }
      write_output(out_path, text);
      return 0;
    }
    write_output(out_path, tbrova::wer_csv(tbrova::run_wer_sweep(config)));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "tbsim: " << e.what() << "\n";
    return 1;
  }
}
