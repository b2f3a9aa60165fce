#include "tbrova/tailbiting.hpp"

#include <cmath>
#include <stdexcept>

#include "tbrova/numeric.hpp"

namespace tbrova {

namespace {

void check_dims(const Trellis& t, const DensityTable& d) {
  if (d.segments != t.length() || uint32_t(d.branches) != t.branch_count())
    throw std::invalid_argument("density table does not match trellis dimensions");
}

uint32_t argmax_smallest(const std::vector<double>& v) {
  uint32_t best = 0;
  for (uint32_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

uint32_t StatePosterior::map_state() const { return argmax_smallest(probs); }

DecodeResult tb_rova(const Trellis& trellis, const DensityTable& dens) {
  check_dims(trellis, dens);
  const uint32_t S = trellis.num_states();
  OpCounters ops;
  std::vector<RovaResult> per_state(S);
  std::vector<char> alive(S, 0);
  std::vector<double> log_ev(S, neg_inf), ll(S, neg_inf);
  for (uint32_t s = 0; s < S; ++s) {
    try {
      per_state[s] = rova(trellis, dens, s, &ops);
    } catch (const std::runtime_error&) {
      // the whole class conditioned on s underflows double range; its
      // posterior weight is zero to working precision
      continue;
    }
    alive[s] = 1;
    log_ev[s] = per_state[s].log_evidence;
    ll[s] = per_state[s].log_likelihood;
  }
  uint32_t s_hat = argmax_smallest(ll);
  if (!alive[s_hat])
    throw std::runtime_error("per-segment normalizer degenerate; density spread too large");
  double lse = log_sum_exp(log_ev);
  DecodeResult res;
  res.state_posterior.probs.resize(S);
  for (uint32_t s = 0; s < S; ++s) res.state_posterior.probs[s] = std::exp(log_ev[s] - lse);
  res.info = per_state[s_hat].info;
  res.codeword = per_state[s_hat].codeword;
  res.word_correct_prob = per_state[s_hat].word_correct_prob * res.state_posterior.probs[s_hat];
  res.counters = ops;
  return res;
}

DecodeResult approx_tb_rova(const Trellis& trellis, const DensityTable& dens) {
  check_dims(trellis, dens);
  const uint32_t S = trellis.num_states();
  OpCounters ops;
  std::vector<ApproxRovaResult> per_state;
  per_state.reserve(S);
  std::vector<double> log_ev(S), ll(S);
  for (uint32_t s = 0; s < S; ++s) {
    per_state.push_back(approx_rova(trellis, dens, s, &ops));
    log_ev[s] = per_state[s].log_evidence;
    ll[s] = per_state[s].log_likelihood;
  }
  // selection by path likelihood, exactly as the exact decoder, so both
  // decode the same word
  uint32_t s_hat = argmax_smallest(ll);
  double lse = log_sum_exp(log_ev);
  DecodeResult res;
  res.state_posterior.probs.resize(S);
  for (uint32_t s = 0; s < S; ++s) res.state_posterior.probs[s] = std::exp(log_ev[s] - lse);
  res.info = per_state[s_hat].info;
  res.codeword = per_state[s_hat].codeword;
  res.word_correct_prob = per_state[s_hat].word_correct_prob * res.state_posterior.probs[s_hat];
  res.counters = ops;
  return res;
}

namespace detail {

void sea_forward(const Trellis& trellis, const DensityTable& dens,
                 const std::vector<Branch>* candidate_path, std::vector<double>& table,
                 double* candidate_prob, OpCounters& ops, PrcTrace* trace,
                 bool generic_accumulation) {
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  const uint32_t A = trellis.num_inputs();
  const int K = trellis.unconstrained_length();

  // flattened incoming adjacency: branch index and predecessor per (state, a)
  std::vector<uint32_t> inc_b(size_t(S) * A), inc_m(size_t(S) * A);
  for (uint32_t r = 0; r < S; ++r) {
    auto inc = trellis.incoming(r);
    for (uint32_t a = 0; a < A; ++a) {
      inc_b[size_t(r) * A + a] = inc[a];
      inc_m[size_t(r) * A + a] = trellis.branch(inc[a]).from;
    }
  }

  table.assign(size_t(S) * S, 0.0);
  for (uint32_t s = 0; s < S; ++s) table[size_t(s) * S + s] = 1.0 / double(S);
  std::vector<double> next(size_t(S) * S);
  double cand = 1.0 / double(S);
  const bool unroll2 = !generic_accumulation && A == 2;

  for (int ell = 1; ell <= L; ++ell) {
    const double* prow = dens.lin.data() + size_t(ell - 1) * dens.branches;
    for (uint32_t srow = 0; srow < S; ++srow) {
      const double* p = table.data() + size_t(srow) * S;
      double* u = next.data() + size_t(srow) * S;
      if (unroll2) {
        for (uint32_t r = 0; r < S; ++r) {
          const size_t base = size_t(r) * 2;
          u[r] = prow[inc_b[base]] * p[inc_m[base]] + prow[inc_b[base + 1]] * p[inc_m[base + 1]];
        }
      } else {
        for (uint32_t r = 0; r < S; ++r) {
          double acc = 0.0;
          const size_t base = size_t(r) * A;
          for (uint32_t a = 0; a < A; ++a) acc += prow[inc_b[base + a]] * p[inc_m[base + a]];
          u[r] = acc;
        }
      }
    }
    double delta = 0.0;
    uint64_t delta_adds = 0;
    if (ell <= K) {
      for (double x : next) delta += x;
      delta_adds = next.size();
    } else {
      // structurally dead (start, state) pairs drop out of the normalizer
      for (uint32_t srow = 0; srow < S; ++srow) {
        double* u = next.data() + size_t(srow) * S;
        for (uint32_t r = 0; r < S; ++r) {
          if (trellis.reaches(r, ell, srow)) {
            delta += u[r];
            ++delta_adds;
          } else {
            u[r] = 0.0;
          }
        }
      }
    }
    if (!(delta > 0.0) || !std::isfinite(delta))
      throw std::runtime_error("per-segment normalizer degenerate; density spread too large");
    for (double& x : next) x /= delta;
    ops.multiplications += uint64_t(S) * S * A;
    ops.additions += uint64_t(S) * S * (A - 1) + delta_adds;
    ops.divisions += uint64_t(S) * S;
    if (candidate_path) {
      const Branch& cb = (*candidate_path)[ell - 1];
      cand = cand * prow[trellis.branch_index(cb.from, cb.input)];
      cand /= delta;
      ops.multiplications += 1;
      ops.divisions += 1;
    }
    table.swap(next);
    if (trace) {
      double ps = 0.0;
      for (double x : table) ps += x;
      trace->partition_sums.push_back(ps);
      if (candidate_path) {
        trace->candidate_probs.push_back(cand);
        uint32_t s_hat = (*candidate_path)[0].from;
        trace->overall_at_candidate.push_back(
            table[size_t(s_hat) * S + (*candidate_path)[ell - 1].to]);
      }
    }
  }
  if (candidate_prob) *candidate_prob = cand;
  if (ops.segments < L) ops.segments = L;
}

}  // namespace detail

PrcResult prc(const Trellis& trellis, const DensityTable& dens, const Codeword& candidate,
              uint32_t s_hat, PrcTrace* trace) {
  check_dims(trellis, dens);
  if (s_hat >= trellis.num_states()) throw std::invalid_argument("s_hat out of range");
  if (candidate.start_state != s_hat)
    throw std::invalid_argument("candidate start state disagrees with s_hat");
  std::vector<Branch> path = trellis.path_from_codeword(candidate);
  PrcResult res;
  std::vector<double> table;
  detail::sea_forward(trellis, dens, &path, table, &res.word_correct_prob, res.counters, trace,
                      trellis.code().k != 1);
  // last-segment restriction leaves only the diagonal populated
  const uint32_t S = trellis.num_states();
  res.state_posterior.probs.resize(S);
  for (uint32_t s = 0; s < S; ++s) res.state_posterior.probs[s] = table[size_t(s) * S + s];
  return res;
}

SeaResult tb_sea(const Trellis& trellis, const DensityTable& dens, PrcTrace* trace) {
  check_dims(trellis, dens);
  SeaResult res;
  std::vector<double> table;
  detail::sea_forward(trellis, dens, nullptr, table, nullptr, res.counters, trace,
                      trellis.code().k != 1);
  const uint32_t S = trellis.num_states();
  res.state_posterior.probs.resize(S);
  for (uint32_t s = 0; s < S; ++s) res.state_posterior.probs[s] = table[size_t(s) * S + s];
  res.map_state = res.state_posterior.map_state();
  return res;
}

DecodeResult tb_sea_rova(const Trellis& trellis, const DensityTable& dens) {
  SeaResult sea = tb_sea(trellis, dens);
  OpCounters ops = sea.counters;
  RovaResult rv = rova(trellis, dens, sea.map_state, &ops);
  DecodeResult res;
  res.info = rv.info;
  res.codeword = rv.codeword;
  res.word_correct_prob = rv.word_correct_prob * sea.state_posterior.probs[sea.map_state];
  res.state_posterior = sea.state_posterior;
  res.counters = ops;
  return res;
}

StatePosterior tb_bcjr_state_estimate(const Trellis& trellis, const DensityTable& dens,
                                      OpCounters* ops) {
  check_dims(trellis, dens);
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  const uint32_t A = trellis.num_inputs();
  std::vector<double> alpha(S, 1.0 / double(S)), next(S);
  for (int ell = 1; ell <= L; ++ell) {
    const double* prow = dens.lin.data() + size_t(ell - 1) * dens.branches;
    double norm = 0.0;
    for (uint32_t r = 0; r < S; ++r) {
      double acc = 0.0;
      for (uint32_t bidx : trellis.incoming(r)) acc += prow[bidx] * alpha[trellis.branch(bidx).from];
      next[r] = acc;
      norm += acc;
    }
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("per-segment normalizer degenerate; density spread too large");
    for (uint32_t r = 0; r < S; ++r) next[r] /= norm;
    if (ops) {
      ops->multiplications += uint64_t(S) * A;
      ops->additions += uint64_t(S) * (A - 1) + S;
      ops->divisions += S;
    }
    std::swap(alpha, next);
  }
  if (ops && ops->segments < L) ops->segments = L;
  StatePosterior post;
  post.probs = std::move(alpha);
  return post;
}

DecodeResult tb_bcjr_rova(const Trellis& trellis, const DensityTable& dens) {
  OpCounters ops;
  StatePosterior est = tb_bcjr_state_estimate(trellis, dens, &ops);
  uint32_t s_hat = est.map_state();
  RovaResult rv = rova(trellis, dens, s_hat, &ops);
  DecodeResult res;
  res.info = rv.info;
  res.codeword = rv.codeword;
  res.word_correct_prob = rv.word_correct_prob * est.probs[s_hat];
  res.state_posterior = std::move(est);
  res.counters = ops;
  return res;
}

WavaResult wava_decode(const Trellis& trellis, const DensityTable& dens, int max_iters,
                       OpCounters* ops) {
  check_dims(trellis, dens);
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  const uint32_t B = trellis.branch_count();

  std::vector<double> start(S, 0.0), metric(S), next(S);
  std::vector<int32_t> pred(size_t(L) * S, -1);
  std::vector<uint32_t> label(S), label_next(S);

  WavaResult best;  // best tail-biting survivor over all passes
  double best_ll = neg_inf;
  bool have_best = false;

  auto extract = [&](uint32_t end_state) {
    WavaResult w;
    detail::survivor_traceback(trellis, pred, end_state, w.info, w.codeword);
    return w;
  };

  for (int pass = 1; pass <= max_iters; ++pass) {
    metric = start;
    for (uint32_t r = 0; r < S; ++r) label[r] = r;
    for (int ell = 1; ell <= L; ++ell) {
      const double* lrow = dens.logd.data() + size_t(ell - 1) * dens.branches;
      for (uint32_t r = 0; r < S; ++r) {
        double bm = neg_inf;
        int32_t bi = -1;
        for (uint32_t bidx : trellis.incoming(r)) {
          double cand = metric[trellis.branch(bidx).from] + lrow[bidx];
          if (cand > bm) {
            bm = cand;
            bi = int32_t(bidx);
          }
        }
        next[r] = bm;
        pred[size_t(ell - 1) * S + r] = bi;
        label_next[r] = bi >= 0 ? label[trellis.branch(uint32_t(bi)).from] : r;
      }
      std::swap(metric, next);
      std::swap(label, label_next);
      if (ops) ops->multiplications += B;
    }
    uint32_t best_end = 0;
    for (uint32_t r = 1; r < S; ++r)
      if (metric[r] > metric[best_end]) best_end = r;

    for (uint32_t r = 0; r < S; ++r) {
      if (label[r] != r) continue;
      double ll = metric[r] - start[r];
      if (ll > best_ll) {
        best_ll = ll;
        WavaResult w = extract(r);
        best.info = std::move(w.info);
        best.codeword = std::move(w.codeword);
        best.log_likelihood = ll;
        have_best = true;
      }
    }

    if (label[best_end] == best_end) {
      WavaResult w = extract(best_end);
      w.log_likelihood = metric[best_end] - start[best_end];
      w.iterations = pass;
      w.converged = true;
      if (ops && ops->segments < L) ops->segments = L;
      return w;
    }

    double m = metric[argmax_smallest(metric)];
    for (uint32_t r = 0; r < S; ++r) start[r] = metric[r] - m;
  }

  if (have_best) {
    best.iterations = max_iters;
    if (ops && ops->segments < L) ops->segments = L;
    return best;
  }

  // no survivor bit its tail in any pass: decode each terminated trellis
  WavaResult w;
  double wll = neg_inf;
  for (uint32_t s = 0; s < S; ++s) {
    ViterbiResult v = viterbi(trellis, dens, s);
    if (v.log_likelihood > wll) {
      wll = v.log_likelihood;
      w.info = std::move(v.info);
      w.codeword = std::move(v.codeword);
      w.log_likelihood = v.log_likelihood;
    }
  }
  if (ops) {
    ops->multiplications += uint64_t(S) * B * uint64_t(L);
    if (ops->segments < L) ops->segments = L;
  }
  w.iterations = max_iters;
  w.exhaustive_fallback = true;
  return w;
}

DecodeResult wava_prc(const Trellis& trellis, const DensityTable& dens, int max_iters) {
  OpCounters ops;
  WavaResult w = wava_decode(trellis, dens, max_iters, &ops);
  PrcResult p = prc(trellis, dens, w.codeword, w.codeword.start_state);
  DecodeResult res;
  res.info = std::move(w.info);
  res.codeword = std::move(w.codeword);
  res.word_correct_prob = p.word_correct_prob;
  res.state_posterior = std::move(p.state_posterior);
  ops += p.counters;
  res.counters = ops;
  return res;
}

DecodeResult tb_rova(const Trellis& t, const ReceivedSequence& y) {
  return tb_rova(t, branch_densities(t, y));
}
DecodeResult approx_tb_rova(const Trellis& t, const ReceivedSequence& y) {
  return approx_tb_rova(t, branch_densities(t, y));
}
PrcResult prc(const Trellis& t, const ReceivedSequence& y, const Codeword& candidate,
              uint32_t s_hat, PrcTrace* trace) {
  return prc(t, branch_densities(t, y), candidate, s_hat, trace);
}
SeaResult tb_sea(const Trellis& t, const ReceivedSequence& y, PrcTrace* trace) {
  return tb_sea(t, branch_densities(t, y), trace);
}
DecodeResult tb_sea_rova(const Trellis& t, const ReceivedSequence& y) {
  return tb_sea_rova(t, branch_densities(t, y));
}
StatePosterior tb_bcjr_state_estimate(const Trellis& t, const ReceivedSequence& y,
                                      OpCounters* ops) {
  return tb_bcjr_state_estimate(t, branch_densities(t, y), ops);
}
DecodeResult tb_bcjr_rova(const Trellis& t, const ReceivedSequence& y) {
  return tb_bcjr_rova(t, branch_densities(t, y));
}
WavaResult wava_decode(const Trellis& t, const ReceivedSequence& y, int max_iters,
                       OpCounters* ops) {
  return wava_decode(t, branch_densities(t, y), max_iters, ops);
}
DecodeResult wava_prc(const Trellis& t, const ReceivedSequence& y, int max_iters) {
  return wava_prc(t, branch_densities(t, y), max_iters);
}

}  // namespace tbrova
