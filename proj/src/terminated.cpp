#include "tbrova/terminated.hpp"

#include <cmath>
#include <stdexcept>

#include "tbrova/numeric.hpp"

namespace tbrova {

namespace {

void check_args(const Trellis& t, const DensityTable& d, uint32_t s) {
  if (d.segments != t.length() || uint32_t(d.branches) != t.branch_count())
    throw std::invalid_argument("density table does not match trellis dimensions");
  if (s >= t.num_states()) throw std::invalid_argument("start state out of range");
}

double prior_bits(const Trellis& t) {
  // log2 of the number of info words sharing one start state
  return double(t.code().k * t.length() - t.code().nu);
}

}  // namespace

namespace detail {

void survivor_traceback(const Trellis& t, const std::vector<int32_t>& pred, uint32_t state,
                        InfoWord& info, Codeword& cw) {
  const int L = t.length();
  const uint32_t S = t.num_states();
  const int k = t.code().k, n = t.code().n;
  info.assign(size_t(k) * L, 0);
  cw.bits.assign(size_t(n) * L, 0);
  cw.start_state = state;  // overwritten below with the path's first state
  uint32_t cur = state;
  for (int ell = L; ell >= 1; --ell) {
    int32_t bidx = pred[size_t(ell - 1) * S + cur];
    if (bidx < 0) throw std::runtime_error("survivor chain broken; densities degenerate");
    const Branch& b = t.branch(uint32_t(bidx));
    for (int i = 0; i < k; ++i) info[size_t(ell - 1) * k + i] = uint8_t((b.input >> i) & 1u);
    for (int j = 0; j < n; ++j) cw.bits[size_t(ell - 1) * n + j] = uint8_t((b.output >> j) & 1u);
    cur = b.from;
  }
  cw.start_state = cur;
}

}  // namespace detail

ViterbiResult viterbi(const Trellis& trellis, const DensityTable& dens, uint32_t start_state) {
  check_args(trellis, dens, start_state);
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  std::vector<double> metric(S, neg_inf), next(S);
  metric[start_state] = 0.0;
  std::vector<int32_t> pred(size_t(L) * S, -1);
  for (int ell = 1; ell <= L; ++ell) {
    const double* lrow = dens.logd.data() + size_t(ell - 1) * dens.branches;
    for (uint32_t r = 0; r < S; ++r) {
      double best = neg_inf;
      int32_t bi = -1;
      if (trellis.reaches(r, ell, start_state)) {
        for (uint32_t bidx : trellis.incoming(r)) {
          double cand = metric[trellis.branch(bidx).from] + lrow[bidx];
          if (cand > best) {
            best = cand;
            bi = int32_t(bidx);
          }
        }
      }
      next[r] = best;
      pred[size_t(ell - 1) * S + r] = bi;
    }
    std::swap(metric, next);
  }
  ViterbiResult res;
  res.log_likelihood = metric[start_state];
  detail::survivor_traceback(trellis, pred, start_state, res.info, res.codeword);
  return res;
}

ViterbiResult viterbi(const Trellis& trellis, const ReceivedSequence& y, uint32_t start_state) {
  return viterbi(trellis, branch_densities(trellis, y), start_state);
}

RovaResult rova(const Trellis& trellis, const DensityTable& dens, uint32_t start_state,
                OpCounters* ops, RovaTrace* trace) {
  check_args(trellis, dens, start_state);
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  const uint32_t A = trellis.num_inputs();
  const uint32_t B = trellis.branch_count();

  std::vector<double> metric(S, neg_inf), next_metric(S);
  std::vector<double> W(S, 0.0), N(S, 0.0), Wn(S), Nn(S);
  metric[start_state] = 0.0;
  W[start_state] = 1.0;
  std::vector<int32_t> pred(size_t(L) * S, -1);
  std::vector<double> tW(A), tN(A);
  double log_delta_acc = 0.0;

  for (int ell = 1; ell <= L; ++ell) {
    const double* lrow = dens.logd.data() + size_t(ell - 1) * dens.branches;
    const double* prow = dens.lin.data() + size_t(ell - 1) * dens.branches;
    double delta = 0.0;
    uint64_t delta_adds = 0;
    for (uint32_t r = 0; r < S; ++r) {
      auto inc = trellis.incoming(r);
      double best = neg_inf;
      int best_a = -1;
      double sum = 0.0;
      for (uint32_t a = 0; a < A; ++a) {
        const uint32_t bidx = inc[a];
        const uint32_t m = trellis.branch(bidx).from;
        double cand = metric[m] + lrow[bidx];  // path-metric product
        if (cand > best) {
          best = cand;
          best_a = int(a);
        }
        tW[a] = prow[bidx] * W[m];
        tN[a] = prow[bidx] * N[m];
        sum += tW[a] + tN[a];
      }
      double w_surv = best_a >= 0 ? tW[best_a] : 0.0;
      if (trellis.reaches(r, ell, start_state)) {
        next_metric[r] = best;
        pred[size_t(ell - 1) * S + r] = best_a >= 0 ? int32_t(inc[best_a]) : -1;
        Wn[r] = w_surv;
        Nn[r] = sum - w_surv;
        delta += sum;
        ++delta_adds;
      } else {
        next_metric[r] = neg_inf;
        Wn[r] = 0.0;
        Nn[r] = 0.0;
      }
    }
    if (!(delta > 0.0) || !std::isfinite(delta))
      throw std::runtime_error("per-segment normalizer degenerate; density spread too large");
    for (uint32_t r = 0; r < S; ++r) {
      Wn[r] /= delta;
      Nn[r] /= delta;
    }
    log_delta_acc += std::log(delta) + dens.offset[ell - 1];
    if (ops) {
      ops->multiplications += 3ull * B;     // metric, survivor-correct, nonsurvivor products
      ops->additions += 2ull * B + S + delta_adds;
      ops->divisions += 2ull * S;
    }
    if (trace) {
      double ps = 0.0;
      for (uint32_t r = 0; r < S; ++r) ps += Wn[r] + Nn[r];
      trace->partition_sums.push_back(ps);
    }
    std::swap(metric, next_metric);
    std::swap(W, Wn);
    std::swap(N, Nn);
  }

  RovaResult res;
  res.word_correct_prob = W[start_state];
  res.log_likelihood = metric[start_state];
  res.log_evidence = log_delta_acc - prior_bits(trellis) * std::log(2.0);
  detail::survivor_traceback(trellis, pred, start_state, res.info, res.codeword);
  if (ops && ops->segments < L) ops->segments = L;
  return res;
}

RovaResult rova(const Trellis& trellis, const ReceivedSequence& y, uint32_t start_state,
                OpCounters* ops, RovaTrace* trace) {
  return rova(trellis, branch_densities(trellis, y), start_state, ops, trace);
}

ApproxRovaResult approx_rova(const Trellis& trellis, const DensityTable& dens,
                             uint32_t start_state, OpCounters* ops) {
  check_args(trellis, dens, start_state);
  const int L = trellis.length();
  const uint32_t S = trellis.num_states();
  const uint32_t A = trellis.num_inputs();
  const uint32_t B = trellis.branch_count();

  std::vector<double> metric(S, neg_inf), next_metric(S);
  metric[start_state] = 0.0;
  std::vector<int32_t> pred(size_t(L) * S, -1);
  std::vector<double> ratio_log(size_t(L) * S, 0.0);  // survivor's share of each merge
  std::vector<double> v(A);

  for (int ell = 1; ell <= L; ++ell) {
    const double* lrow = dens.logd.data() + size_t(ell - 1) * dens.branches;
    uint64_t live = 0;
    for (uint32_t r = 0; r < S; ++r) {
      auto inc = trellis.incoming(r);
      double best = neg_inf;
      int best_a = -1;
      for (uint32_t a = 0; a < A; ++a) {
        const uint32_t bidx = inc[a];
        v[a] = metric[trellis.branch(bidx).from] + lrow[bidx];
        if (v[a] > best) {
          best = v[a];
          best_a = int(a);
        }
      }
      if (best_a < 0 || !trellis.reaches(r, ell, start_state)) {
        next_metric[r] = neg_inf;
        pred[size_t(ell - 1) * S + r] = -1;
        continue;
      }
      ++live;
      next_metric[r] = best;
      pred[size_t(ell - 1) * S + r] = int32_t(inc[best_a]);
      // log of (survivor branch-weighted probability / sum of merging probabilities)
      ratio_log[size_t(ell - 1) * S + r] = best - log_sum_exp({v.data(), size_t(A)});
    }
    // +1 multiplication: the reliability consumes one stored ratio per segment
    // when it is accumulated along the decoded path below
    if (ops) {
      ops->multiplications += B + 1;
      ops->additions += live * (A - 1);
      ops->divisions += live;
    }
    std::swap(metric, next_metric);
  }

  // product of merge ratios along the decoded path, kept in the log domain
  double logq = 0.0;
  {
    uint32_t cur = start_state;
    for (int ell = L; ell >= 1; --ell) {
      logq += ratio_log[size_t(ell - 1) * S + cur];
      const int32_t bidx = pred[size_t(ell - 1) * S + cur];
      if (bidx < 0)
        throw std::runtime_error("survivor chain broken; branch densities degenerate");
      cur = trellis.branch(uint32_t(bidx)).from;
    }
  }

  ApproxRovaResult res;
  res.word_correct_prob = std::exp(logq);
  res.log_likelihood = metric[start_state];
  res.log_evidence = metric[start_state] - prior_bits(trellis) * std::log(2.0) - logq;
  detail::survivor_traceback(trellis, pred, start_state, res.info, res.codeword);
  if (ops && ops->segments < L) ops->segments = L;
  return res;
}

ApproxRovaResult approx_rova(const Trellis& trellis, const ReceivedSequence& y,
                             uint32_t start_state, OpCounters* ops) {
  return approx_rova(trellis, branch_densities(trellis, y), start_state, ops);
}

}  // namespace tbrova
