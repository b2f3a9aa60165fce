#pragma once

#include <cstdint>

namespace tbrova {

// Arithmetic performed by the posterior recursions themselves, branch-density
// evaluation excluded.  Path-metric accumulation is counted as the
// multiplication it computes even where the code carries it in log form.
struct OpCounters {
  uint64_t additions = 0;
  uint64_t multiplications = 0;
  uint64_t divisions = 0;
  int segments = 0;  // trellis length of the decode

  OpCounters& operator+=(const OpCounters& o) {
    additions += o.additions;
    multiplications += o.multiplications;
    divisions += o.divisions;
    if (o.segments > segments) segments = o.segments;
    return *this;
  }

  double adds_per_segment() const { return segments ? double(additions) / segments : 0.0; }
  double mults_per_segment() const { return segments ? double(multiplications) / segments : 0.0; }
  double divs_per_segment() const { return segments ? double(divisions) / segments : 0.0; }
};

}  // namespace tbrova
