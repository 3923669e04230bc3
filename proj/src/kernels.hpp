#pragma once

#include <vector>

#include "toelanczos/tensor.hpp"

namespace toel::detail {

inline SliceKind product_kind(SliceKind a, SliceKind b) {
  if (a == SliceKind::zero || b == SliceKind::zero) return SliceKind::zero;
  if (a == SliceKind::lower && b == SliceKind::lower) return SliceKind::lower;
  return SliceKind::dense;
}

inline SliceKind sum_kind(SliceKind a, SliceKind b) { return a > b ? a : b; }

/// c[0..m) += (row i of a) * b. Lower operands shorten the loops; the skipped terms are exact zeros.
inline void row_acc(cd* c, const cd* a_row, SliceKind ka, const cd* b, SliceKind kb, std::size_t m, std::size_t i) {
  double* cr = reinterpret_cast<double*>(c);
  const std::size_t lend = ka == SliceKind::lower ? i + 1 : m;
  for (std::size_t l = 0; l < lend; ++l) {
    const double ar = a_row[l].real();
    const double ai = a_row[l].imag();
    const double* br = reinterpret_cast<const double*>(b + l * m);
    const std::size_t jend = kb == SliceKind::lower ? l + 1 : m;
    for (std::size_t j = 0; j < jend; ++j) {
      const double xr = br[2 * j];
      const double xi = br[2 * j + 1];
      cr[2 * j] += ar * xr - ai * xi;
      cr[2 * j + 1] += ar * xi + ai * xr;
    }
  }
}

struct Term {
  const cd* a;
  SliceKind ka;
  const cd* b;
  SliceKind kb;
};

/// One output slice: c = sum of terms (a*b) in list order. c must start zeroed.
struct SliceJob {
  cd* c;
  std::vector<Term> terms;
};

void run_jobs(const std::vector<SliceJob>& jobs, std::size_t m);

/// Row-major copy of a column-major matrix.
std::vector<cd> row_major(const MatM& x);

}  // namespace toel::detail
