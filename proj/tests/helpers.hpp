#pragma once

#include "hfbgeo/sympkahler.hpp"

#include <catch2/catch_amalgamated.hpp>

namespace hfbgeo::testing {

inline CMat random_cmat(std::uint64_t seed, int n) {
  Rng rng(seed);
  return rng.cgaussian_matrix(n, n);
}

inline CMat random_antisym(std::uint64_t seed, int n) {
  const CMat a = random_cmat(seed, n);
  return 0.5 * (a - a.transpose());
}

inline BlockOp random_blockop(std::uint64_t seed, int n) {
  Rng rng(seed);
  return BlockOp(rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n),
                 rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n));
}

/// Element of the isotropy group at a diagonal base point.
inline BogUnitary random_isotropy_element(const BasePoint& bp, std::uint64_t seed,
                                          double scale = 0.5) {
  const std::vector<BogAlgebra> iso = isotropy_basis(bp);
  Rng rng(seed);
  BogAlgebra x = BogAlgebra::zero(bp.n());
  for (const auto& b : iso) x = x + (scale * rng.gaussian()) * b;
  return exp_alg(x);
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace hfbgeo::testing
