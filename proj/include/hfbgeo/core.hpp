#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hfbgeo {

using Complex = std::complex<double>;

/// Dense complex matrix in the fixed orthonormal basis.
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error types. Each maps to one named failure mode of the public operations.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HFBGEO_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                             \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

HFBGEO_DEFINE_ERROR(DimensionMismatch);
HFBGEO_DEFINE_ERROR(SingularInput);
HFBGEO_DEFINE_ERROR(LogDomain);
HFBGEO_DEFINE_ERROR(IndexOutOfRange);
HFBGEO_DEFINE_ERROR(IllConditionedIndex);
HFBGEO_DEFINE_ERROR(NotOrthogonal);
HFBGEO_DEFINE_ERROR(NumericalFailure);
HFBGEO_DEFINE_ERROR(ClusterAmbiguity);
HFBGEO_DEFINE_ERROR(BadSpec);
HFBGEO_DEFINE_ERROR(DegenerateSpectrum);
HFBGEO_DEFINE_ERROR(OutsideRadius);
HFBGEO_DEFINE_ERROR(SingularCompression);
HFBGEO_DEFINE_ERROR(RankAmbiguity);
HFBGEO_DEFINE_ERROR(InKernel);
HFBGEO_DEFINE_ERROR(NotInComplement);
HFBGEO_DEFINE_ERROR(VacuumDegeneracy);
HFBGEO_DEFINE_ERROR(CapExceeded);
HFBGEO_DEFINE_ERROR(NoTrials);

#undef HFBGEO_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Seeded RNG. Gaussian variates go through an explicit Box-Muller so that
// streams do not depend on the standard library's distribution internals;
// identical seeds give identical output across toolchains.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64 step
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Complex standard normal (independent N(0, 1/2) parts).
  Complex cgaussian() {
    return Complex(gaussian(), gaussian()) * 0.7071067811865475244;
  }

  CMat cgaussian_matrix(int rows, int cols) {
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  /// Deterministic per-trial sub-seed.
  std::uint64_t split(std::uint64_t index) const {
    Rng r(state_ ^ (0xd1342543de82ef95ULL * (index + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

/// Default tolerances used across the library.
struct Tol {
  static constexpr double factor = 1e-10;   ///< relative factorization tolerance
  static constexpr double cluster = 1e-8;   ///< eigenvalue clustering gap
  static constexpr double section = 1e-9;   ///< cross-section residual budget
};

}  // namespace hfbgeo
