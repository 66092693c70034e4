#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "tdrk/precision.hpp"

namespace tdrk {

/// How a low-precision second-derivative operator is built.
enum class Implementation : std::uint8_t {
  /// D2 = D1 * D1 with every multiply-add rounded in the target format.
  Impl1,
  /// D2 = D1 * D1 in EXT, each entry rounded once to the target format.
  Impl2,
};

/// Parses "1" / "2" (also "impl1" / "impl2"); throws ConfigError otherwise.
Implementation parse_implementation(std::string_view text);
int implementation_number(Implementation impl);

enum class OperatorKind : std::uint8_t { D1, D2 };

/// Dense Fourier differentiation operator on the periodic grid
/// x_j = -1 + 2j/n, j = 0..n-1.
class SpectralOperator {
 public:
  SpectralOperator(std::size_t n, Format format, OperatorKind kind, Implementation impl,
                   std::vector<Real> entries);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] Format format() const { return format_; }
  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] Implementation implementation() const { return impl_; }
  [[nodiscard]] const Real& at(std::size_t j, std::size_t k) const { return entries_[j * n_ + k]; }
  [[nodiscard]] const std::vector<Real>& entries() const { return entries_; }

  /// Matrix-vector product accumulated left to right over k, with every
  /// multiply and every add rounded in format(). v is first cast to
  /// format(). Throws ConfigError on a length mismatch.
  [[nodiscard]] SimVector apply(const SimVector& v) const;

 private:
  std::size_t n_;
  Format format_;
  OperatorKind kind_;
  Implementation impl_;
  std::vector<Real> entries_;
};

/// Grid points x_j = -1 + 2j/n in EXT.
std::vector<Real> grid_points(std::size_t n);

/// First-derivative matrix. Even n: D_jk = (pi/2)(-1)^(j-k) cot(pi(j-k)/n);
/// odd n: D_jk = (pi/2)(-1)^(j-k) / sin(pi(j-k)/n); D_jj = 0. Entries are
/// computed in EXT and rounded once, for either implementation. Cached.
/// Throws ConfigError for n < 4.
std::shared_ptr<const SpectralOperator> fourier_d1(std::size_t n, Format f,
                                                   Implementation impl = Implementation::Impl2);

/// Second-derivative matrix D1 * D1 built according to `impl`. Cached.
std::shared_ptr<const SpectralOperator> fourier_d2(std::size_t n, Format f, Implementation impl);

/// Shorthand for op.apply(v).
inline SimVector apply(const SpectralOperator& op, const SimVector& v) { return op.apply(v); }

/// Drops all cached operators (mainly for tests and benchmarks).
void clear_operator_cache();

}  // namespace tdrk
