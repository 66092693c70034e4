#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tdrk/tableau.hpp"

namespace tdrk {

/// Rectangle in the complex plane sampled at cell centres.
struct ComplexGrid {
  double re_min = -6.0;
  double re_max = 1.0;
  double im_min = -4.0;
  double im_max = 4.0;
  int n_re = 600;
  int n_im = 600;

  /// Cell-centre coordinates. Computed as mid + half_width * (2k + 1 - n) / n
  /// so a window symmetric about zero gives exactly mirrored coordinates.
  [[nodiscard]] double re(int i) const;
  [[nodiscard]] double im(int k) const;
  /// Throws ConfigError for empty or inverted windows.
  void validate() const;
};

/// How random second-derivative perturbations are applied.
enum class PerturbationMode : std::uint8_t {
  /// One delta per sample scales every z^2 term.
  Shared,
  /// Independent delta per stage column j (adot_ij and bdot_j).
  PerStage,
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct StabilityScan {
  ComplexGrid grid;
  double epsilon = 0.0;
  int n_samples = 0;
  std::uint64_t seed = kDefaultSeed;
  PerturbationMode mode = PerturbationMode::Shared;
  /// Row-major over (im, re): mask[k * n_re + i] is the cell (re(i), im(k)).
  std::vector<std::uint8_t> mask;

  [[nodiscard]] bool stable(int i_re, int k_im) const {
    return mask[static_cast<std::size_t>(k_im) * grid.n_re + i_re] != 0;
  }
  [[nodiscard]] std::size_t stable_count() const;
};

/// R_delta(z) = 1 + (z b + z^2 (1+delta) bdot)(I - z A - z^2 (1+delta) Adot)^-1 e,
/// by forward substitution in binary64 complex arithmetic.
std::complex<double> eval_R(const TdrkTableau& t, std::complex<double> z, double delta);

/// Per-stage variant: deltas[j] scales the second-derivative terms that
/// multiply stage j. deltas.size() must equal t.stages().
std::complex<double> eval_R(const TdrkTableau& t, std::complex<double> z,
                            std::span<const double> deltas);

/// Perturbation magnitudes delta = epsilon * u_k, u_k uniform on [0, 1)
/// from mt19937_64(seed) using the top 53 bits of each draw. The list
/// always starts with 0. Per-stage mode draws `stages` values per sample.
std::vector<std::vector<double>> perturbation_samples(double epsilon, int n_samples,
                                                      std::uint64_t seed, std::size_t stages,
                                                      PerturbationMode mode);

/// A cell is stable iff |R_delta(z)| <= 1 for every sampled delta. The
/// sample set is shared across the grid, so the result is deterministic
/// for a given seed. Throws ConfigError on a degenerate grid or when
/// epsilon > 0 with n_samples < 1.
StabilityScan scan_region(const TdrkTableau& t, const ComplexGrid& grid, double epsilon,
                          int n_samples, std::uint64_t seed = kDefaultSeed,
                          PerturbationMode mode = PerturbationMode::Shared, unsigned threads = 0);

/// Cells whose stable flag differs from at least one 4-neighbour.
struct BoundaryCell {
  double re;
  double im;
  bool stable;
};
std::vector<BoundaryCell> boundary_cells(const StabilityScan& scan);

/// Writes an SVG of the stable region with axes, and a CSV (re,im,stable)
/// of the boundary cells next to it. Throws IoError on failure.
void emit_region_svg(const StabilityScan& scan, const std::filesystem::path& svg_path,
                     const std::filesystem::path& csv_path, const std::string& title = {});

}  // namespace tdrk
