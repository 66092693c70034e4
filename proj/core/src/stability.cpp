#include "tdrk/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "svg.hpp"
#include "tdrk/errors.hpp"

namespace tdrk {

namespace {

using cplx = std::complex<double>;

// Binary64 copy of a tableau for repeated evaluation.
struct FloatTableau {
  std::size_t s = 0;
  std::vector<double> a, adot, b, bdot;  // a and adot row-major s x s

  explicit FloatTableau(const TdrkTableau& t) : s(t.stages()) {
    a.resize(s * s);
    adot.resize(s * s);
    b.resize(s);
    bdot.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
      b[i] = to_double(t.b()[i]);
      bdot[i] = to_double(t.bdot()[i]);
      for (std::size_t j = 0; j < s; ++j) {
        a[i * s + j] = to_double(t.a()[i][j]);
        adot[i * s + j] = to_double(t.adot()[i][j]);
      }
    }
  }

  // deltas has size 1 (shared) or s (per stage column).
  cplx eval(cplx z, std::span<const double> deltas, std::vector<cplx>& y) const {
    const cplx z2 = z * z;
    auto dz2 = [&](std::size_t j) {
      return z2 * (1.0 + (deltas.size() == 1 ? deltas[0] : deltas[j]));
    };
    y.assign(s, cplx(0.0));
    for (std::size_t i = 0; i < s; ++i) {
      cplx acc(1.0, 0.0);
      for (std::size_t j = 0; j < i; ++j) {
        const double aij = a[i * s + j];
        const double adij = adot[i * s + j];
        if (aij == 0.0 && adij == 0.0) continue;
        acc += (z * aij + dz2(j) * adij) * y[j];
      }
      y[i] = acc;
    }
    cplx r(1.0, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
      if (b[j] == 0.0 && bdot[j] == 0.0) continue;
      r += (z * b[j] + dz2(j) * bdot[j]) * y[j];
    }
    return r;
  }
};

double centre(double lo, double hi, int k, int n) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  return mid + half * (static_cast<double>(2 * k + 1 - n) / static_cast<double>(n));
}

}  // namespace

double ComplexGrid::re(int i) const { return centre(re_min, re_max, i, n_re); }
double ComplexGrid::im(int k) const { return centre(im_min, im_max, k, n_im); }

void ComplexGrid::validate() const {
  if (n_re < 1 || n_im < 1) throw ConfigError("stability grid needs positive resolution");
  if (!(re_max > re_min) || !(im_max > im_min)) {
    throw ConfigError("stability grid window is empty or inverted");
  }
  if (!std::isfinite(re_min) || !std::isfinite(re_max) || !std::isfinite(im_min) ||
      !std::isfinite(im_max)) {
    throw ConfigError("stability grid window must be finite");
  }
}

std::size_t StabilityScan::stable_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::complex<double> eval_R(const TdrkTableau& t, std::complex<double> z, double delta) {
  const FloatTableau ft(t);
  std::vector<cplx> work;
  const double d[1] = {delta};
  return ft.eval(z, d, work);
}

std::complex<double> eval_R(const TdrkTableau& t, std::complex<double> z,
                            std::span<const double> deltas) {
  if (deltas.size() != t.stages()) throw ConfigError("eval_R: one delta per stage required");
  const FloatTableau ft(t);
  std::vector<cplx> work;
  return ft.eval(z, deltas, work);
}

std::vector<std::vector<double>> perturbation_samples(double epsilon, int n_samples,
                                                      std::uint64_t seed, std::size_t stages,
                                                      PerturbationMode mode) {
  const std::size_t width = mode == PerturbationMode::Shared ? 1 : stages;
  std::vector<std::vector<double>> samples;
  samples.emplace_back(width, 0.0);
  if (epsilon == 0.0) return samples;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_samples; ++k) {
    std::vector<double> d(width);
    for (auto& v : d) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = epsilon * u;
    }
    samples.push_back(std::move(d));
  }
  return samples;
}

StabilityScan scan_region(const TdrkTableau& t, const ComplexGrid& grid, double epsilon,
                          int n_samples, std::uint64_t seed, PerturbationMode mode,
                          unsigned threads) {
  grid.validate();
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("perturbation magnitude must be finite and non-negative");
  }
  if (epsilon > 0.0 && n_samples < 1) {
    throw ConfigError("a perturbed scan needs at least one sample");
  }
  StabilityScan scan;
  scan.grid = grid;
  scan.epsilon = epsilon;
  scan.n_samples = epsilon > 0.0 ? n_samples : 0;
  scan.seed = seed;
  scan.mode = mode;
  scan.mask.assign(static_cast<std::size_t>(grid.n_re) * grid.n_im, 0);

  const FloatTableau ft(t);
  const auto samples = perturbation_samples(epsilon, n_samples, seed, t.stages(), mode);

  auto scan_rows = [&](int row_begin, int row_end) {
    std::vector<cplx> work;
    for (int k = row_begin; k < row_end; ++k) {
      const double im = grid.im(k);
      for (int i = 0; i < grid.n_re; ++i) {
        const cplx z(grid.re(i), im);
        bool ok = true;
        for (const auto& d : samples) {
          if (!(std::abs(ft.eval(z, d, work)) <= 1.0)) {
            ok = false;
            break;
          }
        }
        scan.mask[static_cast<std::size_t>(k) * grid.n_re + i] = ok ? 1 : 0;
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.n_im));
  if (workers <= 1) {
    scan_rows(0, grid.n_im);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (grid.n_im + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(grid.n_im, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(scan_rows, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return scan;
}

std::vector<BoundaryCell> boundary_cells(const StabilityScan& scan) {
  std::vector<BoundaryCell> cells;
  const auto& g = scan.grid;
  for (int k = 0; k < g.n_im; ++k) {
    for (int i = 0; i < g.n_re; ++i) {
      const bool s = scan.stable(i, k);
      const bool differs = (i > 0 && scan.stable(i - 1, k) != s) ||
                           (i + 1 < g.n_re && scan.stable(i + 1, k) != s) ||
                           (k > 0 && scan.stable(i, k - 1) != s) ||
                           (k + 1 < g.n_im && scan.stable(i, k + 1) != s);
      if (differs) cells.push_back({g.re(i), g.im(k), s});
    }
  }
  return cells;
}

void emit_region_svg(const StabilityScan& scan, const std::filesystem::path& svg_path,
                     const std::filesystem::path& csv_path, const std::string& title) {
  const auto& g = scan.grid;
  const double plot_w = 560.0;
  const double plot_h = plot_w * (g.im_max - g.im_min) / (g.re_max - g.re_min);
  const double left = 60.0, top = 40.0, right = 20.0, bottom = 50.0;
  svg::Canvas canvas(left + plot_w + right, top + plot_h + bottom);

  const double cw = plot_w / g.n_re;
  const double ch = plot_h / g.n_im;
  auto px = [&](double re) { return left + (re - g.re_min) / (g.re_max - g.re_min) * plot_w; };
  auto py = [&](double im) { return top + (g.im_max - im) / (g.im_max - g.im_min) * plot_h; };

  // Stable cells, merged into horizontal runs. Row k = n_im - 1 is the top.
  for (int k = 0; k < g.n_im; ++k) {
    const double y = top + (g.n_im - 1 - k) * ch;
    int i = 0;
    while (i < g.n_re) {
      if (!scan.stable(i, k)) {
        ++i;
        continue;
      }
      int j = i;
      while (j < g.n_re && scan.stable(j, k)) ++j;
      canvas.rect(left + i * cw, y, (j - i) * cw, ch, "#9ecae1");
      i = j;
    }
  }

  canvas.rect(left, top, plot_w, plot_h, "none", "black", 1.0);
  if (g.re_min < 0.0 && g.re_max > 0.0) canvas.line(px(0.0), top, px(0.0), top + plot_h, "black", 0.8);
  if (g.im_min < 0.0 && g.im_max > 0.0) canvas.line(left, py(0.0), left + plot_w, py(0.0), "black", 0.8);

  for (double t = std::ceil(g.re_min); t <= g.re_max + 1e-12; t += 1.0) {
    canvas.line(px(t), top + plot_h, px(t), top + plot_h + 5, "black");
    std::ostringstream label;
    label << t;
    canvas.text(px(t), top + plot_h + 18, label.str(), 11);
  }
  for (double t = std::ceil(g.im_min); t <= g.im_max + 1e-12; t += 1.0) {
    canvas.line(left - 5, py(t), left, py(t), "black");
    std::ostringstream label;
    label << t;
    canvas.text(left - 8, py(t) + 4, label.str(), 11, "end");
  }
  canvas.text(left + plot_w / 2, top + plot_h + 40, "Re(z)", 13);
  canvas.text(18, top + plot_h / 2, "Im(z)", 13, "middle", -90);
  std::ostringstream heading;
  heading << (title.empty() ? std::string("stability region") : title) << "  eps=" << scan.epsilon;
  canvas.text(left + plot_w / 2, 24, heading.str(), 14);
  canvas.save(svg_path);

  std::ostringstream csv;
  csv << std::setprecision(17) << "re,im,stable\n";
  for (const auto& c : boundary_cells(scan)) csv << c.re << ',' << c.im << ',' << (c.stable ? 1 : 0) << '\n';
  svg::write_file(csv_path, csv.str());
}

}  // namespace tdrk
