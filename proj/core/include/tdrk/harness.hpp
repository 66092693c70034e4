#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tdrk/precision.hpp"
#include "tdrk/spectral.hpp"

namespace tdrk {

/// (high, low) precision pair; F runs in high, Fdot in low.
struct PrecisionPair {
  Format high = Format::B64;
  Format low = Format::B64;

  /// "64/16" style label.
  [[nodiscard]] std::string label() const;
  /// Parses "64/16", "b64/b16" or "ext/b32". Throws ConfigError.
  static PrecisionPair parse(std::string_view text);
  friend bool operator==(const PrecisionPair&, const PrecisionPair&) = default;
};

enum class ReferenceKind { Exact, Ssp33 };

struct ReferenceConfig {
  ReferenceKind kind = ReferenceKind::Exact;
  Format policy = Format::EXT;
  double dt = 1e-5;
};

struct ExperimentConfig {
  std::vector<std::string> methods;
  std::string problem = "advection";
  std::vector<std::size_t> nx_list;
  std::vector<double> dt_list;
  std::vector<PrecisionPair> precision_pairs;
  Implementation implementation = Implementation::Impl1;
  double t_final = 0.5;
  double speed = 1.0;
  ReferenceConfig reference;
  std::uint64_t seed = 0x5EED;
  std::filesystem::path out_dir = "results";
  /// Worker threads for the experiment matrix; 0 means hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError/LookupError describing the first problem found.
  void validate() const;
};

/// Reads the JSON document at `path`. Throws IoError when unreadable and
/// ConfigError on schema errors.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
/// Default reference for a problem: exact for advection, SSP33 in EXT for
/// Burgers.
ReferenceConfig default_reference(const std::string& problem);

struct ConvergenceRecord {
  std::string method;
  std::string problem;
  std::size_t nx = 0;
  double dt = 0.0;
  Format high = Format::B64;
  Format low = Format::B64;
  Implementation implementation = Implementation::Impl1;
  /// Max-norm error at t_final; +inf when diverged.
  double error_max = 0.0;
  bool diverged = false;
  int steps = 0;
  double wall_time_ms = 0.0;

  [[nodiscard]] PrecisionPair pair() const { return {high, low}; }
};

/// Runs every (method, nx, dt, pair) cell. Records come back ordered by
/// method, nx, dt, then pair, in config order, independent of scheduling.
/// Divergence is recorded, not thrown.
std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg);

/// Least-squares slope of log(error) against log(dt).
struct OrderPoint {
  double dt;
  double error;
};
/// nullopt when fewer than two usable points (finite, positive error,
/// distinct dt) remain.
std::optional<double> estimate_order(std::span<const OrderPoint> points);
/// Uses the non-diverged records with dt in [dt_min, dt_max].
std::optional<double> estimate_order(std::span<const ConvergenceRecord> records,
                                     double dt_min = 0.0, double dt_max = 1e300);

/// Slopes between neighbouring points sorted by decreasing dt.
std::vector<double> local_slopes(std::span<const OrderPoint> points);

/// Records for one (method, nx, pair) line, sorted by decreasing dt.
std::vector<ConvergenceRecord> select_line(std::span<const ConvergenceRecord> records,
                                           const std::string& method, std::size_t nx,
                                           const PrecisionPair& pair);

/// CSV with header
/// method,problem,nx,dt,high,low,impl,error_max,diverged,steps,wall_time_ms.
/// Diverged errors are written as NA.
std::string records_to_csv(std::span<const ConvergenceRecord> records, bool include_wall_time = true);
/// Markdown table for one method: rows (nx, dt), one column per pair,
/// N/A for diverged cells.
std::string method_table_markdown(std::span<const ConvergenceRecord> records, const std::string& method);
/// Log-log error plot for one (method, nx) with one line per pair.
std::string convergence_svg(std::span<const ConvergenceRecord> records, const std::string& method,
                            std::size_t nx);

/// Writes results.csv, table_<method>.md and convergence_<method>_<nx>.svg
/// into cfg.out_dir. Throws IoError.
void emit_outputs(std::span<const ConvergenceRecord> records, const ExperimentConfig& cfg);

/// Effective perturbation size of the low-precision Fdot on the problem's
/// initial data:
///   max|Fdot_low(u0) - Fdot_ext(u0)| / max(1, max|Fdot_ext(u0)|).
double characterize_epsilon(const std::string& problem, std::size_t nx, Format low,
                            Implementation impl);

}  // namespace tdrk
