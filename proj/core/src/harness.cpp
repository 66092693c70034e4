#include "tdrk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "svg.hpp"
#include "tdrk/catalog.hpp"
#include "tdrk/errors.hpp"
#include "tdrk/integrator.hpp"
#include "tdrk/problems.hpp"

namespace tdrk {

namespace {

std::string format_sci(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::string format_general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Reference final states per nx.
std::vector<SimVector> compute_references(const ExperimentConfig& cfg) {
  std::vector<SimVector> refs(cfg.nx_list.size());
  parallel_for(cfg.nx_list.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t nx = cfg.nx_list[i];
    if (cfg.reference.kind == ReferenceKind::Exact) {
      const auto problem = make_problem({cfg.problem, nx, Format::B64, Format::B64, cfg.implementation, cfg.speed});
      auto exact = problem->exact_solution(cfg.t_final);
      if (!exact) {
        throw ConfigError("problem '" + cfg.problem + "' has no exact solution; use an ssp33 reference");
      }
      refs[i] = std::move(*exact);
      return;
    }
    const Format p = cfg.reference.policy;
    const auto problem = make_problem({cfg.problem, nx, p, p, Implementation::Impl2, cfg.speed});
    const Trajectory t = ssp33_integrate(*problem, cfg.reference.dt, cfg.t_final, p);
    if (t.diverged) throw ConfigError("reference solve diverged for nx = " + std::to_string(nx));
    refs[i] = t.final_state;
  });
  return refs;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string PrecisionPair::label() const {
  return std::string(format_label(high)) + "/" + std::string(format_label(low));
}

PrecisionPair PrecisionPair::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ConfigError("precision pair '" + std::string(text) + "' must look like 64/16");
  }
  PrecisionPair p{parse_format(text.substr(0, slash)), parse_format(text.substr(slash + 1))};
  if (!contains(p.high, p.low)) {
    throw ConfigError("precision pair '" + std::string(text) + "': low is wider than high");
  }
  return p;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("no methods configured");
  for (const auto& m : methods) (void)get_method(m);
  if (problem != "advection" && problem != "burgers") {
    throw LookupError("unknown problem '" + problem + "' (expected advection or burgers)");
  }
  if (nx_list.empty()) throw ConfigError("no grid sizes configured");
  for (auto n : nx_list) {
    if (n < 4) throw ConfigError("grid size must be at least 4");
  }
  if (dt_list.empty()) throw ConfigError("no time steps configured");
  for (double dt : dt_list) (void)step_count(dt, t_final);
  if (precision_pairs.empty()) throw ConfigError("no precision pairs configured");
  for (const auto& p : precision_pairs) {
    if (!contains(p.high, p.low)) throw ConfigError("precision pair " + p.label() + " has low wider than high");
  }
  if (reference.kind == ReferenceKind::Exact && problem == "burgers") {
    throw ConfigError("burgers has no exact solution; use an ssp33 reference");
  }
  if (reference.kind == ReferenceKind::Ssp33) (void)step_count(reference.dt, t_final);
}

ReferenceConfig default_reference(const std::string& problem) {
  if (problem == "burgers") return {ReferenceKind::Ssp33, Format::EXT, 1e-5};
  return {ReferenceKind::Exact, Format::EXT, 1e-5};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  try {
    if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
    if (doc.contains("problem")) cfg.problem = doc.at("problem").get<std::string>();
    cfg.reference = default_reference(cfg.problem);
    if (doc.contains("methods")) {
      const auto& m = doc.at("methods");
      if (m.is_string() && m.get<std::string>() == "all") {
        cfg.methods = method_names();
      } else {
        cfg.methods = m.get<std::vector<std::string>>();
      }
    }
    if (doc.contains("nx")) cfg.nx_list = doc.at("nx").get<std::vector<std::size_t>>();
    if (doc.contains("dt")) cfg.dt_list = doc.at("dt").get<std::vector<double>>();
    if (doc.contains("pairs")) {
      for (const auto& p : doc.at("pairs")) cfg.precision_pairs.push_back(PrecisionPair::parse(p.get<std::string>()));
    }
    if (doc.contains("impl")) {
      const auto& v = doc.at("impl");
      cfg.implementation = parse_implementation(v.is_number() ? std::to_string(v.get<int>()) : v.get<std::string>());
    }
    if (doc.contains("t_final")) cfg.t_final = doc.at("t_final").get<double>();
    if (doc.contains("speed")) cfg.speed = doc.at("speed").get<double>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<unsigned>();
    if (doc.contains("reference")) {
      const auto& r = doc.at("reference");
      const std::string kind = r.value("kind", std::string("exact"));
      if (kind == "exact") {
        cfg.reference.kind = ReferenceKind::Exact;
      } else if (kind == "ssp33") {
        cfg.reference.kind = ReferenceKind::Ssp33;
      } else {
        throw ConfigError("reference kind must be 'exact' or 'ssp33'");
      }
      if (r.contains("policy")) cfg.reference.policy = parse_format(r.at("policy").get<std::string>());
      if (r.contains("dt")) cfg.reference.dt = r.at("dt").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return experiment_config_from_json(doc);
}

// ---------------------------------------------------------------------------

std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto refs = compute_references(cfg);

  struct Cell {
    std::size_t method, nx, dt, pair;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t n = 0; n < cfg.nx_list.size(); ++n) {
      for (std::size_t d = 0; d < cfg.dt_list.size(); ++d) {
        for (std::size_t p = 0; p < cfg.precision_pairs.size(); ++p) cells.push_back({m, n, d, p});
      }
    }
  }

  std::vector<ConvergenceRecord> records(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    const Cell& c = cells[idx];
    const MethodCard& method = get_method(cfg.methods[c.method]);
    const PrecisionPair pair = cfg.precision_pairs[c.pair];
    const std::size_t nx = cfg.nx_list[c.nx];
    const double dt = cfg.dt_list[c.dt];
    const auto problem = make_problem({cfg.problem, nx, pair.high, pair.low, cfg.implementation, cfg.speed});

    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = integrate({dt, cfg.t_final, &method, problem.get()});
    const auto stop = std::chrono::steady_clock::now();

    ConvergenceRecord& r = records[idx];
    r.method = method.name;
    r.problem = cfg.problem;
    r.nx = nx;
    r.dt = dt;
    r.high = pair.high;
    r.low = pair.low;
    r.implementation = cfg.implementation;
    r.diverged = traj.diverged;
    r.steps = traj.steps_taken;
    r.error_max = traj.diverged ? std::numeric_limits<double>::infinity()
                                : max_abs_diff(traj.final_state, refs[c.nx]);
    r.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  });
  return records;
}

// ---------------------------------------------------------------------------

std::optional<double> estimate_order(std::span<const OrderPoint> points) {
  std::vector<OrderPoint> usable;
  std::set<double> seen;
  for (const auto& p : points) {
    if (!(p.dt > 0.0) || !std::isfinite(p.error) || !(p.error > 0.0)) continue;
    if (!seen.insert(p.dt).second) continue;
    usable.push_back(p);
  }
  if (usable.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (const auto& p : usable) {
    mx += std::log(p.dt);
    my += std::log(p.error);
  }
  mx /= static_cast<double>(usable.size());
  my /= static_cast<double>(usable.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : usable) {
    const double dx = std::log(p.dt) - mx;
    sxy += dx * (std::log(p.error) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::optional<double> estimate_order(std::span<const ConvergenceRecord> records, double dt_min,
                                     double dt_max) {
  std::vector<OrderPoint> pts;
  for (const auto& r : records) {
    if (r.diverged || r.dt < dt_min || r.dt > dt_max) continue;
    pts.push_back({r.dt, r.error_max});
  }
  return estimate_order(pts);
}

std::vector<double> local_slopes(std::span<const OrderPoint> points) {
  std::vector<OrderPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.dt > b.dt; });
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    slopes.push_back(std::log(sorted[i].error / sorted[i + 1].error) /
                     std::log(sorted[i].dt / sorted[i + 1].dt));
  }
  return slopes;
}

std::vector<ConvergenceRecord> select_line(std::span<const ConvergenceRecord> records,
                                           const std::string& method, std::size_t nx,
                                           const PrecisionPair& pair) {
  std::vector<ConvergenceRecord> out;
  for (const auto& r : records) {
    if (r.method == method && r.nx == nx && r.pair() == pair) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.dt > b.dt; });
  return out;
}

// ---------------------------------------------------------------------------

std::string records_to_csv(std::span<const ConvergenceRecord> records, bool include_wall_time) {
  std::ostringstream out;
  out << "method,problem,nx,dt,high,low,impl,error_max,diverged,steps,wall_time_ms\n";
  for (const auto& r : records) {
    out << r.method << ',' << r.problem << ',' << r.nx << ',' << format_general(r.dt) << ','
        << format_name(r.high) << ',' << format_name(r.low) << ','
        << implementation_number(r.implementation) << ','
        << (r.diverged ? std::string("NA") : format_sci(r.error_max, 10)) << ','
        << (r.diverged ? 1 : 0) << ',' << r.steps << ',';
    if (include_wall_time) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_ms);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string method_table_markdown(std::span<const ConvergenceRecord> records, const std::string& method) {
  std::vector<PrecisionPair> pairs;
  std::vector<std::size_t> nxs;
  for (const auto& r : records) {
    if (r.method != method) continue;
    if (std::find(pairs.begin(), pairs.end(), r.pair()) == pairs.end()) pairs.push_back(r.pair());
    if (std::find(nxs.begin(), nxs.end(), r.nx) == nxs.end()) nxs.push_back(r.nx);
  }
  std::ostringstream out;
  out << "Errors for mixed precision " << method << "\n\n| N_x | dt |";
  for (const auto& p : pairs) out << ' ' << p.label() << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < pairs.size(); ++i) out << "---|";
  out << '\n';
  for (auto nx : nxs) {
    std::vector<double> dts;
    for (const auto& r : records) {
      if (r.method == method && r.nx == nx && std::find(dts.begin(), dts.end(), r.dt) == dts.end()) {
        dts.push_back(r.dt);
      }
    }
    bool first = true;
    for (double dt : dts) {
      out << "| " << (first ? std::to_string(nx) : std::string()) << " | " << format_general(dt) << " |";
      first = false;
      for (const auto& p : pairs) {
        std::string cell = "";
        for (const auto& r : records) {
          if (r.method == method && r.nx == nx && r.dt == dt && r.pair() == p) {
            cell = r.diverged ? "N/A" : format_sci(r.error_max, 2);
          }
        }
        out << ' ' << cell << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string convergence_svg(std::span<const ConvergenceRecord> records, const std::string& method,
                            std::size_t nx) {
  static constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::vector<PrecisionPair> pairs;
  double x_lo = 1e300, x_hi = 0.0, y_lo = 1e300, y_hi = 0.0;
  for (const auto& r : records) {
    if (r.method != method || r.nx != nx) continue;
    if (std::find(pairs.begin(), pairs.end(), r.pair()) == pairs.end()) pairs.push_back(r.pair());
    x_lo = std::min(x_lo, r.dt);
    x_hi = std::max(x_hi, r.dt);
    if (!r.diverged && std::isfinite(r.error_max) && r.error_max > 0.0) {
      y_lo = std::min(y_lo, r.error_max);
      y_hi = std::max(y_hi, r.error_max);
    }
  }
  if (x_hi <= 0.0) {
    x_lo = 1e-3;
    x_hi = 1e-1;
  }
  if (y_hi <= 0.0) {
    y_lo = 1e-12;
    y_hi = 1.0;
  }
  const int dx0 = static_cast<int>(std::floor(std::log10(x_lo)));
  int dx1 = static_cast<int>(std::ceil(std::log10(x_hi)));
  const int dy0 = static_cast<int>(std::floor(std::log10(y_lo)));
  int dy1 = static_cast<int>(std::ceil(std::log10(y_hi)));
  if (dx1 == dx0) ++dx1;
  if (dy1 == dy0) ++dy1;

  const double left = 80, top = 40, w = 520, h = 400, right = 140, bottom = 60;
  svg::Canvas canvas(left + w + right, top + h + bottom);
  auto px = [&](double dt) { return left + (std::log10(dt) - dx0) / (dx1 - dx0) * w; };
  auto py = [&](double e) { return top + (dy1 - std::log10(e)) / (dy1 - dy0) * h; };

  canvas.rect(left, top, w, h, "none", "black", 1.0);
  for (int d = dx0; d <= dx1; ++d) {
    const double x = px(std::pow(10.0, d));
    canvas.line(x, top, x, top + h, "#dddddd", 0.5);
    canvas.text(x, top + h + 18, "1e" + std::to_string(d), 11);
  }
  const int ystep = std::max(1, (dy1 - dy0) / 12);
  for (int d = dy0; d <= dy1; d += ystep) {
    const double y = py(std::pow(10.0, d));
    canvas.line(left, y, left + w, y, "#dddddd", 0.5);
    canvas.text(left - 6, y + 4, "1e" + std::to_string(d), 11, "end");
  }
  canvas.text(left + w / 2, top + h + 45, "dt", 13);
  canvas.text(22, top + h / 2, "max-norm error", 13, "middle", -90);
  canvas.text(left + w / 2, 24, method + ", N_x = " + std::to_string(nx), 14);

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto line = select_line(records, method, nx, pairs[p]);
    std::ostringstream pts;
    const char* colour = kColours[p % std::size(kColours)];
    for (const auto& r : line) {
      if (r.diverged || !(r.error_max > 0.0) || !std::isfinite(r.error_max)) continue;
      pts << px(r.dt) << ',' << py(r.error_max) << ' ';
      canvas.circle(px(r.dt), py(r.error_max), 3, colour);
    }
    if (!pts.str().empty()) canvas.polyline(pts.str(), colour, 1.5);
    const double ly = top + 20 + 18.0 * static_cast<double>(p);
    canvas.line(left + w + 10, ly, left + w + 35, ly, colour, 2);
    canvas.text(left + w + 40, ly + 4, pairs[p].label(), 11, "start");
  }

  // Slope guides through the upper-right corner of the data window.
  const auto& card = get_method(method);
  const double guides[2] = {static_cast<double>(card.claimed_p), static_cast<double>(card.claimed_m)};
  for (int g = 0; g < 2; ++g) {
    const double slope = guides[g];
    const double x1 = x_hi, y1 = y_hi;
    const double x0 = x_lo;
    const double y0 = y1 * std::pow(x0 / x1, slope);
    if (!(y0 > 0.0)) continue;
    std::ostringstream pts;
    pts << px(x1) << ',' << py(y1) << ' ' << px(x0) << ',' << py(std::max(y0, std::pow(10.0, dy0)));
    canvas.polyline(pts.str(), "#555555", 1.0, g == 0 ? "6,4" : "2,3");
    const double ly = top + 20 + 18.0 * static_cast<double>(pairs.size() + g);
    canvas.line(left + w + 10, ly, left + w + 35, ly, "#555555", 1.0, g == 0 ? "6,4" : "2,3");
    canvas.text(left + w + 40, ly + 4, "slope " + std::to_string(static_cast<int>(slope)), 11, "start");
  }
  return canvas.str();
}

void emit_outputs(std::span<const ConvergenceRecord> records, const ExperimentConfig& cfg) {
  svg::write_file(cfg.out_dir / "results.csv", records_to_csv(records));
  std::vector<std::string> methods;
  for (const auto& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  for (const auto& m : methods) {
    svg::write_file(cfg.out_dir / ("table_" + m + ".md"), method_table_markdown(records, m));
    std::vector<std::size_t> nxs;
    for (const auto& r : records) {
      if (r.method == m && std::find(nxs.begin(), nxs.end(), r.nx) == nxs.end()) nxs.push_back(r.nx);
    }
    for (auto nx : nxs) {
      svg::write_file(cfg.out_dir / ("convergence_" + m + "_" + std::to_string(nx) + ".svg"),
                      convergence_svg(records, m, nx));
    }
  }
}

// ---------------------------------------------------------------------------

double characterize_epsilon(const std::string& problem, std::size_t nx, Format low, Implementation impl) {
  const auto reference = make_problem({problem, nx, Format::EXT, Format::EXT, Implementation::Impl2, 1.0});
  const auto perturbed = make_problem({problem, nx, Format::EXT, low, impl, 1.0});
  const SimVector u0 = reference->initial_condition();
  const SimVector exact = reference->rhs_dot(u0);
  const SimVector approx = perturbed->rhs_dot(u0);
  return max_abs_diff(approx, exact) / std::max(1.0, max_abs(exact));
}

}  // namespace tdrk
