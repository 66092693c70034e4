// Command line front end for the tdrk library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdrk/catalog.hpp"
#include "tdrk/errors.hpp"
#include "tdrk/harness.hpp"
#include "tdrk/integrator.hpp"
#include "tdrk/problems.hpp"
#include "tdrk/stability.hpp"
#include "tdrk/tableau.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw tdrk::IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_report(const std::string& title, const tdrk::TdrkTableau& t, const tdrk::MethodCard* card) {
  std::cout << "method: " << title << "\nstages: " << t.stages() << '\n';
  if (card != nullptr) {
    std::cout << "claimed order p = " << card->claimed_p << ", perturbation order m = " << card->claimed_m
              << '\n';
    if (!card->note.empty()) std::cout << "note: " << card->note << '\n';
    if (!card->source.empty()) std::cout << "source: " << card->source << '\n';
  }
  std::cout << '\n' << t.to_text() << '\n';
  const auto report = tdrk::check_order_conditions(t);
  std::cout << "order conditions (residual = lhs - rhs):\n";
  for (const auto& r : report.order_residuals) {
    std::cout << "  [order " << r.order << "] " << r.label << " : " << tdrk::format_rational(r.residual) << '\n';
  }
  std::cout << "perturbation residuals:\n";
  for (const auto& r : report.perturbation_residuals) {
    std::cout << "  [eps dt^" << r.order << "] " << r.label << " : " << tdrk::format_rational(r.residual)
              << '\n';
  }
  std::cout << "satisfied order: " << report.satisfied_order
            << (report.higher_orders_unverified ? " (orders above 3 not checked symbolically)" : "") << '\n';
  std::cout << "perturbation order m: " << report.perturbation_order << '\n';
  std::cout << "stability polynomial R(z):";
  const auto poly = tdrk::stability_polynomial(t);
  for (std::size_t k = 0; k < poly.size(); ++k) std::cout << (k ? ", " : " ") << tdrk::format_rational(poly[k]);
  std::cout << "\n";
}

tdrk::ComplexGrid parse_grid(const std::string& text) {
  tdrk::ComplexGrid g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) throw tdrk::ConfigError("--grid expects re0,re1,im0,im1,nre,nim");
  try {
    g.re_min = std::stod(parts[0]);
    g.re_max = std::stod(parts[1]);
    g.im_min = std::stod(parts[2]);
    g.im_max = std::stod(parts[3]);
    g.n_re = std::stoi(parts[4]);
    g.n_im = std::stoi(parts[5]);
  } catch (const std::logic_error&) {
    throw tdrk::ConfigError("--grid has a non-numeric entry");
  }
  g.validate();
  return g;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-precision two-derivative Runge-Kutta laboratory"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Print a method card, condition residuals and R(z)");
  std::string check_method;
  std::string check_file;
  bool check_all = false;
  check->add_option("--method", check_method, "Catalog method name");
  check->add_option("--file", check_file, "Tableau text file");
  check->add_flag("--all", check_all, "Check every catalog method");

  // stability
  auto* stab = app.add_subcommand("stability", "Scan a (perturbed) linear stability region");
  std::string stab_method;
  double stab_eps = 0.0;
  int stab_samples = 32;
  std::uint64_t stab_seed = tdrk::kDefaultSeed;
  std::string stab_grid;
  std::string stab_out = ".";
  bool stab_per_stage = false;
  unsigned stab_threads = 0;
  stab->add_option("--method", stab_method)->required();
  stab->add_option("--eps", stab_eps, "Perturbation magnitude");
  stab->add_option("--samples", stab_samples);
  stab->add_option("--seed", stab_seed);
  stab->add_option("--grid", stab_grid, "re0,re1,im0,im1,nre,nim");
  stab->add_option("--out", stab_out, "Output directory");
  stab->add_flag("--per-stage", stab_per_stage, "Independent delta per stage");
  stab->add_option("--threads", stab_threads);

  // solve
  auto* solve = app.add_subcommand("solve", "Integrate one problem and write the final state");
  std::string solve_method, solve_problem = "advection", solve_high = "b64", solve_low = "b64";
  std::string solve_impl = "1", solve_out = "state.csv";
  std::size_t solve_nx = 25;
  double solve_dt = 0.01, solve_tf = 0.5, solve_speed = 1.0;
  solve->add_option("--method", solve_method)->required();
  solve->add_option("--problem", solve_problem);
  solve->add_option("--nx", solve_nx);
  solve->add_option("--dt", solve_dt);
  solve->add_option("--tf", solve_tf);
  solve->add_option("--high", solve_high);
  solve->add_option("--low", solve_low);
  solve->add_option("--impl", solve_impl);
  solve->add_option("--speed", solve_speed);
  solve->add_option("--out", solve_out);

  // converge
  auto* conv = app.add_subcommand("converge", "Run a convergence study from a JSON config");
  std::string conv_config, conv_methods, conv_problem, conv_nx, conv_dt, conv_pairs, conv_impl, conv_out;
  std::string conv_ref_policy;
  double conv_tf = 0.0, conv_ref_dt = 0.0;
  unsigned conv_threads = 0;
  std::uint64_t conv_seed = 0;
  conv->add_option("--config", conv_config, "JSON experiment config");
  conv->add_option("--methods", conv_methods, "Comma separated method names or 'all'");
  conv->add_option("--problem", conv_problem);
  conv->add_option("--nx", conv_nx, "Comma separated grid sizes");
  conv->add_option("--dt", conv_dt, "Comma separated time steps");
  conv->add_option("--pairs", conv_pairs, "Comma separated high/low pairs, e.g. 64/64,64/16");
  conv->add_option("--impl", conv_impl);
  conv->add_option("--tf", conv_tf);
  conv->add_option("--ref-dt", conv_ref_dt);
  conv->add_option("--ref-policy", conv_ref_policy);
  conv->add_option("--seed", conv_seed);
  conv->add_option("--threads", conv_threads);
  conv->add_option("--out", conv_out, "Output directory");

  // epsilon
  auto* eps = app.add_subcommand("epsilon", "Effective perturbation size of the low-precision Fdot");
  std::string eps_problem = "advection", eps_low = "b16", eps_impl = "1";
  std::size_t eps_nx = 50;
  eps->add_option("--problem", eps_problem);
  eps->add_option("--nx", eps_nx);
  eps->add_option("--low", eps_low);
  eps->add_option("--impl", eps_impl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*check) {
      if (check_all) {
        for (const auto& card : tdrk::list_methods()) {
          print_report(card.name, card.tableau, &card);
          std::cout << "----\n";
        }
      } else if (!check_method.empty()) {
        const auto& card = tdrk::get_method(check_method);
        print_report(card.name, card.tableau, &card);
      } else if (!check_file.empty()) {
        print_report(check_file, tdrk::TdrkTableau::parse(read_text(check_file)), nullptr);
      } else {
        throw tdrk::ConfigError("check needs --method, --file or --all");
      }
    } else if (*stab) {
      const auto& card = tdrk::get_method(stab_method);
      const tdrk::ComplexGrid grid = stab_grid.empty() ? tdrk::ComplexGrid{} : parse_grid(stab_grid);
      const auto mode = stab_per_stage ? tdrk::PerturbationMode::PerStage : tdrk::PerturbationMode::Shared;
      const auto scan = tdrk::scan_region(card.tableau, grid, stab_eps, stab_samples, stab_seed, mode, stab_threads);
      const std::string stem = card.name + "_eps" + short_number(stab_eps);
      const fs::path dir(stab_out);
      tdrk::emit_region_svg(scan, dir / (stem + ".svg"), dir / (stem + ".csv"), card.name);
      std::cout << "stable cells: " << scan.stable_count() << " of " << scan.mask.size() << '\n'
                << "wrote " << (dir / (stem + ".svg")).string() << " and " << (dir / (stem + ".csv")).string()
                << '\n';
    } else if (*solve) {
      const auto& card = tdrk::get_method(solve_method);
      const auto problem = tdrk::make_problem({solve_problem, solve_nx, tdrk::parse_format(solve_high),
                                               tdrk::parse_format(solve_low),
                                               tdrk::parse_implementation(solve_impl), solve_speed});
      const auto traj = tdrk::integrate({solve_dt, solve_tf, &card, problem.get()});
      const auto x = tdrk::grid_points(solve_nx);
      std::ostringstream csv;
      csv.precision(17);
      csv << "x,u\n";
      for (std::size_t j = 0; j < solve_nx; ++j) {
        csv << x[j].to_double() << ',' << traj.final_state.at(j).to_double() << '\n';
      }
      const fs::path out(solve_out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      std::ofstream f(out);
      if (!f || !(f << csv.str())) throw tdrk::IoError("cannot write '" + out.string() + "'");
      std::cout << "steps: " << traj.steps_taken << (traj.diverged ? " (diverged)" : "") << '\n';
      if (const auto exact = problem->exact_solution(solve_tf); exact && !traj.diverged) {
        std::printf("max-norm error: %.6e\n", tdrk::max_abs_diff(traj.final_state, *exact));
      }
    } else if (*conv) {
      tdrk::ExperimentConfig cfg;
      if (!conv_config.empty()) {
        cfg = tdrk::load_experiment_config(conv_config);
      } else {
        cfg.reference = tdrk::default_reference(cfg.problem);
      }
      if (!conv_problem.empty()) {
        const bool changed = conv_problem != cfg.problem;
        cfg.problem = conv_problem;
        if (changed) cfg.reference = tdrk::default_reference(cfg.problem);
      }
      if (!conv_methods.empty()) {
        cfg.methods = conv_methods == "all" ? tdrk::method_names() : split_list(conv_methods);
      }
      if (!conv_nx.empty()) {
        cfg.nx_list.clear();
        for (const auto& s : split_list(conv_nx)) cfg.nx_list.push_back(std::stoul(s));
      }
      if (!conv_dt.empty()) {
        cfg.dt_list.clear();
        for (const auto& s : split_list(conv_dt)) cfg.dt_list.push_back(std::stod(s));
      }
      if (!conv_pairs.empty()) {
        cfg.precision_pairs.clear();
        for (const auto& s : split_list(conv_pairs)) cfg.precision_pairs.push_back(tdrk::PrecisionPair::parse(s));
      }
      if (!conv_impl.empty()) cfg.implementation = tdrk::parse_implementation(conv_impl);
      if (conv->count("--tf") > 0) cfg.t_final = conv_tf;
      if (conv->count("--ref-dt") > 0) cfg.reference.dt = conv_ref_dt;
      if (!conv_ref_policy.empty()) cfg.reference.policy = tdrk::parse_format(conv_ref_policy);
      if (conv->count("--seed") > 0) cfg.seed = conv_seed;
      if (conv->count("--threads") > 0) cfg.threads = conv_threads;
      if (!conv_out.empty()) cfg.out_dir = conv_out;

      const auto records = tdrk::run_convergence(cfg);
      tdrk::emit_outputs(records, cfg);
      for (const auto& m : cfg.methods) {
        std::cout << tdrk::method_table_markdown(records, m) << '\n';
      }
      std::cout << "wrote " << records.size() << " records to " << (cfg.out_dir / "results.csv").string() << '\n';
    } else if (*eps) {
      const double e = tdrk::characterize_epsilon(eps_problem, eps_nx, tdrk::parse_format(eps_low),
                                                  tdrk::parse_implementation(eps_impl));
      std::printf("%.6e\n", e);
    }
  } catch (const tdrk::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const tdrk::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid number: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
