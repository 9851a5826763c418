// Convergence-study driver for the DPG boundary-element experiments.
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dpgbem/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DPG boundary elements: convergence experiments"};
  app.set_config("--config", "", "plain-text key=value config file");

  dpgbem::ExperimentConfig cfg;
  app.add_option("--experiment", cfg.experiment,
                 "experiment id: 1 cube manufactured, 2 cube f=x, "
                 "3 screen manufactured, 4 screen f=1")
      ->check(CLI::Range(1, 4));
  app.add_option("--levels", cfg.levels,
                 "finest refinement level (runs levels 0..N)")
      ->check(CLI::Range(0, 16));
  app.add_option("--degree-increment", cfg.degree_increment,
                 "test-space degree increment r")
      ->check(CLI::Range(1, 3));
  app.add_option("--tol", cfg.tol, "CG relative tolerance");
  app.add_option("--out", cfg.out, "CSV output path");
  app.add_option("--quad-profile", cfg.quad_profile, "fast | accurate")
      ->check(CLI::IsMember({"fast", "accurate"}));
  app.add_option("--dump-mesh", cfg.dump_mesh, "write the finest mesh as OBJ");
  app.add_option("--seed", cfg.seed, "seed for randomized property tests only");
  app.add_option("--exp1-nodal", cfg.exp1_nodal,
                 "override the 8 nodal values of the Experiment I solution");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cfg.experiment == 1) {
      auto nodal = cfg.exp1_nodal.empty()
          ? dpgbem::experiment1_default_nodal(dpgbem::build_cube_surface())
          : cfg.exp1_nodal;
      std::printf("experiment 1 nodal values:");
      for (double v : nodal) std::printf(" %g", v);
      std::printf("\n");
    }

    dpgbem::ConvergenceRecord record = dpgbem::run_experiment(cfg);

    std::printf("%5s %9s %12s %14s %12s %12s %12s %8s %10s\n", "level", "#tri",
                "h_min", "energy_err_sq", "l2_sigma", "l2_phi", "l2_sig_hat",
                "cg_it", "wall_ms");
    for (const auto& row : record.rows) {
      std::printf("%5d %9d %12.4e %14.6e ", row.level, row.num_triangles,
                  row.h_min, row.energy_err_sq);
      auto opt = [](const std::optional<double>& v) {
        static char buf[32];
        if (v) std::snprintf(buf, sizeof(buf), "%12.4e", *v);
        else std::snprintf(buf, sizeof(buf), "%12s", "-");
        return buf;
      };
      std::printf("%s %s %s %8d %10.1f\n", opt(row.l2_sigma), opt(row.l2_phi),
                  opt(row.l2_sigma_hat), row.cg_iters, row.wall_ms);
    }

    auto slopes = dpgbem::eoc(record, dpgbem::ErrorColumn::energy_sq);
    if (!slopes.empty()) {
      std::printf("energy EOC w.r.t. #T:");
      for (double s : slopes) std::printf(" %.3f", s);
      std::printf("\n");
    }

    if (!record.diagnostic.empty()) {
      std::fprintf(stderr, "aborted: %s\n", record.diagnostic.c_str());
      return 2;
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
