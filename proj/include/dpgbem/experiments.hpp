#ifndef DPGBEM_EXPERIMENTS_HPP
#define DPGBEM_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dpgbem/assembly.hpp"

namespace dpgbem {

/// Configuration of one convergence study. `levels` is the finest level
/// index: the run covers levels 0..levels.
struct ExperimentConfig {
  int experiment = 1;            // 1,2: cube; 3,4: screen
  int levels = 3;
  int degree_increment = 2;      // r; test degrees are (r, 1+r)
  double tol = 1e-10;            // CG relative tolerance
  std::string quad_profile = "accurate";  // fast | accurate
  std::string out;               // CSV path ("" = do not write)
  std::string dump_mesh;         // OBJ path for the finest mesh ("" = off)
  unsigned seed = 0;             // forwarded to randomized property tests only
  std::vector<double> exp1_nodal;  // optional override of the 8 cube values

  QuadratureConfig quadrature() const;
  int area_quad_degree() const;  // manufactured-load surface rule
  int edge_quad_points() const;  // manufactured-load edge rule

  std::string to_key_values() const;
  static ExperimentConfig from_key_values(const std::string& text);
};

struct LevelRecord {
  int level = 0;
  int num_triangles = 0;
  double h_min = 0.0;
  double energy_err_sq = 0.0;
  std::optional<double> l2_sigma;
  std::optional<double> l2_phi;
  std::optional<double> l2_sigma_hat;
  int cg_iters = 0;
  double wall_ms = 0.0;
};

struct ConvergenceRecord {
  int experiment = 0;
  std::vector<LevelRecord> rows;
  std::string diagnostic;  // nonempty if a level aborted the run
};

enum class ErrorColumn { energy_sq, l2_sigma, l2_phi, l2_sigma_hat };

/// Default nodal values of the Experiment I manufactured solution: the
/// coordinate product x*y*z at each cube vertex (mean-zero by symmetry).
std::vector<double> experiment1_default_nodal(const SurfaceMesh& cube);

ConvergenceRecord run_experiment(const ExperimentConfig& cfg);

/// Per-level-pair slopes log(e_k/e_{k+1}) / log(N_{k+1}/N_k) w.r.t. the
/// triangle counts N; NaN where undefined (missing or non-positive values).
std::vector<double> eoc(const ConvergenceRecord& record, ErrorColumn column);

/// Same slopes w.r.t. the mesh size h_min.
std::vector<double> eoc_wrt_h(const ConvergenceRecord& record, ErrorColumn column);

void emit_csv(const ConvergenceRecord& record, const std::string& path);

/// Log-log gnuplot script of the squared energy error versus the number of
/// triangles, with a #T^-1 reference line.
void emit_gnuplot(const ConvergenceRecord& record, const std::string& csv_path,
                  const std::string& path);

}  // namespace dpgbem

#endif
