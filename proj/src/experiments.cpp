#include "dpgbem/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "dpgbem/error_analysis.hpp"
#include "dpgbem/solver.hpp"

namespace dpgbem {

QuadratureConfig ExperimentConfig::quadrature() const {
  QuadratureConfig q;
  if (quad_profile == "fast") {
    q.far_order = 5;
    q.duffy_order = 8;
    q.near_threshold = 3.0;
    q.edge_order = 6;
    q.max_depth = 10;
  } else if (quad_profile == "accurate") {
    q = QuadratureConfig{};
  } else {
    throw std::invalid_argument("quad profile must be 'fast' or 'accurate'");
  }
  return q;
}

int ExperimentConfig::area_quad_degree() const {
  return quad_profile == "fast" ? 7 : 9;
}

int ExperimentConfig::edge_quad_points() const {
  return quad_profile == "fast" ? 6 : 8;
}

std::string ExperimentConfig::to_key_values() const {
  std::ostringstream out;
  out.precision(17);
  out << "experiment=" << experiment << "\n";
  out << "levels=" << levels << "\n";
  out << "degree-increment=" << degree_increment << "\n";
  out << "tol=" << tol << "\n";
  out << "quad-profile=" << quad_profile << "\n";
  out << "out=" << this->out << "\n";
  out << "dump-mesh=" << dump_mesh << "\n";
  out << "seed=" << seed << "\n";
  if (!exp1_nodal.empty()) {
    out << "exp1-nodal=";
    for (size_t i = 0; i < exp1_nodal.size(); ++i)
      out << (i ? "," : "") << exp1_nodal[i];
    out << "\n";
  }
  return out.str();
}

ExperimentConfig ExperimentConfig::from_key_values(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto pos = line.find('=');
    if (pos == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    std::string key = line.substr(0, pos);
    std::string value = line.substr(pos + 1);
    if (key == "experiment") cfg.experiment = std::stoi(value);
    else if (key == "levels") cfg.levels = std::stoi(value);
    else if (key == "degree-increment") cfg.degree_increment = std::stoi(value);
    else if (key == "tol") cfg.tol = std::stod(value);
    else if (key == "quad-profile") cfg.quad_profile = value;
    else if (key == "out") cfg.out = value;
    else if (key == "dump-mesh") cfg.dump_mesh = value;
    else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(value));
    else if (key == "exp1-nodal") {
      cfg.exp1_nodal.clear();
      std::istringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ',')) cfg.exp1_nodal.push_back(std::stod(item));
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return cfg;
}

std::vector<double> experiment1_default_nodal(const SurfaceMesh& cube) {
  std::vector<double> values(cube.num_vertices());
  for (int i = 0; i < cube.num_vertices(); ++i) {
    const auto& v = cube.vertices[i];
    values[i] = v[0] * v[1] * v[2];
  }
  return values;
}

ConvergenceRecord run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment < 1 || cfg.experiment > 4)
    throw std::invalid_argument("experiment id must be in {1,2,3,4}");
  if (cfg.levels < 0) throw std::invalid_argument("levels must be >= 0");

  bool cube = cfg.experiment <= 2;
  int cap = cube ? 3 : 5;
  if (cfg.levels > cap)
    std::cerr << "warning: level " << cfg.levels << " exceeds the desk-scale cap "
              << cap << " for this geometry; nonlocal assembly cost grows like "
                 "the square of the triangle count\n";

  QuadratureConfig quad = cfg.quadrature();
  SurfaceMesh coarse = cube ? build_cube_surface() : build_square_screen();
  std::vector<double> nodal;
  if (cfg.experiment == 1) {
    nodal = cfg.exp1_nodal.empty() ? experiment1_default_nodal(coarse)
                                   : cfg.exp1_nodal;
    if (static_cast<int>(nodal.size()) != coarse.num_vertices())
      throw std::invalid_argument("exp1-nodal needs one value per cube vertex");
  } else if (cfg.experiment == 3) {
    nodal.assign(coarse.num_vertices(), 0.0);
    nodal[4] = 1.0;  // center node of the screen
  }

  ConvergenceRecord record;
  record.experiment = cfg.experiment;
  SurfaceMesh mesh = coarse;
  for (int level = 0; level <= cfg.levels; ++level) {
    auto t0 = std::chrono::steady_clock::now();
    LevelRecord row;
    row.level = level;
    row.num_triangles = mesh.num_triangles();
    double hmin = 1e300;
    for (int t = 0; t < mesh.num_triangles(); ++t)
      hmin = std::min(hmin, element_geometry(mesh, t).h);
    row.h_min = hmin;

    try {
      DofLayout layout = make_dof_layout(mesh, cfg.degree_increment);
      SystemMatrices sys = assemble_system(mesh, layout, quad);

      ExactSolution exact;
      bool manufactured = cfg.experiment == 1 || cfg.experiment == 3;
      if (manufactured) {
        ManufacturedLoad load = assemble_load_manufactured(
            mesh, layout, coarse, nodal, quad, cfg.area_quad_degree(),
            cfg.edge_quad_points());
        sys.F = std::move(load.F);
        exact = std::move(load.exact);
      } else if (cfg.experiment == 2) {
        sys.F = assemble_load_analytic(
            mesh, layout, [](const Eigen::Vector3d& x) { return x[0]; });
      } else {
        sys.F = assemble_load_analytic(
            mesh, layout, [](const Eigen::Vector3d&) { return 1.0; });
      }

      auto [sol, report] = solve_normal_equations(sys, cfg.tol);
      row.energy_err_sq = report.energy_error_sq;
      row.cg_iters = report.iterations;
      if (manufactured) {
        row.l2_sigma = l2_error_sigma(mesh, layout, sol.u, exact);
        row.l2_phi = l2_error_phi(mesh, layout, sol.u, exact);
        row.l2_sigma_hat = l2_error_sigma_hat(mesh, layout, sol.u, exact);
      }
    } catch (const std::exception& err) {
      record.diagnostic = err.what();
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
      record.rows.push_back(row);
      break;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    record.rows.push_back(row);

    if (level < cfg.levels) mesh = refine_uniform(mesh);
  }

  if (!cfg.dump_mesh.empty()) write_obj(mesh, cfg.dump_mesh);
  if (!cfg.out.empty()) {
    emit_csv(record, cfg.out);
    emit_gnuplot(record, cfg.out, cfg.out + ".gp");
  }
  return record;
}

namespace {

std::optional<double> column_value(const LevelRecord& row, ErrorColumn c) {
  switch (c) {
    case ErrorColumn::energy_sq: return row.energy_err_sq;
    case ErrorColumn::l2_sigma: return row.l2_sigma;
    case ErrorColumn::l2_phi: return row.l2_phi;
    case ErrorColumn::l2_sigma_hat: return row.l2_sigma_hat;
  }
  return std::nullopt;
}

std::vector<double> eoc_generic(const ConvergenceRecord& record, ErrorColumn c,
                                bool wrt_h) {
  std::vector<double> slopes;
  for (size_t k = 0; k + 1 < record.rows.size(); ++k) {
    auto e0 = column_value(record.rows[k], c);
    auto e1 = column_value(record.rows[k + 1], c);
    double denom = wrt_h
        ? std::log(record.rows[k].h_min / record.rows[k + 1].h_min)
        : std::log(double(record.rows[k + 1].num_triangles) /
                   double(record.rows[k].num_triangles));
    if (!e0 || !e1 || !(*e0 > 0.0) || !(*e1 > 0.0) || denom == 0.0) {
      slopes.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      slopes.push_back(std::log(*e0 / *e1) / denom);
    }
  }
  return slopes;
}

void print_field(std::ostream& out, const std::optional<double>& v) {
  if (v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *v);
    out << buf;
  }
}

}  // namespace

std::vector<double> eoc(const ConvergenceRecord& record, ErrorColumn column) {
  return eoc_generic(record, column, false);
}

std::vector<double> eoc_wrt_h(const ConvergenceRecord& record, ErrorColumn column) {
  return eoc_generic(record, column, true);
}

void emit_csv(const ConvergenceRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "level,num_triangles,h_min,energy_err_sq,l2_sigma,l2_phi,"
         "l2_sigma_hat,cg_iters,wall_ms\n";
  char buf[64];
  for (const auto& row : record.rows) {
    out << row.level << "," << row.num_triangles << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", row.h_min);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", row.energy_err_sq);
    out << buf << ",";
    print_field(out, row.l2_sigma);
    out << ",";
    print_field(out, row.l2_phi);
    out << ",";
    print_field(out, row.l2_sigma_hat);
    out << "," << row.cg_iters << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", row.wall_ms);
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

void emit_gnuplot(const ConvergenceRecord& record, const std::string& csv_path,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  double ref = 1.0;
  if (!record.rows.empty() && record.rows.front().energy_err_sq > 0)
    ref = record.rows.front().energy_err_sq * record.rows.front().num_triangles;
  out << "set logscale xy\n"
      << "set datafile separator ','\n"
      << "set xlabel 'number of triangles'\n"
      << "set ylabel 'squared energy error'\n"
      << "plot '" << csv_path << "' using 2:4 skip 1 with linespoints"
      << " title 'experiment " << record.experiment << "', \\\n"
      << "     " << ref << "/x title '#T^{-1}' with lines dashtype 2\n";
}

}  // namespace dpgbem
