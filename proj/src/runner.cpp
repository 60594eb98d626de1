#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "fsilab/csv.hpp"
#include "fsilab/errors.hpp"
#include "fsilab/scenario.hpp"

namespace fsilab {

namespace fs = std::filesystem;

bool is_sdof_scenario(const ScenarioSpec& spec) { return spec.name() == "sdof"; }

SdofSetup build_sdof_setup(const ScenarioSpec& spec) {
  SdofSetup setup;
  setup.params.m_ss = spec.number("sdof.mass");
  setup.params.c = spec.number("sdof.damping");
  setup.params.k = spec.number("sdof.stiffness");
  setup.params.m_fs = spec.number("coupling.gamma_n1");  // m_fs plays gamma_N1
  const double force = spec.number("sdof.force");
  setup.params.f_ext = [force](double) { return force; };
  setup.params.validate();
  setup.dt = spec.number("time.dt");
  setup.t_end = spec.number("time.t_end");
  if (!(setup.dt > 0.0)) throw ConfigError("time.dt must be positive");
  return setup;
}

std::map<std::string, TimeSeries> run_sdof(const SdofSetup& setup) {
  std::map<std::string, TimeSeries> series;
  series["d"].label = "d";
  series["v"].label = "v";
  series["a"].label = "a";
  const int steps = static_cast<int>(std::floor(setup.t_end / setup.dt + 1e-9));
  double d = 0.0, v = 0.0, t = 0.0;
  for (int n = 0; n < steps; ++n) {
    const SdofStep next = step_sdof(setup.params, d, v, t, setup.dt);
    t = (n + 1) * setup.dt;
    d = next.d;
    v = next.v;
    series["d"].push(t, next.d);
    series["v"].push(t, next.v);
    series["a"].push(t, next.a);
  }
  return series;
}

CoupledSystems FemSetup::systems() const {
  CoupledSystems sys;
  sys.solid = &solid;
  sys.fluid = fluid.get();
  sys.interface = &interface;
  sys.blowup_limit = blowup_limit;
  return sys;
}

FemSetup build_fem_setup(const ScenarioSpec& spec, AssemblyMode mode) {
  FemSetup setup;

  const int nx = spec.integer("solid.nx");
  const int ny = spec.integer("solid.ny");
  const Vec2 origin(spec.number("solid.origin_x"), spec.number("solid.origin_y"));
  const Vec2 extent(spec.number("solid.width"), spec.number("solid.height"));
  QuadMesh mesh = build_structured_quad_mesh(nx, ny, origin, extent);

  // Clamped at the bottom edge; the rest of the boundary is wetted.
  std::vector<int> dirichlet;
  for (const auto& e : mesh.boundary_tags.at("bottom")) {
    dirichlet.push_back(2 * e.n0);
    dirichlet.push_back(2 * e.n0 + 1);
    dirichlet.push_back(2 * e.n1);
    dirichlet.push_back(2 * e.n1 + 1);
  }
  const NeoHookeanMaterial material = NeoHookeanMaterial::make(
      spec.number("solid.youngs_modulus"), spec.number("solid.poisson_ratio"),
      spec.number("solid.density"));
  setup.solid = make_solid_system(std::move(mesh), material, std::move(dirichlet), mode);

  setup.interface = extract_interface(setup.solid.mesh, {"right", "top", "left"});

  setup.coupling.gamma_n1 = spec.number("coupling.gamma_n1");
  setup.coupling.gamma_n2 = spec.number("coupling.gamma_n2");
  setup.coupling.beta = spec.number("coupling.beta");
  setup.coupling.k_max = spec.integer("coupling.k_max");
  setup.coupling.dt = spec.number("time.dt");
  setup.coupling.treatment = spec.str("coupling.treatment") == "implicit"
                                 ? VelocityTreatment::Implicit
                                 : VelocityTreatment::Explicit;
  setup.coupling.early_exit_tol = spec.number("coupling.early_exit_tol");
  setup.coupling.validate();

  const std::string kind = spec.str("fluid.kind");
  if (kind == "navier-stokes") {
    FluidProperties props;
    props.density = spec.number("fluid.density");
    props.viscosity = spec.number("fluid.viscosity");
    ChannelBc bc;
    bc.left.kind = SideKind::Inlet;
    bc.right.kind = SideKind::Outflow;
    bc.bottom.kind = SideKind::Wall;
    bc.top.kind = spec.str("fluid.top_bc") == "slip" ? SideKind::Slip : SideKind::Wall;
    bc.inlet.scale = spec.number("fluid.inlet_scale");
    bc.inlet.height = spec.number("fluid.inlet_height");
    bc.inlet.pulsatile = spec.boolean("fluid.inlet_pulsatile");
    bc.inlet.bias = spec.number("fluid.inlet_bias");
    bc.inlet.period = spec.number("fluid.inlet_period");
    PicardOptions picard;
    picard.tol = spec.number("fluid.picard_tol");
    picard.max_iterations = spec.integer("fluid.picard_max");
    auto ns = std::make_unique<NavierStokesFluid>(
        spec.integer("fluid.grid_nx"), spec.integer("fluid.grid_ny"), Vec2(0.0, 0.0),
        Vec2(spec.number("fluid.channel_length"), spec.number("fluid.channel_height")), props, bc,
        setup.coupling.gamma_n1, setup.coupling.gamma_n2, picard, mode);
    setup.ns = ns.get();
    setup.fluid = std::move(ns);
  } else {
    SurrogateFluidParams params;
    double ref_length = 0.0;
    for (const auto& seg : setup.interface.segments)
      ref_length += (seg.ref_endpoints[1] - seg.ref_endpoints[0]).norm();
    const double solid_mass = material.density * extent.x() * extent.y();
    params.added_mass = spec.number("surrogate.mass_ratio") * solid_mass / ref_length;
    params.added_damping = spec.number("surrogate.added_damping");
    const std::string forcing = spec.str("surrogate.forcing");
    params.forcing.kind = forcing == "constant" ? SurrogateForcingKind::Constant
                          : forcing == "sine"   ? SurrogateForcingKind::Sine
                                                : SurrogateForcingKind::None;
    params.forcing.amplitude = spec.number("surrogate.forcing_amplitude");
    params.forcing.period = spec.number("surrogate.forcing_period");
    params.forcing.direction =
        spec.str("surrogate.forcing_dir") == "y" ? Vec2::UnitY() : Vec2::UnitX();
    setup.fluid = std::make_unique<SurrogateFluid>(params);
  }

  setup.t_end = spec.number("time.t_end");
  setup.blowup_limit = spec.number("run.blowup_factor") * extent.y();

  // Point A: midpoint of the free end.
  const Vec2 tip(origin.x() + 0.5 * extent.x(), origin.y() + extent.y());
  double best = std::numeric_limits<double>::max();
  for (int n = 0; n < setup.solid.mesh.num_nodes(); ++n) {
    const double dist = (setup.solid.mesh.nodes[n] - tip).squaredNorm();
    if (dist < best) {
      best = dist;
      setup.tip_node = n;
    }
  }
  return setup;
}

double scenario_reynolds_number(const ScenarioSpec& spec) {
  const double scale = spec.number("fluid.inlet_scale");
  const double height = spec.number("fluid.inlet_height");
  const double mean_velocity = scale * height * height / 6.0;
  return spec.number("fluid.density") * mean_velocity * spec.number("solid.height") /
         spec.number("fluid.viscosity");
}

namespace {

void write_snapshot(const std::string& path, const NavierStokesFluid& ns,
                    const FluidState& state) {
  const QuadMesh& grid = ns.grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  out << "# vtk DataFile Version 3.0\nfsilab field snapshot\nASCII\nDATASET STRUCTURED_GRID\n";
  // Structured grids are built row-major, so node counts recover the shape.
  int nx1 = 0;
  while (nx1 < grid.num_nodes() && grid.nodes[nx1].y() == grid.nodes[0].y()) ++nx1;
  const int ny1 = grid.num_nodes() / nx1;
  out << "DIMENSIONS " << nx1 << " " << ny1 << " 1\n";
  out << "POINTS " << grid.num_nodes() << " double\n";
  for (const auto& x : grid.nodes)
    out << format_double(x.x()) << " " << format_double(x.y()) << " 0\n";
  out << "POINT_DATA " << grid.num_nodes() << "\n";
  out << "VECTORS velocity double\n";
  for (int n = 0; n < grid.num_nodes(); ++n)
    out << format_double(state.v[2 * n]) << " " << format_double(state.v[2 * n + 1]) << " 0\n";
  out << "SCALARS pressure double\nLOOKUP_TABLE default\n";
  for (int n = 0; n < grid.num_nodes(); ++n) out << format_double(state.p[n]) << "\n";
}

Table series_table(const std::map<std::string, TimeSeries>& series,
                   const std::vector<std::string>& order) {
  Table table;
  table.headers.push_back("t");
  table.columns.emplace_back();
  bool have_t = false;
  for (const auto& name : order) {
    const auto it = series.find(name);
    if (it == series.end()) continue;
    if (!have_t) {
      table.columns[0] = it->second.t;
      have_t = true;
    }
    table.headers.push_back(name);
    table.columns.push_back(it->second.y);
  }
  return table;
}

}  // namespace

RunOutputs run_scenario(const ScenarioSpec& spec, const std::string& out_dir, bool seedless) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);

  RunOutputs out;
  out.manifest.config = spec.values;
  out.manifest.seedless_asserted = seedless;

  std::vector<std::string> channel_order;
  Table iterations;
  try {
    if (is_sdof_scenario(spec)) {
      out.series = run_sdof(build_sdof_setup(spec));
      channel_order = {"d", "v", "a"};
      out.manifest.derived["model"] = "sdof";
    } else {
      FemSetup setup = build_fem_setup(spec);
      const CoupledSystems systems = setup.systems();
      std::vector<Recorder> recorders = {
          tip_displacement_recorder("ux_A", setup.tip_node, 0),
          tip_displacement_recorder("uy_A", setup.tip_node, 1),
          interface_force_recorder("f_interface_x", 0),
          interface_force_recorder("f_interface_y", 1),
      };
      channel_order = {"ux_A", "uy_A", "f_interface_x", "f_interface_y"};

      const int snapshot_every = spec.integer("output.snapshot_every");
      std::function<void(const CoupledState&, const IterationTrace&)> on_step;
      if (snapshot_every > 0 && setup.ns) {
        fs::create_directories(fs::path(out_dir) / "snapshots");
        const NavierStokesFluid* ns = setup.ns;
        on_step = [&, ns, snapshot_every](const CoupledState& state, const IterationTrace&) {
          if (state.step_index % snapshot_every != 0) return;
          char name[64];
          std::snprintf(name, sizeof(name), "snapshots/step_%06d.vtk", state.step_index);
          write_snapshot((fs::path(out_dir) / name).string(), *ns, state.fluid);
          out.manifest.outputs.push_back({name, ""});
        };
      }

      SimulationResult result = run_simulation(make_initial_state(systems), setup.coupling,
                                               systems, setup.t_end, recorders, on_step);
      out.series = std::move(result.series);

      iterations.headers = {"step", "t", "k", "force_increment_norm", "newton_iterations"};
      iterations.columns.assign(5, {});
      for (std::size_t n = 0; n < result.traces.size(); ++n) {
        const auto& trace = result.traces[n];
        for (std::size_t k = 0; k < trace.force_increment_norms.size(); ++k) {
          iterations.columns[0].push_back(static_cast<double>(n + 1));
          iterations.columns[1].push_back((n + 1) * setup.coupling.dt);
          iterations.columns[2].push_back(static_cast<double>(k + 1));
          iterations.columns[3].push_back(trace.force_increment_norms[k]);
          iterations.columns[4].push_back(static_cast<double>(trace.newton_iterations[k]));
        }
      }
      out.manifest.derived["solid_dofs"] = std::to_string(setup.solid.num_dofs());
      if (setup.ns) {
        out.manifest.derived["fluid_dofs"] = std::to_string(setup.ns->num_dofs());
        out.manifest.derived["reynolds_number"] = format_double(scenario_reynolds_number(spec));
      }
    }
  } catch (const DivergenceError& err) {
    out.manifest.status = "divergence";
    out.manifest.error_message = err.what();
  } catch (const ConfigError&) {
    throw;  // configuration problems abort before any outputs
  } catch (const NonConvergenceError& err) {
    out.manifest.status = "solver-error";
    out.manifest.error_message = err.what();
  } catch (const SolverError& err) {
    out.manifest.status = "solver-error";
    out.manifest.error_message = err.what();
  } catch (const ElementInversionError& err) {
    out.manifest.status = "solver-error";
    out.manifest.error_message = err.what();
  }

  if (!out.series.empty()) {
    write_csv((fs::path(out_dir) / "series.csv").string(), series_table(out.series, channel_order));
    out.manifest.outputs.push_back({"series.csv", ""});
  }
  if (!iterations.headers.empty()) {
    write_csv((fs::path(out_dir) / "iterations.csv").string(), iterations);
    out.manifest.outputs.push_back({"iterations.csv", ""});
  }
  for (auto& o : out.manifest.outputs)
    o.digest = file_digest((fs::path(out_dir) / o.path).string());

  out.manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest((fs::path(out_dir) / "manifest.json").string(), out.manifest);
  return out;
}

namespace {

const TimeSeries* primary_channel(const RunOutputs& run) {
  for (const char* name : {"ux_A", "d"}) {
    const auto it = run.series.find(name);
    if (it != run.series.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace

SweepResult sweep_scenario(const ScenarioSpec& base,
                           const std::vector<std::pair<std::string, std::vector<std::string>>>& grid,
                           const std::string& out_dir, int workers, double phase_period,
                           bool seedless) {
  if (grid.empty()) throw ConfigError("sweep: parameter grid is empty");
  for (const auto& [key, values] : grid)
    if (values.empty()) throw ConfigError("sweep: no values for grid key '" + key + "'");

  // Cartesian product, first key outermost.
  std::vector<std::vector<std::pair<std::string, std::string>>> cells_overrides = {{}};
  for (const auto& [key, values] : grid) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& prefix : cells_overrides)
      for (const auto& v : values) {
        auto cell = prefix;
        cell.emplace_back(key, v);
        next.push_back(std::move(cell));
      }
    cells_overrides = std::move(next);
  }

  fs::create_directories(out_dir);
  const int n_cells = static_cast<int>(cells_overrides.size());
  std::vector<SweepCell> cells(n_cells);
  std::vector<RunOutputs> runs(n_cells);

  auto run_cell = [&](int i) {
    char name[32];
    std::snprintf(name, sizeof(name), "cell_%03d", i);
    SweepCell& cell = cells[i];
    cell.index = i;
    cell.directory = (fs::path(out_dir) / name).string();
    ScenarioSpec spec = base;
    for (const auto& [k, v] : cells_overrides[i]) spec.values[k] = v;
    cell.spec = spec;
    runs[i] = run_scenario(spec, cell.directory, seedless);
    cell.status = runs[i].manifest.status;

    const TimeSeries* primary = primary_channel(runs[i]);
    if (cell.status == "ok" && primary && primary->size() > 0) {
      for (double y : primary->y) cell.max_displacement = std::max(cell.max_displacement, std::abs(y));
      try {
        cell.settling_time = settling_time(*primary, std::nullopt, 0.02);
        cell.settled = true;
      } catch (const NotSettledError&) {
        cell.settling_time = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      cell.settling_time = std::numeric_limits<double>::quiet_NaN();
      cell.max_displacement = std::numeric_limits<double>::quiet_NaN();
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (int i = 0; i < n_cells; ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next_cell{0};
    for (int w = 0; w < std::min(workers, n_cells); ++w)
      pool.emplace_back([&] {
        for (int i = next_cell.fetch_add(1); i < n_cells; i = next_cell.fetch_add(1)) run_cell(i);
      });
    for (auto& t : pool) t.join();
  }

  // Phase lag against cell 0 when a forcing period is given.
  const TimeSeries* reference =
      (phase_period > 0.0 && cells[0].status == "ok") ? primary_channel(runs[0]) : nullptr;
  for (int i = 0; i < n_cells; ++i) {
    SweepCell& cell = cells[i];
    cell.phase_lag = std::numeric_limits<double>::quiet_NaN();
    if (reference && cell.status == "ok") {
      const TimeSeries* primary = primary_channel(runs[i]);
      if (primary) {
        try {
          cell.phase_lag = phase_lag(*reference, *primary, phase_period);
          cell.lag_defined = true;
        } catch (const std::invalid_argument&) {
        }
      }
    }
  }

  SweepResult result;
  result.summary_path = (fs::path(out_dir) / "summary.csv").string();
  std::ofstream summary(result.summary_path, std::ios::binary);
  summary << "index,directory";
  for (const auto& [key, values] : grid) summary << "," << key;
  summary << ",settling_time,phase_lag,max_abs_displacement,diverged,status\n";
  for (int i = 0; i < n_cells; ++i) {
    summary << i << "," << fs::path(cells[i].directory).filename().string();
    for (const auto& [k, v] : cells_overrides[i]) summary << "," << v;
    summary << "," << format_double(cells[i].settling_time) << ","
            << format_double(cells[i].phase_lag) << ","
            << format_double(cells[i].max_displacement) << ","
            << (cells[i].status == "divergence" ? 1 : 0) << "," << cells[i].status << "\n";
  }
  summary.close();

  result.cells = std::move(cells);
  return result;
}

}  // namespace fsilab
