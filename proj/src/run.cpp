#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "nlms/analysis.hpp"
#include "nlms/config.hpp"
#include "nlms/io.hpp"

namespace nlms {

namespace {

std::string energy_block(const EnergyValue& ev) {
  std::ostringstream os;
  os << "energy.value = " << fmt_double(ev.value) << "\n";
  os << "energy.tail_part = " << fmt_double(ev.tail_part) << "\n";
  os << "energy.pair_count = " << ev.pair_count << "\n";
  return os.str();
}

std::string graph_block(const GraphReport& gr) {
  std::ostringstream os;
  os << "graph.is_graph = " << (gr.is_graph ? "true" : "false") << "\n";
  os << "graph.violations = " << gr.violations.size() << "\n";
  for (auto& v : gr.violations)
    os << "graph.violation = column " << v.column << " gap " << fmt_double(v.gap_lo) << " "
       << fmt_double(v.gap_hi) << "\n";
  return os.str();
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult rr;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::ostringstream report;
  report << "# nlms run report\n\n## config\n" << emit_config(cfg) << "\n## results\n";
  auto finish = [&](int code) {
    std::string path = cfg.out_dir + "/report.txt";
    write_text_file(path, report.str());
    rr.artifacts.push_back(path);
    rr.exit_code = code;
    return rr;
  };

  try {
    if (cfg.command == Command::verify) {
      auto dom = cfg.make_domain();
      auto u = cfg.make_exterior();
      CellSet e = load_cellset(cfg.out_dir + "/raster.p5", cfg.out_dir + "/raster.meta", dom, u);
      GraphReport gr = graph_check(e, *dom);
      report << graph_block(gr);
      if (!gr.is_graph) return finish(1);
      SpikeReport sp = spike_bound_check(e, *dom);
      report << "spike.M = " << fmt_double(sp.M) << "\n";
      report << "spike.clearance_cells = " << sp.clearance_cells << "\n";
      StickinessReport st = stickiness_check(e, *dom, *u);
      report << "stickiness.max_gap = " << fmt_double(st.max_gap) << "\n";
      return finish(sp.ok ? 0 : 1);
    }

    if (cfg.command == Command::lemma_check) {
      auto kernel = cfg.make_kernel();
      CsvWriter csv({"kind", "R", "lambda", "L", "alpha", "C_o", "s", "n", "measured",
                     "reference", "ratio", "flagged"});
      for (double R : cfg.lemma_R) {
        LemmaRow row = trap_integral(R, cfg.lemma_lambda, *kernel);
        csv.add_row({"trap", fmt_double(row.R), fmt_double(row.lambda), "", "", "",
                     fmt_double(row.s), std::to_string(row.n), fmt_double(row.measured),
                     fmt_double(row.reference), fmt_double(row.ratio), row.flagged ? "1" : "0"});
      }
      for (double lam : cfg.lemma_lambdas) {
        LemmaRow row = trap_integral(1.0, lam, *kernel);
        csv.add_row({"trap", fmt_double(row.R), fmt_double(row.lambda), "", "", "",
                     fmt_double(row.s), std::to_string(row.n), fmt_double(row.measured),
                     fmt_double(row.reference), fmt_double(row.ratio), row.flagged ? "1" : "0"});
      }
      LemmaRow gr = graph_trap_integral(cfg.lemma_L, cfg.lemma_alpha, cfg.lemma_C_o, *kernel);
      csv.add_row({"graph_trap", "", "", fmt_double(gr.L), fmt_double(gr.alpha),
                   fmt_double(gr.C_o), fmt_double(gr.s), std::to_string(gr.n),
                   fmt_double(gr.measured), fmt_double(gr.reference), fmt_double(gr.ratio),
                   gr.flagged ? "1" : "0"});
      std::string path = cfg.out_dir + "/lemma.csv";
      csv.write(path);
      rr.artifacts.push_back(path);
      report << "lemma.rows = " << (cfg.lemma_R.size() + cfg.lemma_lambdas.size() + 1) << "\n";
      return finish(0);
    }

    // solve-based commands
    Problem p = cfg.make_problem();
    SolveOptions opts;
    opts.max_free_cells = cfg.max_free_cells;
    opts.graph_radius_cells = cfg.graph_radius_cells;
    SolveResult sol = cfg.solver_mode == "exact"
                          ? minimize_exact(p, opts)
                          : minimize_descent(p, CellSet::base(p.grid, p.dom, p.exterior,
                                                              std::vector<uint8_t>(
                                                                  size_t(p.grid->cell_count()), 0)),
                                             200);
    report << energy_block(sol.energy);
    report << "solver.truncation_error_bound = " << fmt_double(sol.truncation_error_bound)
           << "\n";

    std::string raster = cfg.out_dir + "/raster.p5";
    std::string meta = cfg.out_dir + "/raster.meta";
    write_raster_p5(raster, sol.set);
    write_raster_meta(meta, sol.set, *p.dom, *p.exterior);
    rr.artifacts.push_back(raster);
    rr.artifacts.push_back(meta);

    GraphReport gr = graph_check(sol.set, *p.dom);
    report << graph_block(gr);
    SpikeReport sp = spike_bound_check(sol.set, *p.dom);
    report << "spike.M = " << fmt_double(sp.M) << "\n";
    report << "spike.clearance_cells = " << sp.clearance_cells << "\n";
    report << "spike.ok = " << (sp.ok ? "true" : "false") << "\n";
    if (gr.is_graph) {
      StickinessReport st = stickiness_check(sol.set, *p.dom, *p.exterior);
      report << "stickiness.max_gap = " << fmt_double(st.max_gap) << "\n";
      CsvWriter scs({"column", "v", "u_exterior", "gap"});
      for (auto& c : st.columns)
        scs.add_row({std::to_string(c.column), fmt_double(c.v), fmt_double(c.u_exterior),
                     fmt_double(c.gap)});
      std::string path = cfg.out_dir + "/stickiness.csv";
      scs.write(path);
      rr.artifacts.push_back(path);
    }

    if (cfg.command == Command::curvature_scan) {
      CsvWriter csv({"ix", "iv", "value", "converged", "est_8h", "est_4h", "est_2h"});
      auto boundary = sol.set.boundary_cells();
      for (CellIndex c : boundary) {
        CurvatureSample smp = nmc(sol.set, c, *p.kernel, *p.grid);
        int ix, iy, iv;
        p.grid->unflat(c, ix, iy, iv);
        csv.add_row({std::to_string(ix), std::to_string(iv), fmt_double(smp.value),
                     smp.converged ? "1" : "0", fmt_double(smp.estimates[0]),
                     fmt_double(smp.estimates[1]), fmt_double(smp.estimates[2])});
      }
      std::string path = cfg.out_dir + "/curvature.csv";
      csv.write(path);
      rr.artifacts.push_back(path);
      report << "curvature.samples = " << boundary.size() << "\n";
    }

    if (cfg.command == Command::slide) {
      bool empty = false;
      auto region = region_cells(*p.dom, *p.grid, RegionKind::Omega, {}, &empty);
      ContactReport cr = slide_contact(sol.set, region);
      report << "slide.t = " << fmt_double(cr.t) << "\n";
      report << "slide.t_cells = " << cr.t_cells << "\n";
      report << "slide.contact_cells = " << cr.contact.size() << "\n";
      CsvWriter csv({"ix", "iv", "interior"});
      for (auto& [c, interior] : cr.contact) {
        int ix, iy, iv;
        p.grid->unflat(c, ix, iy, iv);
        csv.add_row({std::to_string(ix), std::to_string(iv), interior ? "1" : "0"});
      }
      std::string path = cfg.out_dir + "/contact.csv";
      csv.write(path);
      rr.artifacts.push_back(path);
    }

    if (!sp.ok) {
      report << "error = spike clearance below 2 cells; enlarge the vertical window\n";
      return finish(1);
    }
    return finish(0);
  } catch (const std::logic_error& ex) {
    report << "error = internal invariant violation: " << ex.what() << "\n";
    return finish(3);
  } catch (const std::exception& ex) {
    report << "error = " << ex.what() << "\n";
    return finish(2);
  }
}

}  // namespace nlms
