#include "pspec/run.hpp"

#include "pspec/cap.hpp"
#include "pspec/domain.hpp"
#include "pspec/fields.hpp"
#include "pspec/harness.hpp"
#include "pspec/isoperim.hpp"
#include "pspec/mesh_io.hpp"
#include "pspec/rearrange.hpp"
#include "pspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace pspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct BuiltMesh {
  Mesh mesh;
  /// Sampled min Gaussian curvature; NaN when not applicable.
  double min_curvature = kNaN;
  /// True for meshes of the unit round model (icosphere, circle of radius 1).
  bool round = false;
};

BuiltMesh build_mesh(const MeshSpec& spec) {
  BuiltMesh out;
  if (spec.kind == "icosphere") {
    out.mesh = build_icosphere(spec.level);
    out.min_curvature = 1.0;
    out.round = true;
  } else if (spec.kind == "ellipsoid") {
    Ellipsoid e = build_ellipsoid(spec.aspect, spec.level, spec.normalize);
    out.mesh = std::move(e.mesh);
    out.min_curvature = e.min_curvature;
    out.round = spec.aspect == 1.0 && spec.normalize;
  } else if (spec.kind == "circle") {
    out.mesh = build_circle(spec.segments);
    out.round = true;
  } else if (spec.kind == "interval") {
    out.mesh = build_interval(spec.segments, spec.length);
  } else {
    if (spec.path.empty()) throw ConfigError("mesh.kind = file needs mesh.path");
    out.mesh = load_off(spec.path);
  }
  return out;
}

Domain build_domain(const RunConfig& cfg, const BuiltMesh& bm) {
  if (cfg.mesh.kind == "interval") return interval_domain(cfg.mesh.segments, cfg.mesh.length);
  if (cfg.problem == "closed") return whole_domain(bm.mesh);
  if (bm.mesh.dimension() != 2) throw ConfigError("dirichlet problems need a surface or an interval");
  return superlevel_domain(bm.mesh, coordinate_field(bm.mesh, 2), cfg.domain_threshold);
}

std::string p_tag(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

std::string off_text(const Mesh& mesh) {
  std::ostringstream os;
  write_off(os, mesh);
  return os.str();
}

std::string field_text(std::span<const double> u) {
  std::ostringstream os;
  write_field_csv(os, u);
  return os.str();
}

Check metadata(const RunConfig& cfg) {
  Check c;
  c.name = "run_metadata";
  Json config = Json::object();
  for (const auto& [k, v] : config_entries(cfg)) config[k] = v;
  c.inputs["config"] = std::move(config);
  c.inputs["seed"] = cfg.seed;
  c.inputs["version"] = kVersion;
  return c;
}

Check make_check(std::string name, Json inputs, double lhs, double rhs, double margin,
                 double tolerance, bool pass) {
  Check c;
  c.name = std::move(name);
  c.inputs = std::move(inputs);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = margin;
  c.tolerance = tolerance;
  c.pass = pass;
  return c;
}

// Reference first eigenvalue of the unit model matching the problem, if any,
// and the relative tolerance used against it.
struct Reference {
  double value = kNaN;
  double tolerance = 0.0;
  bool one_sided = false;
};

Reference reference_for(const RunConfig& cfg, const BuiltMesh& bm, const Domain& dom, double p) {
  Reference r;
  const PExponent pe(p);
  if (cfg.mesh.kind == "interval") {
    r.value = solve_radial_1d(pe, 1, RadialProblem::Interval) / std::pow(cfg.mesh.length, p);
    r.tolerance = 0.005;
  } else if (cfg.mesh.kind == "circle" && dom.is_whole()) {
    r.value = solve_radial_1d(pe, 1, RadialProblem::Hemisphere);
    r.tolerance = 0.005;
  } else if (bm.mesh.dimension() == 2 && dom.is_whole() && bm.min_curvature >= 0.99) {
    r.value = sphere_reference(pe, 2);
    r.tolerance = kMateiTolerance;
    r.one_sided = !bm.round;
  } else if (bm.round && bm.mesh.dimension() == 2 && cfg.domain_threshold == 0.0) {
    r.value = sphere_reference(pe, 2);
    r.tolerance = 0.03;
  }
  return r;
}

void command_mesh(const RunConfig& cfg, RunOutput& out) {
  const BuiltMesh bm = build_mesh(cfg.mesh);
  const Mesh& m = bm.mesh;
  Json in;
  in["kind"] = cfg.mesh.kind;
  in["vertices"] = m.vertex_count();
  in["cells"] = m.cell_count();
  in["dimension"] = m.dimension();
  in["total_measure"] = m.total_measure();
  in["mean_edge_length"] = m.mean_edge_length();
  if (m.closed()) {
    in["beta"] = beta(m);
    in["diameter"] = diameter(m);
  }
  Check c;
  c.name = "mesh_summary";
  c.inputs = std::move(in);
  out.report.add(std::move(c));
  if (std::isfinite(bm.min_curvature)) {
    out.report.add(make_check("curvature_lower_bound", {{"kind", cfg.mesh.kind}}, bm.min_curvature, 1.0,
                              bm.min_curvature - 1.0, 0.01, bm.min_curvature >= 0.99));
  }
  out.files["mesh.off"] = off_text(m);
}

void command_eigen(const RunConfig& cfg, RunOutput& out) {
  const BuiltMesh bm = build_mesh(cfg.mesh);
  const Domain dom = build_domain(cfg, bm);
  out.files["mesh.off"] = off_text(dom.mesh);
  for (double p : cfg.p) {
    const PExponent pe(p);
    const EigenResult res = dom.is_whole() ? closed_eigen(dom.mesh, pe, cfg.solver)
                                           : dirichlet_eigen(dom, pe, cfg.solver);
    Json in;
    in["p"] = p;
    in["problem"] = dom.is_whole() ? "closed" : "dirichlet";
    in["vertices"] = dom.mesh.vertex_count();
    in["iterations"] = res.iterations;
    in["converged"] = res.converged;
    in["residual"] = res.residual;
    in["continuation_ok"] = res.continuation_ok;
    bool pass = res.converged && res.continuation_ok;
    if (dom.is_whole()) {
      const int nodal = nodal_domains(dom.mesh, res.field).count;
      in["constraint_residual"] = res.constraint_residual;
      in["nodal_domains"] = nodal;
      pass = pass && res.constraint_residual <= 1e-8 * dom.mesh.total_measure() && nodal == 2;
    }
    const Reference ref = reference_for(cfg, bm, dom, p);
    double margin = kNaN;
    if (std::isfinite(ref.value)) {
      margin = res.lambda / ref.value - 1.0;
      in["reference_one_sided"] = ref.one_sided;
      pass = pass && (ref.one_sided ? margin >= -ref.tolerance : std::abs(margin) <= ref.tolerance);
    }
    Check c = make_check("eigen", std::move(in), res.lambda, ref.value, margin,
                         std::isfinite(ref.value) ? ref.tolerance : kNaN, pass);
    out.report.add(std::move(c));
    out.files["eigen_p" + p_tag(p) + ".csv"] = field_text(res.field);
    out.summary += "p = " + p_tag(p) + "  lambda = " + Table::cell(res.lambda) + "\n";
  }
}

void command_symmetrize(const RunConfig& cfg, RunOutput& out) {
  const BuiltMesh bm = build_mesh(cfg.mesh);
  const Domain dom = (cfg.problem == "closed" && cfg.mesh.kind != "interval")
                         ? whole_domain(bm.mesh)
                         : build_domain(cfg, bm);
  const Mesh& m = dom.mesh;
  const double b = dom.is_whole() ? (m.closed() ? beta(m) : 1.0) : dom.ambient_beta();
  std::vector<double> u;
  FieldRng rng(cfg.seed);
  if (cfg.field == "z") {
    u = positive_part(coordinate_field(m, m.dimension() == 2 ? 2 : 0));
  } else if (cfg.field == "eigen") {
    const PExponent pe(cfg.p.front());
    u = dom.is_whole() ? positive_part(closed_eigen(m, pe, cfg.solver).field)
                       : dirichlet_eigen(dom, pe, cfg.solver).field;
  } else if (cfg.field == "random") {
    u = positive_part(random_smooth_field(m, rng));
  } else if (cfg.field == "bump") {
    u = random_bump_field(m, dom.pinned, rng);
  } else {
    std::ifstream in(cfg.field);
    if (!in) throw std::runtime_error("cannot read field file " + cfg.field);
    u = read_field_csv(in);
    if (u.size() != m.vertex_count()) throw std::runtime_error("field file does not match the mesh");
  }

  const RadialProfile prof = symmetrize(m, u, b);
  Table profile({"colatitude", "value"});
  for (std::size_t j = 0; j < prof.knots.size(); ++j) profile.add(prof.knots[j], prof.values[j]);
  out.files["profile.csv"] = profile.str();
  out.files["field.csv"] = field_text(u);

  const double lo = *std::min_element(u.begin(), u.end());
  const double hi = *std::max_element(u.begin(), u.end());
  for (double p : cfg.p) {
    const PExponent pe(p);
    const CheckValues eq = lp_equimeasurability(m, u, prof, b, pe);
    out.report.add(make_check("lp_equimeasurability", {{"p", p}, {"field", cfg.field}, {"beta", b}},
                              eq.lhs, eq.rhs, eq.relative, 0.01, eq.relative <= 0.01));
    if (hi > lo && lo >= 0.0) {
      const CheckValues ps = polya_szego_check(m, u, b, pe);
      out.report.add(make_check("polya_szego", {{"p", p}, {"field", cfg.field}, {"beta", b}}, ps.lhs,
                                ps.rhs, ps.relative, 0.01, ps.relative >= -0.01));
    }
  }
  if (hi > lo) {
    const CheckValues ca = coarea_check(m, u);
    out.report.add(make_check("coarea", {{"field", cfg.field}}, ca.lhs, ca.rhs, ca.relative, 0.02,
                              ca.relative <= 0.02));
  }
}

void add_battery_rows(Table& t, const std::string& mesh_id, const Mesh& m,
                      const SuperlevelBattery& bat, double b) {
  for (std::size_t f = 0; f < bat.fields.size(); ++f) {
    for (double th : bat.thresholds[f]) {
      const double mu = superlevel_measure(m, bat.fields[f], th);
      const double len = level_boundary_measure(m, bat.fields[f], th);
      t.add(mesh_id, f, th, mu, len, gromov_ratio(m, bat.fields[f], th, b));
    }
  }
}

void command_verify(const RunConfig& cfg, RunOutput& out) {
  const BuiltMesh bm = build_mesh(cfg.mesh);
  const Mesh& m = bm.mesh;
  if (m.dimension() != 2 || !m.closed()) throw ConfigError("verify needs a closed surface mesh");
  const double b = beta(m);
  const std::vector<double> z = coordinate_field(m, 2);
  const double zmax = *std::max_element(z.begin(), z.end());

  {
    const CheckValues ca = coarea_check(m, z);
    out.report.add(make_check("coarea", {{"field", "z"}}, ca.lhs, ca.rhs, ca.relative, 0.01,
                              ca.relative <= 0.01));
    if (bm.round) {
      const double rel = std::abs(ca.rhs - kPi * kPi) / (kPi * kPi);
      out.report.add(make_check("coarea_analytic", {{"field", "z"}}, ca.rhs, kPi * kPi, rel, 0.01, rel <= 0.01));
    }
  }

  {
    FieldRng rng(cfg.seed);
    std::vector<std::vector<double>> fields{std::vector<double>(m.vertex_count(), 1.0), positive_part(z)};
    for (int i = 0; i < cfg.smooth_fields; ++i) fields.push_back(positive_part(random_smooth_field(m, rng)));
    for (double p : cfg.p) {
      CheckValues worst;
      for (const auto& f : fields) {
        const CheckValues c = lp_equimeasurability(m, f, symmetrize(m, f, b), b, PExponent(p));
        if (c.relative >= worst.relative) worst = c;
      }
      out.report.add(make_check("lp_equimeasurability", {{"p", p}, {"fields", fields.size()}}, worst.lhs,
                                worst.rhs, worst.relative, 0.01, worst.relative <= 0.01));
    }
  }

  const Domain cap = superlevel_domain(m, z, cfg.domain_threshold);
  const double cap_beta = cap.ambient_beta();
  {
    FieldRng rng(cfg.seed + 1);
    std::vector<std::vector<double>> bumps;
    for (int i = 0; i < cfg.bump_fields; ++i) bumps.push_back(random_bump_field(cap.mesh, cap.pinned, rng));
    for (double p : cfg.p) {
      CheckValues worst;
      worst.relative = std::numeric_limits<double>::infinity();
      for (const auto& f : bumps) {
        const CheckValues c = polya_szego_check(cap.mesh, f, cap_beta, PExponent(p));
        if (c.relative < worst.relative) worst = c;
      }
      if (!bumps.empty()) {
        out.report.add(make_check("polya_szego_battery", {{"p", p}, {"fields", bumps.size()}}, worst.lhs,
                                  worst.rhs, worst.relative, 0.01, worst.relative >= -0.01));
      }
    }
  }

  for (double p : cfg.p) {
    const PExponent pe(p);
    const EigenResult eig = dirichlet_eigen(cap, pe, cfg.solver);
    const CheckValues ps = polya_szego_check(cap.mesh, eig.field, cap_beta, pe);
    const double ratio = ps.rhs / ps.lhs;
    const bool near = p != 2.0 || !bm.round || cfg.domain_threshold != 0.0 || ratio >= 0.97;
    out.report.add(make_check("polya_szego_eigenfunction", {{"p", p}, {"lambda", eig.lambda}}, ps.lhs, ps.rhs,
                              ps.relative, 0.01, ps.relative >= -0.01 && near));
    if (eig.converged) {
      const LemmaAudit audit = lemma_chain_audit(cap, eig, pe);
      for (const AuditStep& s : audit.steps) {
        const double tol = s.name == "radial_holder_equality" ? 1e-10 : 0.03;
        out.report.add(make_check("lemma_chain_" + s.name, {{"p", p}, {"two_sided", s.two_sided}, {"grid", 64}},
                                  kNaN, kNaN, s.worst, tol, s.worst <= tol));
      }
    } else {
      out.report.add(make_check("lemma_chain_audit", {{"p", p}}, kNaN, kNaN, kNaN, kNaN, false));
    }
  }

  Table battery({"mesh", "field", "t", "mu", "boundary_measure", "ratio"});
  {
    const SuperlevelBattery bat = superlevel_battery(m, cfg.gromov_fields, cfg.seed + 2, false);
    if (!bat.fields.empty()) {
      const CrokeProfile cp = croke_profile(m, bat.fields, bat.thresholds, b, diameter(m));
      out.report.add(make_check("gromov_battery", {{"fields", bat.fields.size()}}, cp.min_ratio, 1.0,
                                cp.min_ratio - 1.0, 0.02, cp.min_ratio >= 0.98));
      add_battery_rows(battery, "gromov", m, bat, b);
    }
    if (bm.round) {
      for (double t : {0.0, 0.5 * zmax}) {
        const double r = gromov_ratio(m, z, t, b);
        out.report.add(make_check("gromov_cap", {{"t", t}}, r, 1.0, r - 1.0, 0.01, std::abs(r - 1.0) <= 0.01));
      }
    }
  }
  {
    const SuperlevelBattery bat = superlevel_battery(m, cfg.croke_fields, cfg.seed + 3, true);
    const double d = diameter(m);
    const CrokeProfile cp = croke_profile(m, bat.fields, bat.thresholds, b, d);
    Json in{{"diameter", d}, {"beta", b}, {"fields", bat.fields.size()},
            {"histogram_lo", cp.histogram_lo}, {"histogram_hi", cp.histogram_hi}, {"histogram", cp.histogram}};
    out.report.add(make_check("croke_profile", std::move(in), cp.min_ratio, kNaN, kNaN, kNaN, true));
    add_battery_rows(battery, "croke", m, bat, b);
  }
  out.files["battery.csv"] = battery.str();

  if (std::isfinite(bm.min_curvature) && bm.min_curvature >= 0.99) {
    for (double p : cfg.p) {
      const SweepRecord r = matei_check(m, PExponent(p), cfg.mesh.aspect, bm.min_curvature, cfg.mesh.level, cfg.solver);
      const bool pass = matei_pass(r) && (!bm.round || std::abs(r.ratio - 1.0) <= kMateiTolerance);
      out.report.add(make_check("matei", {{"p", p}, {"diameter", r.diameter}, {"beta", r.beta}},
                                r.lambda, r.lambda_sphere, r.ratio - 1.0, kMateiTolerance, pass));
    }
  }
}

void command_sweep(const RunConfig& cfg, RunOutput& out) {
  const std::vector<SweepRecord> recs = pinching_sweep(cfg.aspects, cfg.p, cfg.mesh.level, cfg.solver);

  // Empirical Croke constant per aspect, reported next to the eigenvalue ratios.
  std::map<double, double> croke;
  for (double a : cfg.aspects) {
    try {
      const Ellipsoid e = build_ellipsoid(a, cfg.mesh.level, true);
      const SuperlevelBattery bat = superlevel_battery(e.mesh, cfg.croke_fields, cfg.seed, true);
      croke[a] = croke_profile(e.mesh, bat.fields, bat.thresholds, beta(e.mesh), diameter(e.mesh)).min_ratio;
    } catch (const std::exception&) {
      croke[a] = kNaN;
    }
  }

  Table t({"aspect", "p", "level", "diameter", "beta", "min_curvature", "lambda", "lambda_sphere", "ratio",
           "iterations", "converged", "failed", "croke_min_ratio", "croke_min_ratio_pow_p"});
  for (const SweepRecord& r : recs) {
    const double c = croke[r.aspect];
    t.add(r.aspect, r.p, r.level, r.diameter, r.beta, r.min_curvature, r.lambda, r.lambda_sphere, r.ratio,
          r.iterations, r.converged, r.failed, c, std::pow(c, r.p));
    const bool curvature_ok = r.min_curvature >= 0.99;
    out.report.add(make_check("matei", {{"aspect", r.aspect}, {"p", r.p}, {"diameter", r.diameter}, {"error", r.error}},
                              r.lambda, r.lambda_sphere, r.ratio - 1.0, kMateiTolerance,
                              !r.failed && (!curvature_ok || matei_pass(r))));
  }
  out.files["sweep.csv"] = t.str();

  for (double p : cfg.p) {
    const TrendCheck tc = pinching_trend(recs, p);
    out.report.add(make_check("pinching_trend", {{"p", p}}, kNaN, kNaN, tc.worst_increase, 0.01, tc.pass));
    for (const SweepRecord& r : recs) {
      if (r.p != p || r.aspect != 1.0 || r.failed) continue;
      const double dd = std::abs(r.diameter / kPi - 1.0);
      const double dr = std::abs(r.ratio - 1.0);
      out.report.add(make_check("round_endpoint_diameter", {{"p", p}}, r.diameter, kPi, dd, 0.02, dd <= 0.02));
      out.report.add(make_check("round_endpoint_ratio", {{"p", p}}, r.ratio, 1.0, dr, 0.02, dr <= 0.02));
    }
  }
  const auto lo = std::min_element(cfg.aspects.begin(), cfg.aspects.end());
  const auto hi = std::max_element(cfg.aspects.begin(), cfg.aspects.end());
  if (*lo == 1.0 && *hi > 1.0) {
    const double gap = croke[*hi] - croke[*lo];
    out.report.add(make_check("croke_gap", {{"aspect", *hi}, {"round_aspect", *lo}}, croke[*hi], croke[*lo], gap,
                              0.0, gap > 0.0));
  }
}

void command_oracle(const RunConfig& cfg, RunOutput& out) {
  const bool interval = cfg.oracle_problem == "interval";
  for (double p : cfg.p) {
    const PExponent pe(p);
    const double lambda = solve_radial_1d(pe, cfg.oracle_n, interval ? RadialProblem::Interval : RadialProblem::Hemisphere);
    Json in{{"p", p}, {"n", cfg.oracle_n}, {"problem", cfg.oracle_problem}};
    double exact = kNaN;
    if (interval) {
      exact = (p - 1.0) * std::pow(2.0 * kPi / (p * std::sin(kPi / p)), p);
    } else if (p == 2.0) {
      exact = cfg.oracle_n;
    }
    if (std::isfinite(exact)) {
      const double err = std::abs(lambda - exact);
      out.report.add(make_check("oracle", std::move(in), lambda, exact, err, 1e-6, err <= 1e-6));
    } else {
      out.report.add(make_check("oracle", std::move(in), lambda, kNaN, kNaN, kNaN, true));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "p = %s  n = %d  %s  lambda = %.12g\n", p_tag(p).c_str(), cfg.oracle_n,
                  cfg.oracle_problem.c_str(), lambda);
    out.summary += buf;
  }
}

}  // namespace

RunOutput execute(const RunConfig& cfg) {
  RunOutput out;
  out.report.add(metadata(cfg));
  if (cfg.command == "mesh") {
    command_mesh(cfg, out);
  } else if (cfg.command == "eigen") {
    command_eigen(cfg, out);
  } else if (cfg.command == "symmetrize") {
    command_symmetrize(cfg, out);
  } else if (cfg.command == "verify") {
    command_verify(cfg, out);
  } else if (cfg.command == "sweep") {
    command_sweep(cfg, out);
  } else if (cfg.command == "oracle") {
    command_oracle(cfg, out);
  } else {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  out.files["report.json"] = out.report.to_json().dump(2) + "\n";
  return out;
}

int run(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  RunOutput res;
  try {
    res = execute(cfg);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : res.files) {
      std::ofstream f(dir / name, std::ios::binary);
      f << text;
      if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  os << res.summary;
  int failed = 0;
  for (const Check& c : res.report.checks()) {
    if (!c.pass) {
      ++failed;
      os << "FAIL " << c.name << "\n";
    }
  }
  os << res.report.checks().size() << " checks, " << failed << " failed; report written to "
     << (std::filesystem::path(cfg.out_dir) / "report.json").string() << "\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace pspec
