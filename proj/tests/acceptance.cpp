// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "pspec/config.hpp"
#include "pspec/domain.hpp"
#include "pspec/fields.hpp"
#include "pspec/harness.hpp"
#include "pspec/isoperim.hpp"
#include "pspec/rearrange.hpp"
#include "pspec/run.hpp"
#include "pspec/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

using namespace pspec;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kPs{1.5, 2.0, 3.0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      pass = false;
      detail += " [x]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, title, seconds_since(t0),
              o.detail.c_str());
  std::fflush(stdout);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "interval solver vs shooting", [](Outcome& o) {
    const Domain d = interval_domain(400);
    for (double p : kPs) {
      const auto t0 = std::chrono::steady_clock::now();
      const EigenResult e = dirichlet_eigen(d, PExponent(p));
      const double secs = seconds_since(t0);
      const double ref = solve_radial_1d(PExponent(p), 1, RadialProblem::Interval);
      o.require(e.converged && rel(e.lambda, ref) <= 0.005 && secs < 10.0, "p=%g err=%.2e t=%.2fs", p,
                rel(e.lambda, ref), secs);
      if (p == 2.0) o.require(rel(e.lambda, kPi * kPi) <= 0.005, "pi^2 err=%.2e", rel(e.lambda, kPi * kPi));
    }
  });

  criterion(2, "closed sphere p=2", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const auto t0 = std::chrono::steady_clock::now();
    const EigenResult e = closed_eigen(s, PExponent(2.0));
    const double secs = seconds_since(t0);
    const int nd = nodal_domains(s, e.field).count;
    o.require(rel(e.lambda, 2.0) <= 0.02, "lambda=%.6f", e.lambda);
    o.require(nd == 2, "nodal domains=%d", nd);
    o.require(secs < 120.0, "t=%.1fs", secs);
  });

  criterion(3, "hemisphere vs sphere", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const Domain h = superlevel_domain(s, coordinate_field(s, 2), 0.0);
    for (double p : kPs) {
      const double lh = dirichlet_eigen(h, PExponent(p)).lambda;
      const double ls = closed_eigen(s, PExponent(p)).lambda;
      o.require(rel(lh, ls) <= 0.03, "p=%g hemi=%.5f sphere=%.5f", p, lh, ls);
    }
  });

  criterion(4, "radial oracle", [](Outcome& o) {
    for (int n : {2, 3, 4}) {
      const double l = solve_radial_1d(PExponent(2.0), n, RadialProblem::Hemisphere);
      o.require(std::abs(l - n) <= 1e-6, "n=%d err=%.1e", n, std::abs(l - n));
    }
  });

  criterion(5, "coarea on z", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const CheckValues c = coarea_check(s, coordinate_field(s, 2));
    o.require(rel(c.lhs, kPi * kPi) <= 0.01 && rel(c.rhs, kPi * kPi) <= 0.01, "lhs=%.5f rhs=%.5f", c.lhs, c.rhs);
  });

  criterion(6, "Lp equimeasurability", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const double b = beta(s);
    std::vector<std::vector<double>> fields{std::vector<double>(s.vertex_count(), 1.0),
                                            positive_part(coordinate_field(s, 2))};
    FieldRng rng(2024);
    for (int i = 0; i < 20; ++i) fields.push_back(positive_part(random_smooth_field(s, rng)));
    for (double p : kPs) {
      double worst = 0.0;
      for (const auto& f : fields) {
        worst = std::max(worst, lp_equimeasurability(s, f, symmetrize(s, f, b), b, PExponent(p)).relative);
      }
      o.require(worst <= 0.01, "p=%g worst=%.2e", p, worst);
    }
  });

  criterion(7, "Polya-Szego", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const Domain hemi = superlevel_domain(s, coordinate_field(s, 2), 0.0);
    const Ellipsoid e = build_ellipsoid(1.2, 5, true);
    const Domain ecap = superlevel_domain(e.mesh, coordinate_field(e.mesh, 2), 0.0);
    for (const auto& [name, dom] : {std::pair<const char*, const Domain*>{"hemisphere", &hemi}, {"ellipsoid cap", &ecap}}) {
      FieldRng rng(7);
      double worst = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 100; ++i) {
        const auto u = random_bump_field(dom->mesh, dom->pinned, rng);
        for (double p : kPs) {
          worst = std::min(worst, polya_szego_check(dom->mesh, u, dom->ambient_beta(), PExponent(p)).relative);
        }
      }
      o.require(worst >= -0.01, "%s min margin=%.4f", name, worst);
    }
    const EigenResult eig = dirichlet_eigen(hemi, PExponent(2.0));
    const CheckValues c = polya_szego_check(hemi.mesh, eig.field, hemi.ambient_beta(), PExponent(2.0));
    o.require(c.rhs / c.lhs >= 0.97 && c.relative >= -0.01, "eigenfunction rhs/lhs=%.4f", c.rhs / c.lhs);
  });

  criterion(8, "Gromov isoperimetric", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const Ellipsoid e = build_ellipsoid(1.2, 5, true);
    for (const auto& [name, m] : {std::pair<const char*, const Mesh*>{"sphere", &s}, {"ellipsoid", &e.mesh}}) {
      const SuperlevelBattery bat = superlevel_battery(*m, 50, 8, false);
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < bat.fields.size(); ++i) {
        for (double t : bat.thresholds[i]) worst = std::min(worst, gromov_ratio(*m, bat.fields[i], t, beta(*m)));
      }
      o.require(worst >= 0.98, "%s min=%.4f", name, worst);
    }
    const auto z = coordinate_field(s, 2);
    for (double t : {-0.5, 0.0, 0.5}) {
      const double r = gromov_ratio(s, z, t, beta(s));
      o.require(std::abs(r - 1.0) <= 0.01, "cap t=%g ratio=%.4f", t, r);
    }
  });

  criterion(9, "Croke gap", [](Outcome& o) {
    const Mesh s = build_icosphere(5);
    const Ellipsoid e = build_ellipsoid(1.2, 5, true);
    const SuperlevelBattery bs = superlevel_battery(s, 50, 9, true);
    const SuperlevelBattery be = superlevel_battery(e.mesh, 50, 9, true);
    const CrokeProfile ps = croke_profile(s, bs.fields, bs.thresholds, beta(s), diameter(s));
    const CrokeProfile pe = croke_profile(e.mesh, be.fields, be.thresholds, beta(e.mesh), diameter(e.mesh));
    o.require(pe.diameter < kPi, "ellipsoid D=%.4f", pe.diameter);
    o.require(pe.min_ratio > ps.min_ratio, "ellipsoid min=%.4f sphere min=%.4f gap=%.4f", pe.min_ratio,
              ps.min_ratio, pe.min_ratio - ps.min_ratio);
  });

  const std::vector<double> aspects{1.0, 1.05, 1.1, 1.15, 1.2};
  std::vector<SweepRecord> sweep;

  criterion(10, "Matei comparison", [&](Outcome& o) {
    sweep = pinching_sweep(aspects, kPs, 5);
    double worst = std::numeric_limits<double>::infinity();
    for (const SweepRecord& r : sweep) {
      if (r.failed) o.require(false, "a=%g p=%g failed: %s", r.aspect, r.p, r.error.c_str());
      if (!r.failed) worst = std::min(worst, r.ratio);
      if (r.aspect == 1.0) o.require(std::abs(r.ratio - 1.0) <= 0.02, "round p=%g ratio=%.4f", r.p, r.ratio);
    }
    o.require(worst >= 0.98, "family min ratio=%.4f", worst);
  });

  criterion(11, "pinching trend", [&](Outcome& o) {
    if (sweep.empty()) sweep = pinching_sweep(aspects, kPs, 5);
    for (double p : kPs) {
      const TrendCheck t = pinching_trend(sweep, p);
      o.require(t.pass, "p=%g worst increase=%.2e", p, t.worst_increase);
    }
    for (const SweepRecord& r : sweep) {
      if (r.aspect != 1.0) continue;
      o.require(rel(r.diameter, kPi) <= 0.02 && std::abs(r.ratio - 1.0) <= 0.02, "a=1 p=%g D=%.4f ratio=%.4f", r.p,
                r.diameter, r.ratio);
    }
  });

  criterion(12, "lemma chain audit", [](Outcome& o) {
    std::vector<LemmaAudit> audits;
    for (int level : {5, 6}) {
      const Mesh s = build_icosphere(level);
      const Domain h = superlevel_domain(s, coordinate_field(s, 2), 0.0);
      const EigenResult e = dirichlet_eigen(h, PExponent(2.0));
      audits.push_back(lemma_chain_audit(h, e, PExponent(2.0)));
    }
    for (std::size_t k = 0; k < audits[0].steps.size(); ++k) {
      const double w5 = audits[0].steps[k].worst, w6 = audits[1].steps[k].worst;
      // Only violations count; negative values mean the inequality holds with room.
      const double v5 = std::max(w5, 0.0), v6 = std::max(w6, 0.0);
      o.require(w5 <= 0.03 && v6 <= v5 + 1e-12, "%s %.2e -> %.2e", audits[0].steps[k].name.c_str(), w5, w6);
    }
  });

  criterion(13, "determinism", [](Outcome& o) {
    const char* configs[] = {
        "command = verify\nmesh.level = 4\np = 2\nbattery.smooth_fields = 5\nbattery.bump_fields = 10\n"
        "battery.gromov_fields = 10\nbattery.croke_fields = 10\nseed = 99\n",
        "command = sweep\nmesh.level = 3\nsweep.aspects = 1, 1.1\np = 1.5, 3\nbattery.croke_fields = 5\nseed = 99\n",
        "command = symmetrize\nmesh.level = 4\nfield = random\np = 2\nseed = 99\n",
    };
    const auto dir = std::filesystem::temp_directory_path() / "pspec_acceptance";
    for (const char* text : configs) {
      RunConfig cfg = parse_config(text);
      cfg.out_dir = dir.string();
      std::map<std::string, std::string> first;
      bool same = true;
      for (int rep = 0; rep < 2; ++rep) {
        std::filesystem::remove_all(dir);
        std::ostringstream out, err;
        run(cfg, out, err);
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
          const std::string name = entry.path().filename().string();
          if (rep == 0) {
            first[name] = slurp(entry.path());
          } else {
            same = same && first.count(name) && first[name] == slurp(entry.path());
          }
        }
      }
      o.require(same && !first.empty(), "%s: %zu files", cfg.command.c_str(), first.size());
    }
    std::filesystem::remove_all(dir);
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
