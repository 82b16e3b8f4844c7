// apdiff command line: generate, diffract, fb, autocorr, periods, apcheck.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apdiff/apfun.hpp"
#include "apdiff/combs.hpp"
#include "apdiff/config.hpp"
#include "apdiff/diffraction.hpp"
#include "apdiff/errors.hpp"
#include "apdiff/io.hpp"

using namespace apdiff;

namespace {

Vec parse_list(const std::string& text, const char* what) {
  Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot read ") + what + " from \"" + text + "\"");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

struct Options {
  std::string config, out, json_out, points, freq, halfwidths;
  double radius = 0, cutoff = 0, min_intensity = 0, max_radius = 0, bin_tol = 1e-9, tol = 1e-9;
  double epsilon = 0.1, range = 0, step = 1.0;
  int label_bound = 3, torus_nodes = 256, gauss_nodes = 64;
  bool relative = false;
};

int cmd_generate(const Options& o) {
  const SystemConfig cfg = load_config(read_json_file(o.config));
  const EffectiveSystem sys = effective_system(cfg);
  const WeightedComb comb =
      deformed_weighted_model_set(sys.scheme, sys.weight, sys.deformation, Box::cube(sys.scheme.phys_dim(), o.radius),
                                  PatchSelection::Lattice);
  write_points(comb, o.out);
  std::cerr << comb.size() << " atoms written to " << o.out << "\n";
  return 0;
}

int cmd_diffract(const Options& o) {
  const SystemConfig cfg = load_config(read_json_file(o.config));
  const EffectiveSystem sys = effective_system(cfg);
  QuadratureOptions q;
  q.default_torus_nodes = o.torus_nodes;
  q.default_gauss_nodes = o.gauss_nodes;
  const Spectrum s = spectrum(sys.scheme, sys.weight, sys.deformation, o.cutoff, o.label_bound, o.min_intensity, q);
  if (s.total_intensity > s.autocorr_at_zero * (1 + 1e-6) && s.autocorr_at_zero > 0) {
    std::cerr << "note: total intensity " << format_number(s.total_intensity) << " exceeds eta(0) = "
              << format_number(s.autocorr_at_zero) << " (sum over several lattice classes)\n";
  }
  emit(o.out, spectrum_csv(s));
  if (!o.json_out.empty()) write_text(o.json_out, canonical_dump(spectrum_json(s)));
  std::cerr << s.entries.size() << " peaks; " << s.completeness_note << "\n";
  return 0;
}

int cmd_fb(const Options& o) {
  const WeightedComb comb = read_points(o.points);
  const Vec xi = parse_list(o.freq, "frequency");
  if (static_cast<int>(xi.size()) != comb.dim()) throw ConfigError("frequency has wrong dimension");
  const Vec hw = parse_list(o.halfwidths, "half widths");
  std::vector<Box> windows;
  for (double h : hw) windows.push_back(Box::cube(comb.dim(), h));
  const std::vector<Complex> vals = fourier_bohr_sequence(comb, xi, windows);
  std::string out = "halfwidth,re_amp,im_amp,intensity\n";
  for (std::size_t i = 0; i < hw.size(); ++i) {
    out += format_number(hw[i]) + "," + format_number(vals[i].real()) + "," + format_number(vals[i].imag()) + "," +
           format_number(std::norm(vals[i])) + "\n";
  }
  emit(o.out, out);
  return 0;
}

int cmd_autocorr(const Options& o) {
  const WeightedComb comb = read_points(o.points);
  const Autocorrelation a = autocorrelation(comb, o.max_radius, o.bin_tol);
  std::string out;
  for (int i = 0; i < comb.dim(); ++i) out += "z_" + std::to_string(i + 1) + ",";
  out += "re_eta,im_eta\n";
  for (const auto& [z, eta] : a.coefficients) {
    for (double x : z) out += format_number(x) + ",";
    out += format_number(eta.real()) + "," + format_number(eta.imag()) + "\n";
  }
  emit(o.out, out);
  std::cerr << "normalization volume " << format_number(a.normalization_volume) << "\n";
  return 0;
}

int cmd_periods(const Options& o) {
  const WeightedComb comb = read_points(o.points);
  const auto pg = period_group(comb, o.tol);
  std::string out;
  if (!pg) {
    out = "no lattice of periods found\n";
  } else {
    out = "kind,index";
    for (int i = 0; i < comb.dim(); ++i) out += ",c_" + std::to_string(i + 1);
    out += "\n";
    for (int j = 0; j < pg->basis.cols(); ++j) {
      out += "basis," + std::to_string(j);
      for (int i = 0; i < pg->basis.rows(); ++i) out += "," + format_number(pg->basis(i, j));
      out += "\n";
    }
    for (std::size_t j = 0; j < pg->offsets.size(); ++j) {
      out += "offset," + std::to_string(j);
      for (double x : pg->offsets[j]) out += "," + format_number(x);
      out += "\n";
    }
  }
  emit(o.out, out);
  return 0;
}

int cmd_apcheck(const Options& o) {
  const SystemConfig cfg = load_config(read_json_file(o.config));
  std::optional<ApFunction> f = cfg.modulation_displacement;
  if (!f) f = physical_deformation(cfg);
  if (!f) throw PreconditionError("configuration has no trigonometric displacement on physical space");
  const double eps = o.relative ? o.epsilon * f->sup_bound() : o.epsilon;
  const PeriodReport r = almost_periods(*f, eps, o.range, o.step);
  emit(o.out, period_report_csv(r));
  std::cerr << r.periods.size() << " periods; epsilon " << format_number(eps) << "; max_gap "
            << format_number(r.max_gap) << "; relative density witness " << format_number(r.relative_density_witness)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"apdiff: model sets, modulations and their diffraction"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "write a point patch");
  gen->add_option("--config", o.config, "system JSON")->required();
  gen->add_option("--radius", o.radius, "patch half width")->required();
  gen->add_option("--out", o.out, "points CSV")->required();

  auto* dif = app.add_subcommand("diffract", "spectrum from internal-space quadrature");
  dif->add_option("--config", o.config, "system JSON")->required();
  dif->add_option("--cutoff", o.cutoff, "frequency cutoff K")->required();
  dif->add_option("--label-bound", o.label_bound, "label bound M");
  dif->add_option("--min-intensity", o.min_intensity, "intensity filter");
  dif->add_option("--out", o.out, "spectrum CSV (default stdout)");
  dif->add_option("--json", o.json_out, "spectrum JSON");
  dif->add_option("--torus-nodes", o.torus_nodes, "nodes per torus coordinate");
  dif->add_option("--gauss-nodes", o.gauss_nodes, "Gauss-Legendre nodes per Euclidean coordinate");

  auto* fb = app.add_subcommand("fb", "empirical Fourier-Bohr coefficients");
  fb->add_option("--points", o.points, "points CSV")->required();
  fb->add_option("--freq", o.freq, "frequency, comma separated")->required();
  fb->add_option("--halfwidths", o.halfwidths, "window half widths, comma separated")->required();
  fb->add_option("--out", o.out, "CSV (default stdout)");

  auto* ac = app.add_subcommand("autocorr", "autocorrelation coefficients");
  ac->add_option("--points", o.points, "points CSV")->required();
  ac->add_option("--max-radius", o.max_radius, "largest difference")->required();
  ac->add_option("--bin-tol", o.bin_tol, "pooling tolerance");
  ac->add_option("--out", o.out, "CSV (default stdout)");

  auto* per = app.add_subcommand("periods", "period lattice of a patch");
  per->add_option("--points", o.points, "points CSV")->required();
  per->add_option("--tol", o.tol, "position tolerance");
  per->add_option("--out", o.out, "CSV (default stdout)");

  auto* ap = app.add_subcommand("apcheck", "epsilon almost periods of the displacement");
  ap->add_option("--config", o.config, "system JSON")->required();
  ap->add_option("--epsilon", o.epsilon, "tolerance");
  ap->add_flag("--relative", o.relative, "epsilon relative to the sup bound");
  ap->add_option("--range", o.range, "scan end T")->required();
  ap->add_option("--step", o.step, "scan step");
  ap->add_option("--out", o.out, "CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*dif) return cmd_diffract(o);
    if (*fb) return cmd_fb(o);
    if (*ac) return cmd_autocorr(o);
    if (*per) return cmd_periods(o);
    if (*ap) return cmd_apcheck(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInputError& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const NumericalInvariantError& e) {
    std::cerr << "numerical invariant failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
