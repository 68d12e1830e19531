// Command-line front end: spectra, time evolution, PGT searches, Pythagorean
// certificates, crossover scans, localization tables, and the oracle
// validation suite. CSV/JSON output only; plotting is someone else's job.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pgt/io.hpp"
#include "pgt/oracle.hpp"
#include "pgt/pgtlab.hpp"

using namespace pgt;
using nlohmann::json;

namespace {

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

int run_spectrum(unsigned n, const std::string& j2s, bool scl, unsigned prec,
                 const std::string& out_path, const std::string& format) {
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  unsigned digits = static_cast<unsigned>(prec * 0.3) + 1;
  if (scl) {
    SCLSpectrum s = scl_spectrum(n);
    if (format == "json") {
      json levels = json::array();
      for (unsigned i = 0; i < s.offsets.size(); ++i)
        levels.push_back(json{{"index", i + 1},
                              {"j2_multiplier", s.j2_multiplier.get_str()},
                              {"offset", s.offsets[i].eval(prec).str(digits)},
                              {"offset_expr", s.offsets[i].describe()},
                              {"weight_sq", s.weights_sq[i].get_str()}});
      os << json{{"n", s.n},
                 {"deg_less", s.deg_less},
                 {"deg_greater", s.deg_greater},
                 {"levels", levels}}
                .dump(2)
         << "\n";
    } else {
      os << "index,j2_multiplier,offset,weight_sq\n";
      for (unsigned i = 0; i < s.offsets.size(); ++i)
        os << i + 1 << "," << s.j2_multiplier.get_str() << ","
           << s.offsets[i].eval(prec).str(digits) << "," << s.weights_sq[i].get_str() << "\n";
    }
    return 0;
  }
  ChainSpec spec(n, parse_rational(j2s));
  SpectralData sd = closed_form_spectrum(spec, prec);
  if (format == "json") {
    json rows = json::array();
    for (unsigned i = 0; i < sd.size(); ++i)
      rows.push_back(json{{"index", i + 1},
                          {"energy", sd.energies[i].str(digits)},
                          {"expr", sd.exprs[i].describe()},
                          {"amp_first", sd.amp_first[i].str(24)},
                          {"amp_last", sd.amp_last[i].str(24)}});
    os << json{{"n", n}, {"j2", spec.j2.get_str()}, {"eigenpairs", rows}}.dump(2) << "\n";
  } else {
    os << "index,energy,amp_first,amp_last\n";
    for (unsigned i = 0; i < sd.size(); ++i)
      os << i + 1 << "," << sd.energies[i].str(digits) << "," << sd.amp_first[i].str(24) << ","
         << sd.amp_last[i].str(24) << "\n";
  }
  return 0;
}

int run_evolve(unsigned n, const std::string& j2s, bool scl, const std::string& tmax,
               unsigned samples, unsigned digits, const std::string& out_path) {
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  TimePoint tm = io::parse_time(tmax);
  CosineSumSeries series;
  if (scl) {
    series = scl_series(n);
  } else {
    ChainSpec spec(n, parse_rational(j2s));
    series = build_series(closed_form_spectrum(spec, 192));
  }
  os << "t_pi_units,t,p\n";
  for (unsigned k = 0; k <= samples; ++k) {
    Rational frac = tm.in_pi_units() * Rational(k, samples);
    frac.canonicalize();
    if (!frac.get_den().fits_ulong_p()) throw std::runtime_error("evolve: grid too fine");
    TimePoint t(frac.get_num(), frac.get_den().get_ui());
    HighReal p = evaluate_p(series, t, digits);
    os << frac.get_str() << "," << t.decimal(96).str(16) << "," << p.str(digits) << "\n";
  }
  return 0;
}

int run_pgt_search(unsigned n, const std::string& j2s, bool scl, unsigned levels,
                   unsigned digits, const std::string& out_path,
                   const std::string& staircase_path) {
  ChainSpec spec = scl ? ChainSpec(n, Rational(1), Regime::StrongCouplingLimit)
                       : ChainSpec(n, parse_rational(j2s));
  PgtCurve curve = pgt_search(spec, levels, digits);
  json j = io::to_json(curve, digits);
  j["n"] = n;
  j["regime"] = scl ? "scl" : "finite";
  if (!scl) j["j2"] = spec.j2.get_str();
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  os << j.dump(2) << "\n";
  if (!staircase_path.empty()) {
    std::ofstream sc(staircase_path);
    if (!sc) throw std::runtime_error("cannot open " + staircase_path);
    sc << "q,pi_den,t,p,epsilon,level\n";
    for (const auto& r : curve.staircase)
      sc << r.time.q.get_str() << "," << r.time.pi_den << "," << r.time.decimal(96).str(20)
         << "," << r.p_value.str(digits) << "," << r.epsilon.str(digits) << ","
         << r.search_level << "\n";
  }
  return 0;
}

int run_periodicity(const std::string& j2s, const std::string& out_path) {
  PeriodicityReport rep = periodicity_analysis(parse_rational(j2s));
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  os << io::to_json(rep).dump(2) << "\n";
  return 0;
}

int run_fit(const std::string& input, const std::string& out_path) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  std::string line;
  std::getline(in, line);  // header
  std::vector<PgtRecord> recs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string q, den, t, p, eps;
    std::getline(ls, q, ',');
    std::getline(ls, den, ',');
    std::getline(ls, t, ',');
    std::getline(ls, p, ',');
    std::getline(ls, eps, ',');
    PgtRecord r;
    r.time = TimePoint(BigInt(q), std::stoul(den));
    r.lattice_q = r.time.q;
    r.p_value = HighReal(parse_rational(p), 128);
    r.epsilon = HighReal(parse_rational(eps), 128);
    recs.push_back(std::move(r));
  }
  auto stairs = epsilon_curve(recs);
  PowerLawFit fit = fit_power_law(stairs);
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  os << json{{"c", fit.c}, {"exponent", fit.exponent}, {"r2", fit.r2}, {"points", fit.points}}
            .dump(2)
     << "\n";
  return 0;
}

int run_crossover(unsigned n, const std::string& ts, const std::string& j2_min,
                  const std::string& j2_max, unsigned points, bool log_spaced,
                  const std::string& out_path) {
  CrossoverScan scan = crossover_scan(n, io::parse_time(ts), parse_rational(j2_min),
                                      parse_rational(j2_max), points, log_spaced);
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  os << "j2,inv_j2,p\n";
  for (const auto& pt : scan.points)
    os << pt.j2.get_str() << "," << Rational(pt.j2.get_den(), pt.j2.get_num()).get_str() << ","
       << pt.p.str(12) << "\n";
  os << "# p_infty," << scan.asymptote.str(12) << "\n";
  return 0;
}

int run_localization(unsigned n, const std::string& j2s, const std::string& out_path) {
  ChainSpec spec(n, parse_rational(j2s));
  auto h = build_single_excitation_matrix(spec);
  auto l = localization(h);
  std::ofstream f;
  std::ostream& os = open_out(f, out_path);
  os << "state";
  for (unsigned i = 1; i <= n; ++i) os << ",site" << i;
  os << "\n";
  for (unsigned a = 0; a < l.size(); ++a) {
    os << a + 1;
    for (const auto& v : l[a]) os << "," << v.str(20);
    os << "\n";
  }
  return 0;
}

int run_validate(unsigned max_n) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };

  std::vector<Rational> j2s = {Rational(1, 2), Rational(1), Rational(2), Rational(10)};
  HighReal tol = HighReal::pow2(-64, 64);
  for (unsigned n = 4; n <= max_n; n += 2) {
    for (const auto& j2 : j2s) {
      ChainSpec spec(n, j2);
      auto closed = closed_form_spectrum(spec, 128);
      auto numeric = sturm_eigenvalues(build_single_excitation_matrix(spec), 128);
      bool ok = closed.size() == numeric.size();
      for (unsigned i = 0; ok && i < numeric.size(); ++i)
        ok = (closed.energies[i] - numeric[i]).abs() < tol;
      std::ostringstream what;
      what << "closed-form vs Sturm spectrum, N=" << n << " J2=" << j2.get_str();
      check(ok, what.str());
    }
  }
  // dense oracle vs series on a few samples
  for (unsigned n : {4u, 6u, 8u}) {
    if (n > max_n) break;
    ChainSpec spec(n, Rational(3));
    auto dense = oracle::dense_from_spec(spec);
    auto sd = closed_form_spectrum(spec, 192);
    auto series = build_series(sd);
    TimePoint t(BigInt(7), 2);
    HighReal a = evaluate_p(series, t, 24);
    HighReal b = oracle::evolve_direct(dense, t.decimal(256), 24);
    std::ostringstream what;
    what << "dense oracle vs series P at N=" << n;
    check((a - b).abs() < HighReal(1e-20, 64), what.str());
  }
  check(a3_sequence(4) == std::vector<unsigned long>({1, 5, 7, 11}), "a3 formula first terms");
  check(a5_sequence(5) == std::vector<unsigned long>({1, 3, 7, 9, 11}), "a5 sieve first terms");
  check(oracle::sieve_odd_nonmultiples(3, 200) == a3_sequence(200), "a3 formula vs sieve");
  check(oracle::sieve_odd_nonmultiples(5, 200) == a5_sequence(200), "a5 sieve vs oracle sieve");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staggered Heisenberg chains: exact spectra and pretty good transfer"};
  app.require_subcommand(1);

  std::string j2 = "1", out, format = "csv", tmax = "8pi", staircase, input, tpoint = "12pi";
  std::string j2_min = "10", j2_max = "10000";
  unsigned n = 4, prec = 128, samples = 64, digits = 12, levels = 8, points = 40, max_n = 16;
  bool scl = false, log_spaced = true;

  auto* sp = app.add_subcommand("spectrum", "eigenvalue/amplitude table");
  sp->add_option("--n", n, "chain length")->required();
  sp->add_option("--j2", j2, "coupling J2 (rational like 4/3 or decimal)");
  sp->add_flag("--scl", scl, "strong-coupling first-order data");
  sp->add_option("--prec", prec, "working precision bits");
  sp->add_option("--out", out, "output path (default stdout)");
  sp->add_option("--format", format, "csv or json");

  auto* ev = app.add_subcommand("evolve", "(t, P) table on a uniform grid");
  ev->add_option("--n", n)->required();
  ev->add_option("--j2", j2);
  ev->add_flag("--scl", scl);
  ev->add_option("--t-max", tmax, "end time, e.g. 8pi or 3pi/2");
  ev->add_option("--samples", samples);
  ev->add_option("--digits", digits);
  ev->add_option("--out", out);

  auto* ps = app.add_subcommand("pgt-search", "PGT time search");
  ps->add_option("--n", n)->required();
  ps->add_option("--j2", j2);
  ps->add_flag("--scl", scl);
  ps->add_option("--levels", levels);
  ps->add_option("--digits", digits);
  ps->add_option("--out", out);
  ps->add_option("--staircase", staircase, "also write the staircase CSV here");

  auto* pd = app.add_subcommand("periodicity", "Pythagorean periodicity certificate");
  pd->add_option("--j2", j2)->required();
  pd->add_option("--out", out);

  auto* ft = app.add_subcommand("fit", "power-law fit of a staircase CSV");
  ft->add_option("--input", input)->required();
  ft->add_option("--out", out);

  auto* cr = app.add_subcommand("crossover", "P vs J2 at fixed time");
  cr->add_option("--n", n)->required();
  cr->add_option("--t", tpoint);
  cr->add_option("--j2-min", j2_min);
  cr->add_option("--j2-max", j2_max);
  cr->add_option("--points", points);
  cr->add_flag("--log,!--linear", log_spaced, "log-spaced grid");
  cr->add_option("--out", out);

  auto* lc = app.add_subcommand("localization", "per-state per-site probabilities");
  lc->add_option("--n", n)->required();
  lc->add_option("--j2", j2);
  lc->add_option("--out", out);

  auto* vd = app.add_subcommand("validate", "oracle-equivalence suite");
  vd->add_option("--max-n", max_n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sp->parsed()) return run_spectrum(n, j2, scl, prec, out, format);
    if (ev->parsed()) return run_evolve(n, j2, scl, tmax, samples, digits, out);
    if (ps->parsed()) return run_pgt_search(n, j2, scl, levels, digits, out, staircase);
    if (pd->parsed()) return run_periodicity(j2, out);
    if (ft->parsed()) return run_fit(input, out);
    if (cr->parsed()) return run_crossover(n, tpoint, j2_min, j2_max, points, log_spaced, out);
    if (lc->parsed()) return run_localization(n, j2, out);
    if (vd->parsed()) return run_validate(max_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
