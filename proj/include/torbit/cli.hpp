#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "io.hpp"
#include "modular2.hpp"
#include "parallel.hpp"
#include "times23.hpp"

namespace torbit::cli {

struct RunConfig {
  std::string command;
  int degree = 2;
  long disc_bound = 100;
  double delta = 0.05;
  long delta_max = 100000;
  int grid = 20;
  int grid_decades = 4;
  double window_r = 4.0;
  long q_min = 5, q_max = 1000;
  long count = 0;
  bool primes_only = false;
  double min_order_exponent = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  int precision_bits = 80;
  long a_min = -1, a_max = 30;
  std::string poly;
  long disc = 0;
  long class_index = 0;
  std::string theta;
};

namespace detail {

inline std::vector<long> parse_int_list(const std::string& s) {
  std::vector<long> out;
  std::string item;
  std::stringstream in(s);
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "not an integer list: " + s);
    }
    require(used == item.size(), ErrorKind::invalid_argument, "not an integer list: " + s);
    out.push_back(v);
  }
  return out;
}

/// Output stream for --out, or the supplied stream when it is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    require(file_->good(), ErrorKind::invalid_argument, "cannot open output file " + path);
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline Json common_config(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["precision_bits"] = c.precision_bits;
  return j;
}

inline TotallyRealField field_from_disc(int degree, long disc, int bits) {
  require(disc >= 5, ErrorKind::invalid_argument, "field discriminant must be >= 5");
  for (auto& k : enumerate_totally_real_fields(degree, Int(disc), bits))
    if (k.disc() == disc) return k;
  fail(ErrorKind::invalid_argument, "no totally real field of that degree and discriminant");
}

}  // namespace detail

inline int cmd_fields(const RunConfig& c, std::ostream& out) {
  auto fields = enumerate_totally_real_fields(c.degree, Int(c.disc_bound), c.precision_bits);
  std::vector<UnitGroup> units(fields.size());
  parallel_for(fields.size(), [&](std::size_t i) { units[i] = unit_group(Order::maximal(fields[i])); });
  Json cfg = detail::common_config(c);
  cfg["degree"] = c.degree;
  cfg["disc_bound"] = c.disc_bound;
  CsvWriter w(out, {"field-census", cfg}, {"disc", "min_poly", "classical_regulator", "covolume_regulator"});
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& f = fields[i].min_poly();
    w.cell(fields[i].disc()).cell(poly_string(IntPoly(f.begin(), f.end() - 1)));
    w.cell(units[i].classical_regulator).cell(units[i].covolume_regulator);
    w.end_row();
  }
  return 0;
}

inline int cmd_minkowski_scan(const RunConfig& c, std::ostream& out) {
  require(c.delta >= 0, ErrorKind::invalid_argument, "delta must be >= 0");
  // Fields with disc < X.
  auto fields = c.disc_bound > 1 ? enumerate_totally_real_fields(c.degree, Int(c.disc_bound - 1), c.precision_bits)
                                 : std::vector<TotallyRealField>{};
  std::vector<MinkowskiStat> stats(fields.size());
  std::vector<double> regs(fields.size());
  parallel_for(fields.size(), [&](std::size_t i) {
    const Order o = Order::maximal(fields[i]);
    const UnitGroup u = unit_group(o);
    regs[i] = u.classical_regulator;
    stats[i] = field_minkowski_stat(o, c.delta, u);
  });
  Json cfg = detail::common_config(c);
  cfg["degree"] = c.degree;
  cfg["disc_bound"] = c.disc_bound;
  cfg["delta"] = c.delta;
  const RunHeader header{"minkowski-dynamics", cfg};
  CsvWriter w(out, header, {"disc", "n_classes", "m_K", "m_K/sqrt_disc", "regulator", "h_delta"});
  double weighted = 0;
  std::size_t bad_fields = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& s = stats[i];
    w.cell(fields[i].disc()).cell(s.classes).cell(s.m_k);
    w.cell(s.m_k.get_d() / std::sqrt(fields[i].disc().get_d())).cell(regs[i]).cell(s.bad_classes);
    w.end_row();
    weighted += regs[i] * static_cast<double>(s.bad_classes);
    if (s.bad_classes > 0) ++bad_fields;
  }
  Json summary = header.json();
  summary["fields"] = fields.size();
  summary["fields_with_bad_classes"] = bad_fields;
  summary["sum_regulator_times_h_delta"] = real_json(weighted);
  w.comment("summary " + summary.dump());
  if (!c.out.empty()) {
    std::ofstream js(c.out + ".summary.json", std::ios::binary);
    require(js.good(), ErrorKind::invalid_argument, "cannot open summary file");
    js << summary.dump(2) << "\n";
  }
  return 0;
}

inline int cmd_orbit(const RunConfig& c, std::ostream& out) {
  TotallyRealField k;
  if (!c.poly.empty()) {
    IntPoly f;
    for (long v : detail::parse_int_list(c.poly)) f.push_back(Int(v));
    k = TotallyRealField::from_polynomial(f, c.precision_bits);
  } else {
    k = detail::field_from_disc(c.degree, c.disc, c.precision_bits);
  }
  const Order o = Order::maximal(k);
  const UnitGroup u = unit_group(o);
  auto classes = class_representatives(o, u);
  require(c.class_index >= 0 && static_cast<std::size_t>(c.class_index) < classes.size(),
          ErrorKind::invalid_argument, "class index out of range");
  std::vector<int> theta;
  if (!c.theta.empty())
    for (long v : detail::parse_int_list(c.theta)) theta.push_back(static_cast<int>(v));
  // The orbit of the class [J] is the one of the lattice J^{-1}.
  auto orbit = orbit_from_triple(k, classes[c.class_index].representative.inverse(), theta);
  Json cfg = detail::common_config(c);
  cfg["poly"] = c.poly;
  cfg["disc"] = c.disc;
  cfg["degree"] = k.degree();
  cfg["class_index"] = c.class_index;
  cfg["theta"] = c.theta;
  Json doc;
  doc["meta"] = RunHeader{"orbit-record", cfg}.json();
  doc["orbit"] = orbit_json(orbit, static_cast<std::size_t>(c.class_index));
  out << doc.dump(2) << "\n";
  return 0;
}

inline int cmd_abundance(const RunConfig& c, std::ostream& out) {
  auto rows = abundance_scan(c.delta, c.delta_max, c.grid_decades);
  Json cfg = detail::common_config(c);
  cfg["delta"] = c.delta;
  cfg["delta_max"] = c.delta_max;
  cfg["grid_decades"] = c.grid_decades;
  CsvWriter w(out, {"rank-one-abundance", cfg},
              {"Delta", "delta", "n_orbits_inside", "total_length_inside", "total_length_all"});
  for (auto& r : rows) {
    w.cell(r.big_delta).cell(r.delta).cell(r.n_orbits_inside).cell(r.total_length_inside).cell(r.total_length_all);
    w.end_row();
  }
  return 0;
}

struct EscapeRow {
  long a = 0;
  Int disc;
  double regulator = 0, c_implied = 0, escaped = 0;
};

inline std::vector<EscapeRow> escape_rows(long a_min, long a_max, double delta, int grid, int bits) {
  require(a_min >= -1 && a_min <= a_max, ErrorKind::invalid_argument, "need -1 <= a_min <= a_max");
  std::vector<EscapeRow> rows(static_cast<std::size_t>(a_max - a_min + 1));
  parallel_for(rows.size(), [&](std::size_t i) {
    const long a = a_min + static_cast<long>(i);
    const auto k = simplest_cubic(a, bits);
    const auto orbit = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
    const double l = std::log(k.disc().get_d());
    rows[i] = {a, k.disc(), orbit.classical_regulator, orbit.classical_regulator / (l * l),
               escaped_mass_fraction(orbit, delta, grid)};
  });
  return rows;
}

inline int cmd_escape(const RunConfig& c, std::ostream& out) {
  auto rows = escape_rows(c.a_min, c.a_max, c.delta, c.grid, c.precision_bits);
  Json cfg = detail::common_config(c);
  cfg["a_min"] = c.a_min;
  cfg["a_max"] = c.a_max;
  cfg["delta"] = c.delta;
  cfg["grid"] = c.grid;
  CsvWriter w(out, {"escape-of-mass", cfg}, {"a", "disc", "classical_regulator", "C_implied", "escaped_fraction"});
  for (auto& r : rows) {
    w.cell(r.a).cell(r.disc).cell(r.regulator).cell(r.c_implied).cell(r.escaped);
    w.end_row();
  }
  return 0;
}

/// Fundamental discriminants closest to `count` log-spaced targets in
/// [5, bound], without repetition.
inline std::vector<long> log_spaced_fundamental_discs(long bound, long count) {
  std::vector<long> all;
  for (auto& k : enumerate_totally_real_fields(2, Int(bound), 64)) all.push_back(k.disc().get_si());
  std::vector<long> out;
  if (all.empty() || count <= 0) return out;
  for (long i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const double target = std::exp(std::log(5.0) + t * (std::log(static_cast<double>(bound)) - std::log(5.0)));
    long best = all.front();
    for (long d : all)
      if (std::fabs(std::log(static_cast<double>(d) / target)) < std::fabs(std::log(static_cast<double>(best) / target)))
        best = d;
    if (std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
  }
  return out;
}

/// Principal orbits of the maximal orders of the given fundamental discriminants.
inline std::vector<TorusOrbit> principal_quadratic_orbits(const std::vector<long>& discs, int bits) {
  std::vector<TorusOrbit> orbits(discs.size());
  parallel_for(discs.size(), [&](std::size_t i) {
    auto k = detail::field_from_disc(2, discs[i], bits);
    orbits[i] = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
  });
  return orbits;
}

inline int cmd_separation(const RunConfig& c, std::ostream& out) {
  require(c.window_r >= 1, ErrorKind::invalid_argument, "window R must be >= 1");
  const long count = c.count > 0 ? c.count : 12;
  auto orbits = principal_quadratic_orbits(log_spaced_fundamental_discs(c.disc_bound, count), c.precision_bits);
  Json cfg = detail::common_config(c);
  cfg["disc_bound"] = c.disc_bound;
  cfg["count"] = count;
  cfg["window_r"] = c.window_r;
  cfg["grid"] = c.grid;
  CsvWriter w(out, {"orbit-separation", cfg}, {"D1", "D2", "window_R", "grid", "min_dist", "scaled_stat"});
  if (orbits.size() < 2) return 0;
  auto res = min_orbit_separation(orbits, c.window_r, c.grid);
  for (auto& p : res.pairs) {
    w.cell(orbits[p.first].disc_order_route).cell(orbits[p.second].disc_order_route);
    w.cell(c.window_r).cell(c.grid).cell(p.min_dist).cell(p.scaled_stat());
    w.end_row();
  }
  return 0;
}

struct Times23Row {
  std::int64_t q = 0, group_order = 0;
  double ratio = 0, h1 = 0, floor = 0, discrepancy = 0;
  std::optional<double> exp_sum;
};

inline Times23Row times23_row(std::int64_t q) {
  auto m = uniform_measure(orbit_closure_23(q, 1));
  auto e = entropy_lower_bound_check(m);
  Times23Row r{q, m.support.group_order, 0, e.h1, e.floor, max_dyadic_discrepancy(m), std::nullopt};
  r.ratio = q > 1 ? std::log(static_cast<double>(r.group_order)) / std::log(static_cast<double>(q)) : 0.0;
  if (q >= 5 && is_prime(q)) r.exp_sum = exp_sum_profile(q).max_normalized_sum;
  return r;
}

/// Moduli of a sweep: every q in range coprime to 6 (primes only on request),
/// or `count` of them drawn with the seeded generator.
inline std::vector<std::int64_t> times23_moduli(const RunConfig& c) {
  require(c.q_min >= 1 && c.q_min <= c.q_max, ErrorKind::invalid_argument, "need 1 <= q_min <= q_max");
  require(c.q_max <= 10000000, ErrorKind::invalid_argument, "q_max must be <= 10^7");
  auto admissible = [&](std::int64_t q) {
    if (std::gcd(q, std::int64_t{6}) != 1) return false;
    if (c.primes_only && !(q >= 5 && is_prime(q))) return false;
    if (c.min_order_exponent > 0 &&
        static_cast<double>(group_order_23(q)) < std::pow(static_cast<double>(q), c.min_order_exponent))
      return false;
    return true;
  };
  std::vector<std::int64_t> qs;
  if (c.count <= 0) {
    for (std::int64_t q = c.q_min; q <= c.q_max; ++q)
      if (admissible(q)) qs.push_back(q);
    return qs;
  }
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::int64_t> pick(c.q_min, c.q_max);
  for (long tries = 0; static_cast<long>(qs.size()) < c.count; ++tries) {
    require(tries < 1000 * c.count + 100000, ErrorKind::search_exhausted, "too few admissible moduli in range");
    const std::int64_t q = pick(rng);
    if (admissible(q)) qs.push_back(q);
  }
  return qs;
}

inline int cmd_times23(const RunConfig& c, std::ostream& out) {
  auto qs = times23_moduli(c);
  std::vector<Times23Row> rows(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) { rows[i] = times23_row(qs[i]); });
  Json cfg = detail::common_config(c);
  cfg["q_min"] = c.q_min;
  cfg["q_max"] = c.q_max;
  cfg["count"] = c.count;
  cfg["primes_only"] = c.primes_only;
  cfg["min_order_exponent"] = c.min_order_exponent;
  CsvWriter w(out, {"times-two-times-three", cfg},
              {"q", "group_order", "ratio_log_order_log_q", "H1", "entropy_floor", "max_discrepancy",
               "max_norm_exp_sum"});
  for (auto& r : rows) {
    w.cell(r.q).cell(r.group_order).cell(r.ratio).cell(r.h1).cell(r.floor).cell(r.discrepancy);
    w.cell(r.exp_sum ? format_real(*r.exp_sum) : std::string());
    w.end_row();
  }
  return 0;
}

/// Parses argv and runs one subcommand. Returns 0 on success, 2 for invalid
/// flags or arguments, 1 for other failures.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Torus orbits on spaces of lattices: experiments and reports", "torbit"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--out", c.out, "output file (default: standard output)");
    s->add_option("--precision-bits", c.precision_bits, "certified bits of the field roots")
        ->check(CLI::Range(53, 4096));
  };
  auto degree = [&](CLI::App* s) {
    s->add_option("--degree", c.degree, "field degree")->check(CLI::IsMember({2, 3}));
  };

  auto* fields = app.add_subcommand("fields", "totally real fields with regulators");
  degree(fields);
  fields->add_option("--disc-bound", c.disc_bound, "largest discriminant")->check(CLI::Range(1L, 100000000L));
  common(fields);

  auto* mink = app.add_subcommand("minkowski-scan", "Minkowski class statistics for disc < X");
  degree(mink);
  mink->add_option("--disc-bound", c.disc_bound, "X: fields with disc < X")->check(CLI::Range(1L, 100000000L));
  mink->add_option("--delta", c.delta, "delta")->check(CLI::NonNegativeNumber);
  common(mink);

  auto* orbit = app.add_subcommand("orbit", "orbit record of an ideal class");
  degree(orbit);
  auto* poly_opt = orbit->add_option("--poly", c.poly, "coefficients c0,c1,...,1 of a monic polynomial");
  orbit->add_option("--disc", c.disc, "field discriminant")->excludes(poly_opt);
  orbit->add_option("--class-index", c.class_index, "index into the class list");
  orbit->add_option("--theta", c.theta, "permutation of the embeddings, e.g. 1,0");
  common(orbit);

  auto* abund = app.add_subcommand("abundance", "lengths of geodesics staying in a compact set");
  abund->add_option("--delta", c.delta, "delta")->check(CLI::PositiveNumber);
  abund->add_option("--delta-max", c.delta_max, "largest discriminant")->check(CLI::Range(5L, 1000000L));
  abund->add_option("--grid-decades", c.grid_decades, "grid points per decade")->check(CLI::Range(1, 100));
  common(abund);

  auto* esc = app.add_subcommand("escape", "escape of mass along the simplest cubic fields");
  esc->add_option("--a-min", c.a_min, "first parameter")->check(CLI::Range(-1L, 100000L));
  esc->add_option("--a-max", c.a_max, "last parameter")->check(CLI::Range(-1L, 100000L));
  esc->add_option("--delta", c.delta, "cusp threshold")->check(CLI::Range(1e-12, 1.0));
  esc->add_option("--grid", c.grid, "samples per side")->check(CLI::Range(10, 10000));
  common(esc);

  auto* sep = app.add_subcommand("separation", "pairwise distances between quadratic orbits");
  sep->add_option("--disc-bound", c.disc_bound, "largest discriminant")->check(CLI::Range(5L, 1000000L));
  sep->add_option("--window-r", c.window_r, "window radius R")->check(CLI::Range(1.0, 1e6));
  sep->add_option("--grid", c.grid, "samples per unit of regulator")->check(CLI::Range(1, 10000));
  sep->add_option("--count", c.count, "number of log-spaced discriminants");
  common(sep);

  auto* t23 = app.add_subcommand("times23", "x2 x3 orbit closures modulo q");
  t23->add_option("--q-min", c.q_min, "smallest modulus")->check(CLI::Range(1L, 10000000L));
  t23->add_option("--q-max", c.q_max, "largest modulus")->check(CLI::Range(1L, 10000000L));
  t23->add_option("--count", c.count, "random sample size (0: every modulus)");
  t23->add_flag("--primes-only", c.primes_only, "prime moduli only");
  t23->add_option("--min-order-exponent", c.min_order_exponent, "keep q with |<2,3>| >= q^x");
  common(t23);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "torbit: " << e.what() << "\n";
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  try {
    detail::Sink sink(c.out, out);
    std::ostream& o = sink.get();
    if (c.command == "fields") return cmd_fields(c, o);
    if (c.command == "minkowski-scan") return cmd_minkowski_scan(c, o);
    if (c.command == "orbit") return cmd_orbit(c, o);
    if (c.command == "abundance") return cmd_abundance(c, o);
    if (c.command == "escape") return cmd_escape(c, o);
    if (c.command == "separation") return cmd_separation(c, o);
    return cmd_times23(c, o);
  } catch (const Error& e) {
    err << "torbit: " << e.what() << "\n";
    const bool usage = e.kind() == ErrorKind::invalid_argument || e.kind() == ErrorKind::degree_unsupported ||
                       e.kind() == ErrorKind::reducible_input || e.kind() == ErrorKind::invalid_modulus;
    return usage ? 2 : 1;
  }
}

}  // namespace torbit::cli
