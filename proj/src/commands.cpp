#include "declab/commands.hpp"

#include <cmath>
#include <sstream>

#include "declab/errors.hpp"

namespace declab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  if (s.find('/') != std::string::npos || s.find('^') != std::string::npos) return Rational::parse(s).to_double();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("malformed number '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("malformed number '" + s + "'");
  return v;
}

std::string str(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

double real(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (v.is_number()) return v.get<double>();
  return parse_real(v.get<std::string>());
}

std::int64_t integer(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  const double d = v.is_number() ? v.get<double>() : parse_real(v.get<std::string>());
  if (d != std::floor(d)) throw InvalidArgument(std::string(key) + " must be an integer");
  return static_cast<std::int64_t>(d);
}

Rational rational(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw InvalidArgument(std::string(key) + " must be a rational such as 1/16");
  return Rational::parse(v.get<std::string>());
}

OutputFormat format_of(const json& cfg) { return output_format_from_string(str(cfg, "format")); }

json hashed(const json& cfg) {
  json c = cfg;
  c.erase("out");
  c.erase("config");
  return c;
}

std::string json_document(const json& cfg, const char* key, const json& payload) {
  json doc{{"provenance", provenance(hashed(cfg))}, {key, payload}};
  return doc.dump(2) + "\n";
}

std::string csv_header_comment(const json& cfg) {
  const json pv = provenance(hashed(cfg));
  return "# declab " + pv["version"].get<std::string>() + " config " + pv["config_hash"].get<std::string>() + "\n";
}

QuadratureOptions quadrature_of(const json& cfg) {
  QuadratureOptions q;
  if (cfg.contains("quadrature_order")) q.order = static_cast<int>(integer(cfg, "quadrature_order"));
  if (cfg.contains("quadrature_tolerance")) q.tolerance = real(cfg, "quadrature_tolerance");
  if (cfg.contains("quadrature_doublings")) q.max_doublings = static_cast<int>(integer(cfg, "quadrature_doublings"));
  return q;
}

WeightKind weight_of(const json& cfg) {
  WeightKind w;
  w.variant = weight_variant_from_string(str(cfg, "weight"));
  w.exponent = real(cfg, "exponent");
  return w;
}

std::string report_csv(const json& cfg, const std::vector<RatioReport>& reports) {
  std::string out = csv_header_comment(cfg) + "kind,delta,p,family,lhs,rhs,ratio,envelope,exceeded\n";
  for (const auto& r : reports) {
    const double env = r.envelopes.empty() ? 0.0 : r.envelopes.front().value;
    const bool exc = !r.envelopes.empty() && r.envelopes.front().exceeded;
    out += r.kind + "," + r.delta + "," + format_double(r.p) + ",\"" + r.label + "\"," + format_double(r.lhs) + "," +
           format_double(r.rhs) + "," + format_double(r.ratio) + "," + format_double(env) + "," + (exc ? "1" : "0") +
           "\n";
  }
  return out;
}

std::string report_plot(const std::vector<RatioReport>& reports) {
  std::string out = "# index ratio\n";
  for (std::size_t i = 0; i < reports.size(); ++i) out += std::to_string(i) + " " + format_double(reports[i].ratio) + "\n";
  return out;
}

CommandResult render_reports(const json& cfg, const std::vector<RatioReport>& reports) {
  switch (format_of(cfg)) {
    case OutputFormat::csv: return {report_csv(cfg, reports)};
    case OutputFormat::plot: return {report_plot(reports)};
    case OutputFormat::json: break;
  }
  return {json_document(cfg, "reports", reports)};
}

std::vector<DensityFunction> family_of(const json& cfg, const Rational& scale) {
  return parse_family(str(cfg, "family"), scale, static_cast<std::uint64_t>(integer(cfg, "seed")));
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "plot-data" || s == "plot") return OutputFormat::plot;
  throw InvalidArgument("unknown format '" + s + "' (json, csv, plot-data)");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bounds", "experiment", "bilinear", "ball-inflation",
                                              "circle-points", "s6", "expsum", "ladder"};
  return names;
}

json default_config(const std::string& command) {
  json c{{"format", "json"}};
  if (command == "bounds") {
    c.update({{"p", "4.1:5.9:0.2"}, {"delta", "2^-8,2^-16,2^-32,2^-64"}, {"C", 1.0}});
  } else if (command == "experiment") {
    c.update({{"delta", "1/16"}, {"p", "5"}, {"family", "random:32"}, {"seed", 7}, {"grid_spacing", 0.25},
              {"curve", "parabola"}, {"weight", "radial_w"}, {"exponent", 100.0},
              {"quadrature_tolerance", 1e-8}, {"quadrature_doublings", 20}});
  } else if (command == "bilinear") {
    c.update({{"delta", "1/16"}, {"nu", "1/4"}, {"b", 1}, {"I", "0:1/4"}, {"Iprime", "1/2:3/4"}, {"p", 5.0},
              {"family", "const"}, {"seed", 7}, {"grid_spacing", 0.25}, {"weight", "radial_w"}, {"exponent", 100.0},
              {"quadrature_tolerance", 1e-8}, {"quadrature_doublings", 20}});
  } else if (command == "ball-inflation") {
    c.update({{"nu", "1/8"}, {"b", 1}, {"I1", "0:1/8"}, {"I2", "1/2:5/8"}, {"p", 5.0}, {"center", "0,0"},
              {"family", "random:4"}, {"seed", 7}, {"grid_spacing", 0.25}, {"weight", "product_w_tilde"},
              {"exponent", 100.0},
              {"quadrature_tolerance", 1e-8}, {"quadrature_doublings", 20}});
  } else if (command == "circle-points") {
    c.update({{"R", "25"}});
  } else if (command == "s6") {
    c.update({{"R", "1105"}, {"method", "hash"}});
  } else if (command == "expsum") {
    c.update({{"R", "25"}, {"p", "2,4,6"}, {"mode", "period"}, {"side", 8.0}, {"grid_spacing", 0.25}});
  } else if (command == "ladder") {
    c.update({{"delta", "2^-200"}, {"K", 128}, {"p", 5.0}, {"C", 1.0}});
  } else {
    throw InvalidArgument("unknown command '" + command + "'");
  }
  return c;
}

json merge_config(const std::string& command, const json& file, const json& flags) {
  json c = default_config(command);
  for (const json* layer : {&file, &flags}) {
    if (layer->is_null()) continue;
    if (!layer->is_object()) throw InvalidArgument("config must be a JSON object");
    for (auto it = layer->begin(); it != layer->end(); ++it) c[it.key()] = it.value();
  }
  return c;
}

std::vector<double> parse_real_list(const json& v) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.is_number() ? e.get<double>() : parse_real(e.get<std::string>()));
    return out;
  }
  const std::string s = v.get<std::string>();
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InvalidArgument("range must be lo:hi:step, got '" + s + "'");
    const double lo = parse_real(parts[0]), hi = parse_real(parts[1]), step = parse_real(parts[2]);
    if (!(step > 0) || hi < lo) throw InvalidArgument("empty or malformed range '" + s + "'");
    std::vector<double> out;
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    if (n > 1000000) throw ResourceGuard("range too long");
    for (std::int64_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part));
  return out;
}

std::vector<std::int64_t> parse_integer_list(const json& v) {
  if (v.is_number_integer()) return {v.get<std::int64_t>()};
  if (v.is_array()) return v.get<std::vector<std::int64_t>>();
  std::vector<std::int64_t> out;
  for (const auto& part : split(v.get<std::string>(), ',')) {
    if (auto dots = part.find(".."); dots != std::string::npos) {
      const auto lo = static_cast<std::int64_t>(parse_real(part.substr(0, dots)));
      const auto hi = static_cast<std::int64_t>(parse_real(part.substr(dots + 2)));
      if (hi < lo) throw InvalidArgument("empty integer range '" + part + "'");
      if (hi - lo > 10000000) throw ResourceGuard("integer range too long");
      for (std::int64_t r = lo; r <= hi; ++r) out.push_back(r);
    } else {
      const double d = parse_real(part);
      if (d != std::floor(d)) throw InvalidArgument("'" + part + "' is not an integer");
      out.push_back(static_cast<std::int64_t>(d));
    }
  }
  return out;
}

Scale parse_scale(const std::string& s) {
  if (auto caret = s.find('^'); caret != std::string::npos) {
    const double base = parse_real(s.substr(0, caret)), e = parse_real(s.substr(caret + 1));
    if (!(base > 1) || !(e < 0)) throw InvalidArgument("scale '" + s + "' must have the form b^-e with b > 1");
    return Scale::from_log_inv(-e * std::log(base));
  }
  return Scale::from_delta(parse_real(s));
}

std::vector<DensityFunction> parse_family(const std::string& spec, const Rational& delta, std::uint64_t seed) {
  std::vector<DensityFunction> fam;
  std::uint64_t next = seed;
  for (const auto& item : split(spec, ',')) {
    if (item == "const") {
      fam.push_back(DensityFunction::constant(1.0));
    } else if (item == "zero") {
      fam.push_back(DensityFunction::zero());
    } else if (item == "atoms") {
      std::vector<std::pair<double, double>> atoms;
      for (const auto& J : Interval::unit().partition(delta)) atoms.emplace_back(J.center().to_double(), delta.to_double());
      fam.push_back(DensityFunction::atom_sum(atoms));
    } else if (item.rfind("random:", 0) == 0) {
      const auto draws = static_cast<int>(parse_real(item.substr(7)));
      if (draws < 1) throw InvalidArgument("random family needs at least one draw");
      for (const auto& g : random_phase_family(next, draws, delta)) fam.push_back(g);
      next += static_cast<std::uint64_t>(draws);
    } else {
      throw InvalidArgument("unknown family member '" + item + "' (const, zero, atoms, random:K)");
    }
  }
  if (fam.empty()) throw InvalidArgument("empty family");
  return fam;
}

CurveSpec parse_curve(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "parabola") return CurveSpec::parabola(arg.empty() ? 1.0 : parse_real(arg));
  if (name == "circle") return CurveSpec::circle_arc(Rational::parse(arg.empty() ? "1/2" : arg));
  if (name == "scaled-circle") return CurveSpec::scaled_circle(Rational::parse(arg.empty() ? "1/128" : arg));
  throw InvalidArgument("unknown curve '" + spec + "' (parabola[:a], circle:tau, scaled-circle:tau0)");
}

CommandResult run_bounds_table(const json& cfg) {
  const auto ps = parse_real_list(cfg.at("p"));
  const auto deltas = split(str(cfg, "delta"), ',');
  if (ps.empty() || deltas.empty()) throw InvalidArgument("bounds table needs nonempty p and delta grids");
  const double C = real(cfg, "C");
  json rows = json::array();
  std::string csv = csv_header_comment(cfg) + "p,delta,exponent,log_bound,sigma_p,alpha,N_star\n";
  std::string plot;
  for (double p : ps) {
    plot += "# p=" + format_double(p) + "\n# log2(1/delta) log_bound\n";
    for (const auto& d : deltas) {
      const Scale s = parse_scale(d);
      const ExponentProfile e = exponent_profile(p);
      const double lb = theorem_bound_log(s, p, C);
      const DepthChoice dc = best_bound_over_depth(s, p, C);
      rows.push_back({{"p", p},
                      {"delta", d},
                      {"log_inv_delta", s.log_inv},
                      {"exponent", e.theorem_exponent},
                      {"sigma_p", e.sigma_p},
                      {"alpha", e.alpha},
                      {"log_bound", lb},
                      {"N_star", dc.N_star},
                      {"schedule_N", dc.schedule_N}});
      csv += format_double(p) + "," + d + "," + format_double(e.theorem_exponent) + "," + format_double(lb) + "," +
             format_double(e.sigma_p) + "," + format_double(e.alpha) + "," + std::to_string(dc.N_star) + "\n";
      plot += format_double(s.log2_inv()) + " " + format_double(lb) + "\n";
    }
    plot += "\n\n";
  }
  switch (format_of(cfg)) {
    case OutputFormat::csv: return {csv};
    case OutputFormat::plot: return {plot};
    case OutputFormat::json: break;
  }
  return {json_document(cfg, "rows", rows)};
}

CommandResult run_experiment(const json& cfg) {
  ExperimentSpec spec;
  spec.delta = rational(cfg, "delta");
  const auto ps = parse_real_list(cfg.at("p"));
  if (ps.empty()) throw InvalidArgument("no p values");
  spec.p = ps.front();
  spec.curve = parse_curve(str(cfg, "curve"));
  spec.family = family_of(cfg, spec.delta);
  spec.spacing = real(cfg, "grid_spacing");
  spec.weight = weight_of(cfg);
  spec.quadrature = quadrature_of(cfg);
  spec.validate();
  std::vector<RatioReport> flat;
  for (auto& row : decoupling_ratios(spec, ps))
    for (auto& r : row) flat.push_back(std::move(r));
  return render_reports(cfg, flat);
}

CommandResult run_bilinear(const json& cfg) {
  BilinearSpec spec;
  spec.delta = rational(cfg, "delta");
  spec.nu = rational(cfg, "nu");
  spec.b = static_cast<int>(integer(cfg, "b"));
  spec.I = Interval::parse(str(cfg, "I"));
  spec.Iprime = Interval::parse(str(cfg, "Iprime"));
  spec.p = real(cfg, "p");
  spec.spacing = real(cfg, "grid_spacing");
  spec.weight = weight_of(cfg);
  spec.quadrature = quadrature_of(cfg);
  spec.validate();
  std::vector<RatioReport> reports;
  for (const auto& g : family_of(cfg, spec.delta)) reports.push_back(bilinear_ratio(spec, g));
  return render_reports(cfg, reports);
}

CommandResult run_ball_inflation(const json& cfg) {
  const Rational nu = rational(cfg, "nu");
  const int b = static_cast<int>(integer(cfg, "b"));
  const auto c = parse_real_list(cfg.at("center"));
  if (c.size() != 2) throw InvalidArgument("center must be x,y");
  const double side = std::pow(nu.inverse().to_double(), 2 * b);
  BallInflationOptions opts;
  opts.spacing = real(cfg, "grid_spacing");
  opts.weight = weight_of(cfg);
  opts.quadrature = quadrature_of(cfg);
  const Interval I1 = Interval::parse(str(cfg, "I1")), I2 = Interval::parse(str(cfg, "I2"));
  const double p = real(cfg, "p");
  std::vector<RatioReport> reports;
  for (const auto& g : family_of(cfg, nu.pow(b)))
    reports.push_back(ball_inflation_ratio(b, nu, p, I1, I2, SquareRegion(Point(c[0], c[1]), side), g, opts));
  return render_reports(cfg, reports);
}

CommandResult run_circle_points(const json& cfg) {
  const auto Rs = parse_integer_list(cfg.at("R"));
  if (Rs.empty()) throw InvalidArgument("no R values");
  json circles = json::array();
  std::string csv = csv_header_comment(cfg) + "R,N,r2_formula,normalized_separation\n";
  std::string plot = "# R N\n";
  for (std::int64_t R : Rs) {
    const LatticeCircle lc = enumerate_circle_points(R);
    const double sep = lc.N() >= 2 ? normalized_separation(lc) : 0.0;
    json j = lc;
    j["N"] = lc.N();
    j["normalized_separation"] = sep;
    circles.push_back(j);
    csv += std::to_string(R) + "," + std::to_string(lc.N()) + "," + std::to_string(r2_divisor_count(R)) + "," +
           format_double(sep) + "\n";
    plot += std::to_string(R) + " " + std::to_string(lc.N()) + "\n";
  }
  switch (format_of(cfg)) {
    case OutputFormat::csv: return {csv};
    case OutputFormat::plot: return {plot};
    case OutputFormat::json: break;
  }
  return {json_document(cfg, "circles", circles)};
}

CommandResult run_s6(const json& cfg) {
  const auto Rs = parse_integer_list(cfg.at("R"));
  if (Rs.empty()) throw InvalidArgument("no R values");
  const S6Method method = s6_method_from_string(str(cfg, "method"));
  json rows = json::array();
  std::string csv = csv_header_comment(cfg) + "R,N,S6,S4,e,method,cross_check\n";
  std::string plot = "# R e\n";
  bool failed = false;
  for (std::int64_t R : Rs) {
    const CorrelationResult res = correlation_result(R, method);
    // cross-check against an independent method
    const LatticeCircle lc = enumerate_circle_points(R);
    Count other = 0;
    std::string against;
    if (method == S6Method::dft) {
      other = count_s6_hash(lc.points);
      against = "hash";
    } else {
      other = s6_via_dft(lc.points, s6_nyquist(R));
      against = "dft";
    }
    const bool ok = other == res.S6;
    failed = failed || !ok;
    json j = res;
    j["cross_check"] = {{"method", against}, {"S6", to_string(other)}, {"ok", ok}};
    rows.push_back(j);
    csv += std::to_string(R) + "," + std::to_string(res.N) + "," + to_string(res.S6) + "," + to_string(res.S4) + "," +
           format_double(excess_exponent(res.S6, res.N)) + "," + to_string(method) + "," + (ok ? "ok" : "MISMATCH") +
           "\n";
    plot += std::to_string(R) + " " + format_double(excess_exponent(res.S6, res.N)) + "\n";
  }
  CommandResult out;
  switch (format_of(cfg)) {
    case OutputFormat::csv: out.content = csv; break;
    case OutputFormat::plot: out.content = plot; break;
    case OutputFormat::json: out.content = json_document(cfg, "rows", rows); break;
  }
  if (failed) out.exit_code = kExitNumerical;
  return out;
}

CommandResult run_expsum(const json& cfg) {
  const auto Rs = parse_integer_list(cfg.at("R"));
  const auto ps = parse_real_list(cfg.at("p"));
  if (Rs.empty() || ps.empty()) throw InvalidArgument("expsum needs R and p values");
  const std::string mode = str(cfg, "mode");
  if (mode != "period" && mode != "circle") throw InvalidArgument("mode must be period or circle");
  json rows = json::array();
  std::string csv = csv_header_comment(cfg) + "R,N,p,mode,norm,norm_over_sqrtN\n";
  std::string plot = "# p norm_over_sqrtN\n";
  for (std::int64_t R : Rs) {
    ExpSumSpec spec;
    spec.points = enumerate_circle_points(R);
    spec.mode = mode == "period" ? ExpSumMode::period : ExpSumMode::circle;
    spec.square = SquareRegion(Point::Zero(), real(cfg, "side"));
    spec.spacing = real(cfg, "grid_spacing");
    if (spec.mode == ExpSumMode::period) spec.square = SquareRegion(Point(0.5, 0.5), 1.0);
    for (double p : ps) {
      spec.p = p;
      const double v = expsum_lp_norm(spec);
      const double n = static_cast<double>(spec.points.N());
      const double rel = n > 0 ? v / std::sqrt(n) : 0.0;
      rows.push_back({{"R", R}, {"N", spec.points.N()}, {"p", p}, {"mode", mode}, {"norm", v}, {"norm_over_sqrtN", rel}});
      csv += std::to_string(R) + "," + std::to_string(spec.points.N()) + "," + format_double(p) + "," + mode + "," +
             format_double(v) + "," + format_double(rel) + "\n";
      plot += format_double(p) + " " + format_double(rel) + "\n";
    }
  }
  switch (format_of(cfg)) {
    case OutputFormat::csv: return {csv};
    case OutputFormat::plot: return {plot};
    case OutputFormat::json: break;
  }
  return {json_document(cfg, "rows", rows)};
}

CommandResult run_ladder(const json& cfg) {
  const Scale s = parse_scale(str(cfg, "delta"));
  const std::int64_t K = integer(cfg, "K");
  const CircleBound cb = circle_bound_log(s, real(cfg, "p"), real(cfg, "C"), K);
  json j = cb.ladder;
  j["tau0_term"] = cb.tau0_term;
  j["circle_log_bound"] = cb.log_bound;
  switch (format_of(cfg)) {
    case OutputFormat::csv: {
      std::string csv = csv_header_comment(cfg) + "j,log_inv_tau,half_exponent\n";
      for (std::size_t k = 0; k < cb.ladder.tau_log_inv.size(); ++k)
        csv += std::to_string(k) + "," + format_double(cb.ladder.tau_log_inv[k]) + "," +
               (k < cb.ladder.half_exponents.size() ? std::to_string(cb.ladder.half_exponents[k]) : "") + "\n";
      return {csv};
    }
    case OutputFormat::plot: {
      std::string plot = "# j log_inv_tau\n";
      for (std::size_t k = 0; k < cb.ladder.tau_log_inv.size(); ++k)
        plot += std::to_string(k) + " " + format_double(cb.ladder.tau_log_inv[k]) + "\n";
      return {plot};
    }
    case OutputFormat::json: break;
  }
  return {json_document(cfg, "ladder", j)};
}

CommandResult run_command(const std::string& command, const json& cfg) {
  if (command == "bounds") return run_bounds_table(cfg);
  if (command == "experiment") return run_experiment(cfg);
  if (command == "bilinear") return run_bilinear(cfg);
  if (command == "ball-inflation") return run_ball_inflation(cfg);
  if (command == "circle-points") return run_circle_points(cfg);
  if (command == "s6") return run_s6(cfg);
  if (command == "expsum") return run_expsum(cfg);
  if (command == "ladder") return run_ladder(cfg);
  throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace declab
