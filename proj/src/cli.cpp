#include "polyint/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyint/bodies.hpp"
#include "polyint/detector.hpp"
#include "polyint/error.hpp"
#include "polyint/harmonics.hpp"
#include "polyint/sections.hpp"

namespace polyint {

namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

struct LoadedBody {
  Body body;
  json spec;
};

LoadedBody load_body(const std::string& path, int expected_dim) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidSpec, "cannot read body file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const BodySpec spec = parse_body_spec(text.str());
  LoadedBody out{Body::from_spec(spec), json::parse(text.str())};
  require(expected_dim <= 0 || out.body.dim() == expected_dim, ErrorCode::DimensionOutOfRange,
          "--n does not match the body dimension " + std::to_string(out.body.dim()));
  return out;
}

// axis:K (1-based) or vec:x,y,...
Direction parse_xi(const std::string& text, int n) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::InvalidSpec, "--xi must be axis:K or vec:x,y,...");
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == s.size() && !s.empty(), ErrorCode::InvalidSpec, "--xi: bad number '" + s + "'");
    return v;
  };
  if (kind == "axis") {
    const double k = number(rest);
    require(k == std::floor(k) && k >= 1 && k <= n, ErrorCode::DimensionOutOfRange,
            "--xi axis index must be in 1.." + std::to_string(n));
    return Direction::axis(n, static_cast<int>(k) - 1);
  }
  require(kind == "vec", ErrorCode::InvalidSpec, "--xi must be axis:K or vec:x,y,...");
  std::vector<double> parts;
  std::stringstream ss(rest);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(number(item));
  require(static_cast<int>(parts.size()) == n, ErrorCode::DimensionOutOfRange,
          "--xi vector needs " + std::to_string(n) + " components");
  return Direction::normalized(Eigen::Map<const Vec>(parts.data(), n));
}

SectionMethod parse_method(const std::string& s) {
  if (s == "auto") return SectionMethod::Auto;
  if (s == "focused") return SectionMethod::Focused;
  if (s == "uniform") return SectionMethod::Uniform;
  if (s == "exact") return SectionMethod::Exact;
  fail(ErrorCode::InvalidSpec, "--method must be auto, focused, uniform or exact");
}

struct Flags {
  std::string body;
  int n = 0;
  int m = 0;
  int i = 0;
  std::string xi;
  int degree = 24;
  int inner_degree = 24;
  int polytope_order = 10;
  std::string method = "auto";
  int grid = 64;
  double margin = 1e-3;
  std::uint64_t seed = 1;
  int samples = 10000;
  int directions = 40;
  int max_degree = 16;
  double threshold = 1e-6;
  int l_max = 12;
  std::vector<int> ms{2, 4, 6};
  std::vector<int> ns{3, 4, 5};
  std::vector<double> ts{0.0, 0.2, 0.4};
  std::vector<double> eps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::string out;
  std::string format;
  int threads = 0;
};

SectionOptions section_options(const Flags& f, int degree) {
  SectionOptions o;
  o.degree = degree;
  o.polytope_order = f.polytope_order;
  o.method = parse_method(f.method);
  return o;
}

bool want_json(const Flags& f, const char* fallback) {
  const std::string fmt = f.format.empty() ? fallback : f.format;
  require(fmt == "csv" || fmt == "json", ErrorCode::InvalidSpec, "--format must be csv or json");
  return fmt == "json";
}

std::string cmd_eval_section(const Flags& f) {
  const LoadedBody lb = load_body(f.body, f.n);
  const Direction xi = parse_xi(f.xi, lb.body.dim());
  const SectionFunctionSamples s =
      section_function(lb.body, f.m, xi, f.grid, f.margin, section_options(f, f.degree), f.threads);
  if (want_json(f, "csv")) {
    json j{{"body", lb.spec}, {"n", lb.body.dim()}, {"m", f.m}, {"xi", vec_json(xi.vec())},
           {"lo", s.lo},      {"hi", s.hi},         {"t", s.t}, {"values", s.values}};
    return j.dump(2) + "\n";
  }
  std::string csv = "t,value\n";
  for (std::size_t k = 0; k < s.t.size(); ++k) csv += num(s.t[k]) + "," + num(s.values[k]) + "\n";
  return csv;
}

std::string cmd_detect(const Flags& f) {
  require(want_json(f, "json"), ErrorCode::InvalidSpec, "detect emits JSON only");
  const LoadedBody lb = load_body(f.body, f.n);
  DetectionConfig cfg;
  cfg.max_degree = f.max_degree;
  cfg.grid_size = f.grid;
  cfg.margin = f.margin;
  cfg.threshold = f.threshold;
  cfg.directions = f.directions;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  cfg.section = section_options(f, f.degree);
  const ClassificationReport r = detect_body(lb.body, f.m, cfg);

  json dirs = json::array();
  for (const PolynomialFitReport& d : r.per_direction)
    dirs.push_back({{"xi", vec_json(d.xi)},
                    {"degree", d.degree},
                    {"residual", d.residual},
                    {"polynomial", d.polynomial},
                    {"coefficients", d.coefficients}});
  json j{{"body", lb.spec},
         {"n", lb.body.dim()},
         {"m", f.m},
         {"verdict", r.polynomial ? "polynomial" : "non-polynomial"},
         {"degree_bound", r.degree_bound},
         {"per_direction", dirs},
         {"ellipsoid_residual", r.ellipsoid.residual},
         {"ellipsoid_positive_definite", r.ellipsoid.positive_definite}};
  return j.dump(2) + "\n";
}

std::string cmd_multipliers(const Flags& f) {
  require(f.l_max >= 0 && f.l_max <= 64, ErrorCode::OrderOutOfRange, "--l-max must be in [0, 64]");
  const MultiplierTable t = build_multiplier_table(f.l_max, f.ms, f.ns, f.threads);
  if (!want_json(f, "csv")) return multiplier_table_csv(t);
  json rows = json::array();
  for (const MultiplierEntry& e : t.entries)
    rows.push_back({{"l", e.l},
                    {"k", e.k},
                    {"m", e.m},
                    {"n", e.n},
                    {"numerator", numerator(e.value).str()},
                    {"denominator", denominator(e.value).str()},
                    {"is_zero", e.value == 0},
                    {"predicted_zero", !e.predicted_nonzero}});
  return json{{"entries", rows}}.dump(2) + "\n";
}

std::string cmd_verify_identity(const Flags& f) {
  const LoadedBody lb = load_body(f.body, f.n);
  require(!f.ts.empty(), ErrorCode::InvalidSpec, "--t needs at least one offset");
  json rows = json::array();
  std::string csv = "m,t,lhs,rhs,rel_diff\n";
  for (double t : f.ts) {
    const IdentityCheck c =
        moment_identity_check(lb.body, f.m, t, f.degree, section_options(f, f.inner_degree), f.threads);
    const double rel = std::abs(c.lhs - c.rhs) / std::abs(c.rhs);
    csv += std::to_string(f.m) + "," + num(t) + "," + num(c.lhs) + "," + num(c.rhs) + "," + num(rel) + "\n";
    rows.push_back({{"m", f.m}, {"t", t}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"rel_diff", rel}});
  }
  if (want_json(f, "csv")) return json{{"body", lb.spec}, {"rows", rows}}.dump(2) + "\n";
  return csv;
}

std::string cmd_kubota(const Flags& f) {
  const LoadedBody lb = load_body(f.body, f.n);
  const KubotaCheck k = dual_kubota_check(lb.body, f.i, f.samples, f.seed, f.degree, f.threads);
  if (want_json(f, "csv"))
    return json{{"body", lb.spec}, {"i", f.i},   {"samples", f.samples}, {"seed", f.seed},
                {"lhs", k.lhs},    {"rhs", k.rhs}, {"stderr", k.std_error}}
               .dump(2) +
           "\n";
  return "i,samples,lhs,rhs,stderr\n" + std::to_string(f.i) + "," + std::to_string(f.samples) + "," + num(k.lhs) +
         "," + num(k.rhs) + "," + num(k.std_error) + "\n";
}

std::string cmd_steiner(const Flags& f) {
  const LoadedBody lb = load_body(f.body, f.n);
  const SteinerReport r = dual_steiner_check(lb.body, f.eps, f.degree);
  if (want_json(f, "csv"))
    return json{{"body", lb.spec},
                {"epsilon", r.eps},
                {"volume", r.volumes},
                {"coefficients", r.coefficients},
                {"targets", r.targets},
                {"residual", r.residual}}
               .dump(2) +
           "\n";
  std::string csv = "epsilon,volume\n";
  for (std::size_t k = 0; k < r.eps.size(); ++k) csv += num(r.eps[k]) + "," + num(r.volumes[k]) + "\n";
  return csv;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual section functions of star bodies: evaluation, detection and identity checks", "polyint"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* c, bool with_body) {
    if (with_body) {
      c->add_option("--body", f.body, "body spec JSON file")->required();
      c->add_option("--n", f.n, "expected dimension of the body");
    }
    c->add_option("--out", f.out, "write the result to this file instead of stdout");
    c->add_option("--format", f.format, "csv or json");
    c->add_option("--threads", f.threads, "worker cap, 0 = all cores");
  };
  auto section_flags = [&](CLI::App* c) {
    c->add_option("--method", f.method, "auto, focused, uniform or exact");
    c->add_option("--polytope-order", f.polytope_order, "Gauss points per angle on the exact polytope path");
  };

  CLI::App* eval = app.add_subcommand("eval-section", "sample A_{K,m,xi}(t) on Chebyshev nodes (t,value)");
  common(eval, true);
  section_flags(eval);
  eval->add_option("--m", f.m, "order m, 1 <= m <= n-1")->required();
  eval->add_option("--xi", f.xi, "axis:K (1-based) or vec:x,y,...")->required();
  eval->add_option("--degree", f.degree, "sphere-rule degree");
  eval->add_option("--grid", f.grid, "number of Chebyshev nodes");
  eval->add_option("--margin", f.margin, "endpoint margin in units of min_radial");

  CLI::App* detect = app.add_subcommand("detect", "polynomiality verdict over a direction ensemble (JSON)");
  common(detect, true);
  section_flags(detect);
  detect->add_option("--m", f.m, "order m, 1 <= m <= n-1")->required();
  detect->add_option("--degree", f.degree, "sphere-rule degree for sections (default 48)");
  detect->add_option("--seed", f.seed, "seed of the random directions");
  detect->add_option("--directions", f.directions, "ensemble size, axes and diagonal included");
  detect->add_option("--max-degree", f.max_degree, "largest fitted degree");
  detect->add_option("--threshold", f.threshold, "relative residual accepted as polynomial");
  detect->add_option("--grid", f.grid, "samples per direction");
  detect->add_option("--margin", f.margin, "endpoint margin in units of min_radial");

  CLI::App* mult = app.add_subcommand("multipliers", "exact multiplier table lambda_l(k)");
  common(mult, false);
  mult->add_option("--l-max", f.l_max, "largest l and k");
  mult->add_option("--m", f.ms, "even orders m")->delimiter(',');
  mult->add_option("--n", f.ns, "dimensions n")->delimiter(',');

  CLI::App* ident = app.add_subcommand("verify-identity", "both sides of the moment identity (m,t,lhs,rhs,rel_diff)");
  common(ident, true);
  section_flags(ident);
  ident->add_option("--m", f.m, "order m, 1 <= m <= n-1")->required();
  ident->add_option("--t", f.ts, "offsets, |t| < min_radial")->delimiter(',');
  ident->add_option("--degree", f.degree, "outer sphere-rule degree");
  ident->add_option("--inner-degree", f.inner_degree, "section sphere-rule degree");

  CLI::App* kub = app.add_subcommand("kubota", "dual Kubota check (i,samples,lhs,rhs,stderr)");
  common(kub, true);
  kub->add_option("--i", f.i, "subspace dimension, 1 <= i <= n-1")->required();
  kub->add_option("--samples", f.samples, "Haar frames");
  kub->add_option("--seed", f.seed, "frame seed");
  kub->add_option("--degree", f.degree, "sphere-rule degree");

  CLI::App* stein = app.add_subcommand("steiner", "volumes of K + eps B (epsilon,volume)");
  common(stein, true);
  stein->add_option("--eps", f.eps, "positive eps values")->delimiter(',');
  stein->add_option("--degree", f.degree, "sphere-rule degree");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    std::string result;
    if (eval->parsed()) result = cmd_eval_section(f);
    else if (detect->parsed()) {
      if (detect->count("--degree") == 0) f.degree = DetectionConfig{}.section.degree;
      result = cmd_detect(f);
    } else if (mult->parsed()) result = cmd_multipliers(f);
    else if (ident->parsed()) result = cmd_verify_identity(f);
    else if (kub->parsed()) result = cmd_kubota(f);
    else result = cmd_steiner(f);

    if (f.out.empty()) {
      out << result;
    } else {
      std::ofstream file(f.out, std::ios::binary);
      require(file.good(), ErrorCode::InvalidSpec, "cannot write '" + f.out + "'");
      file << result;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitNumeric;
  } catch (const json::exception& e) {
    err << "error: InvalidSpec: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: NumericFailure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace polyint
