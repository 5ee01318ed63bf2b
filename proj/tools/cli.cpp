#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "durr/analysis.hpp"
#include "durr/closed_forms.hpp"
#include "durr/moments.hpp"
#include "durr/operators.hpp"

#ifndef DURR_VERSION
#define DURR_VERSION "0.0.0"
#endif

namespace durr::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

// One report: a fixed header, rows of cells and an optional summary object.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  Json summary = Json::object();
  bool saturated = false;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string render_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

Json cell_json(const Cell& cell) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(double v) const {
      if (std::isfinite(v)) return v;
      return format_double(v);
    }
    Json operator()(long long v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
    Json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + csv_field(table.header[i]);
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + render_cell(row[i]);
    out += '\n';
  }
  return out;
}

Json config_json(const CommandConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["n"] = c.n;
  j["beta"] = c.beta;
  if (c.x_grid) {
    j["x_grid"] = *c.x_grid;
  } else {
    j["x"] = c.x;
  }
  j["k"] = c.k;
  j["r"] = c.r ? Json(*c.r) : Json(nullptr);
  j["exact"] = c.exact;
  j["method"] = c.method;
  j["family"] = c.family;
  j["operator"] = c.op;
  j["f"] = c.f;
  j["interval"] = {c.a, c.b};
  j["step"] = c.step;
  j["modulus_step"] = c.modulus_step;
  j["tol"] = c.tol;
  j["quadrature"] = {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"max_panels", c.max_panels}};
  j["truncation"] = {{"mass_tol", c.mass_tol}, {"hard_cap", c.hard_cap}};
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  return j;
}

Json meta_json(const CommandConfig& c, const Table& table) {
  Json meta;
  meta["tool"] = "durr";
  meta["version"] = DURR_VERSION;
  meta["config"] = config_json(c);
  meta["saturated"] = table.saturated;
  return meta;
}

std::string render_json(const CommandConfig& c, const Table& table) {
  Json doc;
  doc["meta"] = meta_json(c, table);
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json item = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) item[table.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(item));
  }
  doc["rows"] = std::move(rows);
  if (!table.summary.empty()) doc["summary"] = table.summary;
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DomainError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw DomainError("failed writing '" + path + "'");
}

void emit(const CommandConfig& c, const Table& table, std::ostream& out) {
  if (c.format == OutputFormat::json) {
    const std::string text = render_json(c, table);
    if (c.output.empty()) {
      out << text;
    } else {
      write_file(c.output, text);
    }
    return;
  }
  const std::string text = render_csv(table);
  if (c.output.empty()) {
    out << text;
    return;
  }
  write_file(c.output, text);
  Json meta = meta_json(c, table);
  if (!table.summary.empty()) meta["summary"] = table.summary;
  write_file(c.output + ".meta.json", meta.dump(2) + "\n");
}

double parse_decimal(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed number '" + text + "'");
  }
  if (used != text.size()) throw DomainError("malformed number '" + text + "'");
  return value;
}

OperatorParams make_params(int n, const std::string& beta, bool exact) {
  if (beta.find('/') != std::string::npos) return OperatorParams(n, parse_rational(beta));
  if (exact) throw DomainError("exact mode needs beta as a fraction p/q, got '" + beta + "'");
  return OperatorParams(n, parse_decimal(beta));
}

std::vector<OperatorParams> all_params(const CommandConfig& c) {
  std::vector<OperatorParams> out;
  for (int n : c.n) {
    for (const auto& beta : c.beta) out.push_back(make_params(n, beta, c.exact));
  }
  return out;
}

std::vector<double> x_points(const CommandConfig& c) {
  if (!c.x_grid) return c.x;
  std::vector<double> parts;
  std::stringstream stream(*c.x_grid);
  std::string piece;
  while (std::getline(stream, piece, ':')) parts.push_back(parse_decimal(piece));
  if (parts.size() != 3) throw DomainError("--x-grid expects a:b:h");
  return Grid::uniform(parts[0], parts[1], parts[2]).points;
}

TruncationPolicy policy_of(const CommandConfig& c) {
  TruncationPolicy p;
  p.mass_tol = c.mass_tol;
  p.hard_cap = c.hard_cap;
  p.validate();
  return p;
}

QuadratureConfig quad_of(const CommandConfig& c) {
  QuadratureConfig q;
  q.rel_tol = c.rel_tol;
  q.abs_tol = c.abs_tol;
  q.max_panels = c.max_panels;
  q.validate();
  return q;
}

FunctionSpec function_of(const std::string& text) {
  try {
    return FunctionSpec::builtin(text);
  } catch (const DomainError&) {
    return FunctionSpec::expression(text);
  }
}

std::string beta_label(const OperatorParams& p) {
  return p.exact_beta ? to_string(*p.exact_beta) : format_double(p.beta);
}

Table run_basis(const CommandConfig& c) {
  Table t;
  t.header = {"n", "beta", "x", "k", "value", "log_value", "cumulative_mass"};
  const TruncationPolicy policy = policy_of(c);
  for (const auto& p : all_params(c)) {
    for (double x : x_points(c)) {
      const Truncation trunc = truncation_index(p, x, policy);
      t.saturated = t.saturated || trunc.saturated;
      double mass = 0.0;
      for (std::int64_t k = 0; k <= trunc.k_max; ++k) {
        const double value = basis_value(p, k, x);
        mass += value;
        t.add({(long long)p.n, beta_label(p), x, (long long)k, value, basis_log_value(p, k, x), mass});
      }
    }
  }
  return t;
}

Table run_moments(const CommandConfig& c) {
  Table t;
  t.header = {"n", "beta", "k", "r", "method", "value", "exact", "abs_error_bound"};
  const MomentMethod method = parse_moment_method(c.method);
  if (c.exact && method == MomentMethod::quadrature) throw DomainError("quadrature has no exact mode");
  const int r = c.r.value_or(1);
  if (r < 0) throw DomainError("r must be >= 0");
  for (const auto& p : all_params(c)) {
    for (long long k : c.k) {
      if (k < 0) throw DomainError("k must be >= 0");
      MomentValue v;
      switch (method) {
        case MomentMethod::stirling_sum:
          v = p_exact(p, k, r);
          break;
        case MomentMethod::recurrence:
          v = p_recurrence(p, k, r).at(static_cast<std::size_t>(r));
          break;
        case MomentMethod::quadrature: {
          const MomentValue top = basis_raw_moment(p, k, r, MomentMethod::quadrature);
          const MomentValue base = basis_raw_moment(p, k, 0, MomentMethod::quadrature);
          v.value = top.value / base.value;
          v.abs_error_bound = (top.abs_error_bound + std::abs(v.value) * base.abs_error_bound) / base.value;
          break;
        }
      }
      Cell exact;
      if (c.exact && v.exact) exact = to_string(*v.exact);
      t.add({(long long)p.n, beta_label(p), k, (long long)r, std::string(to_string(method)), v.value, exact,
             v.abs_error_bound});
    }
  }
  return t;
}

Table run_paper_check(const CommandConfig& c) {
  Table t;
  t.header = {"family", "order", "n", "beta", "point", "exact", "closed", "abs_gap", "rel_gap"};
  std::vector<ClosedFamily> families;
  if (c.family == "all") {
    families = {ClosedFamily::jain_B,    ClosedFamily::S_closed,  ClosedFamily::P_closed,
                ClosedFamily::T_closed,  ClosedFamily::mu_closed, ClosedFamily::T_recur};
  } else {
    families = {parse_closed_family(c.family)};
  }
  SweepSpec sweep;
  if (!c.full_sweep) {
    sweep.n_values = c.n;
    sweep.beta_values.clear();
    for (const auto& beta : c.beta) sweep.beta_values.push_back(make_params(1, beta, false).beta);
    sweep.x_values = x_points(c);
    sweep.k_values.assign(c.k.begin(), c.k.end());
  }
  const TruncationPolicy policy = policy_of(c);
  double worst = 0.0;
  for (ClosedFamily family : families) {
    const int lo = c.r ? *c.r : min_order(family);
    const int hi = c.r ? *c.r : max_order(family);
    for (int order = lo; order <= hi; ++order) {
      const ClosedFormId id{family, order};
      id.validate();
      const DiscrepancyReport report = discrepancy_sweep(id, sweep, policy);
      for (const auto& row : report.rows) {
        t.saturated = t.saturated || row.exact.saturated;
        worst = std::max(worst, row.rel_gap);
        t.add({std::string(to_string(family)), (long long)order, (long long)row.n, row.beta, row.point,
               row.exact.value, row.closed, row.abs_gap, row.rel_gap});
      }
    }
  }
  t.summary["max_rel_gap"] = worst;
  return t;
}

Table run_eval(const CommandConfig& c) {
  Table t;
  t.header = {"operator", "f", "n", "beta", "x", "value"};
  const FunctionSpec f = function_of(c.f);
  const TruncationPolicy policy = policy_of(c);
  const QuadratureConfig quad = quad_of(c);
  if (c.op != "jain" && c.op != "durrmeyer" && c.op != "auxiliary") {
    throw DomainError("--operator must be jain, durrmeyer or auxiliary");
  }
  for (const auto& p : all_params(c)) {
    DurrmeyerOperator durrmeyer(p, f, quad, policy);
    for (double x : x_points(c)) {
      if (x > 0.0) t.saturated = t.saturated || truncation_index(p, x, policy).saturated;
      double value = 0.0;
      if (c.op == "jain") {
        value = jain_apply(p, f, x, policy);
      } else if (c.op == "durrmeyer") {
        value = durrmeyer.apply(x);
      } else {
        value = durrmeyer.apply_auxiliary(x);
      }
      t.add({c.op, f.name(), (long long)p.n, beta_label(p), x, value});
    }
  }
  return t;
}

double single_beta(const CommandConfig& c) {
  if (c.beta.size() != 1) throw DomainError("this subcommand takes a single beta");
  return make_params(1, c.beta.front(), false).beta;
}

Table run_voronovskaja(const CommandConfig& c) {
  Table t;
  t.header = {"f", "x", "beta", "n", "scaled_error", "extrapolated", "formula", "gap"};
  const FunctionSpec f = function_of(c.f);
  const double beta = single_beta(c);
  Json limits = Json::array();
  for (double x : x_points(c)) {
    const VoronovskajaReport report = voronovskaja(f, x, beta, c.n, policy_of(c), quad_of(c));
    const auto gaps = report.gaps();
    for (std::size_t i = 0; i < report.n_list.size(); ++i) {
      Cell extrapolated;
      if (i > 0) extrapolated = report.extrapolated[i - 1];
      t.add({report.f, x, beta, (long long)report.n_list[i], report.scaled_errors[i], extrapolated, report.formula,
             gaps[i]});
    }
    limits.push_back({{"x", x},
                      {"limit", report.limit},
                      {"formula", report.formula},
                      {"gap", report.gap},
                      {"gap_decreasing", report.gap_decreasing()},
                      {"derivatives_analytic", report.derivatives_analytic}});
  }
  t.summary["limits"] = limits;
  return t;
}

Table run_korovkin(const CommandConfig& c) {
  Table t;
  t.header = {"beta", "n", "dist_e0", "dist_e1", "dist_e2"};
  const double beta = single_beta(c);
  const KorovkinReport report = korovkin_check(beta, Grid::uniform(c.a, c.b, c.step), c.n, c.tol, policy_of(c));
  for (const auto& row : report.rows) {
    t.saturated = t.saturated || row.saturated;
    t.add({beta, (long long)row.n, row.distance[0], row.distance[1], row.distance[2]});
  }
  t.summary = {{"monotone_e1", report.monotone(1)}, {"monotone_e2", report.monotone(2)}, {"passed", report.passed()}};
  return t;
}

Table run_bound_check(const CommandConfig& c) {
  Table t;
  t.header = {"f", "n", "beta", "x", "lhs", "omega2_term", "omega_term", "inconclusive"};
  const FunctionSpec f = function_of(c.f);
  const Grid grid = Grid::uniform(c.a, c.b, c.step);
  Json summary = Json::array();
  for (const auto& p : all_params(c)) {
    const BoundReport report = bound_check(f, p, grid, c.modulus_step, policy_of(c), quad_of(c));
    for (const auto& point : report.points) {
      t.add({report.f, (long long)report.n, report.beta, point.x, point.lhs, point.omega2_term, point.omega_term,
             point.inconclusive});
    }
    summary.push_back({{"n", report.n},
                       {"beta", report.beta},
                       {"lhs_sup", report.lhs_sup},
                       {"minimal_c", report.minimal_c},
                       {"inconclusive", report.inconclusive},
                       {"holds_with_c10", report.holds_with(10.0)}});
  }
  t.summary["reports"] = summary;
  return t;
}

Table run_order_check(const CommandConfig& c) {
  Table t;
  t.header = {"r", "beta", "x", "n", "mu", "below_noise"};
  const double beta = single_beta(c);
  Json fits = Json::array();
  std::vector<int> orders;
  if (c.r) {
    orders = {*c.r};
  } else {
    orders = {1, 2, 3, 4};
  }
  for (int r : orders) {
    for (double x : x_points(c)) {
      const OrderReport report = order_check(r, beta, x, c.n, policy_of(c));
      for (std::size_t i = 0; i < report.n_list.size(); ++i) {
        t.add({(long long)r, beta, x, (long long)report.n_list[i], report.mu[i], (bool)report.below_noise[i]});
      }
      fits.push_back({{"r", r}, {"x", x}, {"slope", report.slope}, {"threshold", report.threshold},
                      {"passed", report.passed()}});
    }
  }
  t.summary["fits"] = fits;
  return t;
}

}  // namespace

void CommandConfig::validate() const {
  static const std::vector<std::string> known = {"basis", "moments", "paper-check", "eval",
                                                 "voronovskaja", "korovkin", "bound-check", "order-check"};
  if (std::find(known.begin(), known.end(), subcommand) == known.end()) {
    throw DomainError("unknown subcommand '" + subcommand + "'");
  }
  if (n.empty() || beta.empty()) throw DomainError("need at least one n and one beta");
  for (int v : n) {
    if (v < 1) throw DomainError("n must be >= 1");
  }
  for (const auto& text : beta) make_params(1, text, exact);
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("interval must satisfy 0 <= a <= b");
  if (!(step > 0.0) || !(modulus_step > 0.0)) throw DomainError("grid steps must be > 0");
  if (exact && subcommand != "moments") throw DomainError("--exact applies to the moments subcommand");
}

namespace {

Table dispatch(const CommandConfig& c) {
  if (c.subcommand == "basis") return run_basis(c);
  if (c.subcommand == "moments") return run_moments(c);
  if (c.subcommand == "paper-check") return run_paper_check(c);
  if (c.subcommand == "eval") return run_eval(c);
  if (c.subcommand == "voronovskaja") return run_voronovskaja(c);
  if (c.subcommand == "korovkin") return run_korovkin(c);
  if (c.subcommand == "bound-check") return run_bound_check(c);
  return run_order_check(c);
}

}  // namespace

int run(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  Table table;
  try {
    config.validate();
    table = dispatch(config);
  } catch (const AccuracyError& e) {
    err << "durr: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const UnsupportedOrder& e) {
    err << "durr: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "durr: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "durr: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "durr: " << e.what() << '\n';
    return kFailure;
  }
  try {
    emit(config, table, out);
  } catch (const std::exception& e) {
    err << "durr: " << e.what() << '\n';
    return kFailure;
  }
  if (table.saturated) {
    err << "durr: truncation saturated; output is partial\n";
    return kSaturated;
  }
  return kOk;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments, operators and convergence checks for Jain-Durrmeyer operators", "durr"};
  app.set_version_flag("--version", DURR_VERSION);
  app.require_subcommand(1);
  CommandConfig c;
  std::string format = "csv";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "operator index n (comma list allowed)")->delimiter(',');
    sub->add_option("--beta", c.beta, "beta in [0, 1), decimal or p/q (comma list allowed)")->delimiter(',');
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "output file; CSV also writes <file>.meta.json");
    sub->add_option("--mass-tol", c.mass_tol, "basis mass truncation tolerance");
    sub->add_option("--hard-cap", c.hard_cap, "largest basis index summed");
  };
  auto with_x = [&](CLI::App* sub) {
    sub->add_option("--x", c.x, "evaluation points (comma list allowed)")->delimiter(',');
    sub->add_option("--x-grid", c.x_grid, "uniform evaluation grid a:b:h");
  };
  auto with_quad = [&](CLI::App* sub) {
    sub->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance");
    sub->add_option("--abs-tol", c.abs_tol, "quadrature absolute tolerance");
    sub->add_option("--max-panels", c.max_panels, "quadrature panel budget");
  };
  auto with_f = [&](CLI::App* sub) {
    sub->add_option("--f", c.f, "builtin name (e0..e5, exp_decay, sin_bounded, abs_kink[:c], step_smooth[:c]) "
                                "or an expression in t");
  };
  auto with_interval = [&](CLI::App* sub) {
    sub->add_option("--a", c.a, "interval start");
    sub->add_option("--b", c.b, "interval end");
    sub->add_option("--step", c.step, "grid step");
  };

  CLI::App* basis = app.add_subcommand("basis", "basis values and cumulative mass");
  common(basis);
  with_x(basis);

  CLI::App* moments = app.add_subcommand("moments", "moment ratios P_r(k)");
  common(moments);
  moments->add_option("--k", c.k, "basis index (comma list allowed)")->delimiter(',');
  moments->add_option("--r", c.r, "moment order");
  moments->add_option("--method", c.method, "stirling-sum, recurrence or quadrature");
  moments->add_flag("--exact", c.exact, "exact rational output; needs beta as p/q");

  CLI::App* paper = app.add_subcommand("paper-check", "closed forms against the exact engine");
  common(paper);
  with_x(paper);
  paper->add_option("--k", c.k, "basis index for S and P (comma list allowed)")->delimiter(',');
  paper->add_option("--r", c.r, "order; all printed orders when omitted");
  paper->add_option("--family", c.family, "B, S, P, T, mu, Trec or all");
  paper->add_flag("--sweep", c.full_sweep, "use the default sweep grid");

  CLI::App* eval = app.add_subcommand("eval", "apply an operator to f");
  common(eval);
  with_x(eval);
  with_quad(eval);
  with_f(eval);
  eval->add_option("--operator", c.op, "jain, durrmeyer or auxiliary");

  CLI::App* voron = app.add_subcommand("voronovskaja", "scaled errors n(D f - f) and their limit");
  common(voron);
  with_x(voron);
  with_quad(voron);
  with_f(voron);

  CLI::App* korovkin = app.add_subcommand("korovkin", "sup distances for e0, e1, e2");
  common(korovkin);
  with_interval(korovkin);
  korovkin->add_option("--tol", c.tol, "tolerance at the largest n");

  CLI::App* bound = app.add_subcommand("bound-check", "direct estimate with measured constant");
  common(bound);
  with_quad(bound);
  with_f(bound);
  with_interval(bound);
  bound->add_option("--modulus-step", c.modulus_step, "step for the moduli of continuity");

  CLI::App* order = app.add_subcommand("order-check", "decay order of the central moments");
  common(order);
  with_x(order);
  order->add_option("--r", c.r, "order; 1..4 when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.subcommand = chosen->get_name();
  c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  auto given = [&](const char* name) {
    try {
      return chosen->get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  // Per-subcommand defaults for options the user left unset.
  if (chosen == korovkin && !given("--n")) c.n = {25, 50, 100, 200};
  if (chosen == voron && !given("--n")) c.n = {10, 20, 40, 80, 160, 320};
  if (chosen == order && !given("--n")) c.n = {10, 20, 40, 80, 160};
  if (chosen == bound) {
    if (!given("--n")) c.n = {50, 100, 200};
    if (!given("--f")) c.f = "exp_decay";
    if (!given("--b")) c.b = 4.0;
  }
  if (chosen == paper && !given("--n") && !given("--beta") && !given("--x") && !given("--k")) c.full_sweep = true;
  return run(c, out, err);
}

}  // namespace durr::cli
