#include "period_balance/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "period_balance/asymptotics.hpp"
#include "period_balance/compare.hpp"
#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"
#include "period_balance/period.hpp"
#include "period_balance/potential.hpp"

namespace period_balance {

namespace {

using json = nlohmann::ordered_json;

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::parse, "invalid " + what + " '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) fail(ErrorKind::parse, "range needs 'lo:hi', got '" + text + "'");
  const double lo = parse_number(parts[0], "range bound");
  const double hi = parse_number(parts[1], "range bound");
  if (!(lo > 0 && hi > lo) || !std::isfinite(hi)) fail(ErrorKind::domain, "range must satisfy 0 < lo < hi");
  return {lo, hi};
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const double v = parse_number(trim(part), "HBM order");
    if (v != std::floor(v)) fail(ErrorKind::parse, "HBM order must be an integer, got '" + part + "'");
    if (v < 1 || v > 8) fail(ErrorKind::domain, "HBM order must lie in 1..8");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) fail(ErrorKind::parse, "no HBM order given");
  return out;
}

int single_order(const std::string& text) {
  const auto orders = parse_orders(text);
  if (orders.size() != 1) fail(ErrorKind::parse, "this command takes a single HBM order");
  return orders.front();
}

json series_json(const PeriodSeries& s) {
  json j;
  j["order"] = s.order();
  j["coeffs"] = to_strings(s.coeffs);
  return j;
}

json solution_json(const HbmSolution& s) {
  json j;
  j["N"] = s.N;
  j["A"] = s.A;
  j["omega"] = s.omega;
  j["T"] = s.T;
  j["coeffs"] = {{"a", s.a}, {"b", s.b}};
  return j;
}

json critical_json(const std::vector<CriticalPeriod>& list) {
  json arr = json::array();
  for (const auto& c : list) arr.push_back({{"A", c.A}, {"kind", to_string(c.kind)}, {"T", c.T}});
  return arr;
}

json tail_json(const std::optional<TailEstimate>& t) {
  if (!t) return nullptr;
  return {{"C", t->C}, {"exponent", t->exponent}, {"source", t->source}};
}

void write_plot(const std::string& path, const std::string& header, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::domain, "cannot write plot data to '" + path + "'");
  f << header << "\n";
  for (const auto& [x, y] : rows) f << num(x) << "," << num(y) << "\n";
}

// Inserts ".N<k>" before the extension.
std::string plot_path_for(const std::string& path, int N) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = ".N" + std::to_string(N);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

// (A, T) pairs from period output: JSON records or CSV with A and T columns.
std::vector<std::pair<double, double>> read_samples(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(ErrorKind::parse, "no samples on standard input");
  std::vector<std::pair<double, double>> out;
  if (text[first] == '{' || text[first] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorKind::parse, std::string("invalid JSON on standard input: ") + e.what());
    }
    const json& records = j.is_object() ? (j.contains("records") ? j["records"] : j["solutions"]) : j;
    if (!records.is_array()) fail(ErrorKind::parse, "JSON input needs a records array");
    for (const auto& r : records) {
      if (!r.is_object() || !r.contains("A") || !r.contains("T") || !r["A"].is_number() || !r["T"].is_number()) {
        fail(ErrorKind::parse, "each record needs numeric A and T");
      }
      out.emplace_back(r["A"].get<double>(), r["T"].get<double>());
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  int col_a = 0, col_t = 1;
  bool header_done = false;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    for (auto& c : cells) c = trim(c);
    if (!header_done) {
      header_done = true;
      const auto a = std::find(cells.begin(), cells.end(), "A");
      const auto t = std::find(cells.begin(), cells.end(), "T");
      if (a != cells.end() || t != cells.end()) {
        if (a == cells.end() || t == cells.end()) fail(ErrorKind::parse, "CSV header needs both A and T columns");
        col_a = static_cast<int>(a - cells.begin());
        col_t = static_cast<int>(t - cells.begin());
        continue;
      }
    }
    if (static_cast<int>(cells.size()) <= std::max(col_a, col_t)) fail(ErrorKind::parse, "short CSV row '" + line + "'");
    out.emplace_back(parse_number(cells[static_cast<size_t>(col_a)], "A"), parse_number(cells[static_cast<size_t>(col_t)], "T"));
  }
  return out;
}

struct Options {
  std::string grid = "0.1:10:20:log";
  bool grid_given = false;
  double tol = 1e-12;
  std::string format = "json";
  std::string output;
  std::string plot_data;
  std::string orders;
  int order = 8;
  std::string range = "0.01:10";
  double half_width = 10;
  int points = 2001;
  bool fit = false;
  std::string potential;
  std::string families_action;
};

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const json& j, const std::vector<std::string>& csv_header,
            const std::vector<std::vector<std::string>>& csv_rows) {
    std::ostringstream s;
    if (o_.format == "csv") {
      for (size_t i = 0; i < csv_header.size(); ++i) s << (i ? "," : "") << csv_header[i];
      s << "\n";
      for (const auto& row : csv_rows) {
        for (size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << row[i];
        s << "\n";
      }
    } else {
      s << j.dump(2) << "\n";
    }
    if (o_.output.empty()) {
      out_ << s.str();
    } else {
      std::ofstream f(o_.output);
      if (!f) fail(ErrorKind::domain, "cannot write output to '" + o_.output + "'");
      f << s.str();
    }
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

RunConfig make_config(const Options& o) {
  RunConfig c;
  c.potential = o.potential;
  c.grid = parse_grid(o.grid);
  c.tol = o.tol;
  c.format = o.format;
  c.output = o.output;
  return c;
}

void cmd_period(const Options& o, Emitter& em) {
  const RunConfig c = make_config(o);
  const Potential p = Potential::parse(c.potential);
  const bool elliptic = is_duffing(p);
  json records = json::array();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<double, double>> plot;
  for (double A : c.grid.points()) {
    double T;
    std::string method;
    if (elliptic) {
      T = duffing_period(A);
      method = "elliptic";
    } else {
      const auto q = period_quadrature_detail(p, A, c.tol);
      T = q.T;
      method = q.method;
    }
    records.push_back({{"A", A}, {"T", T}, {"method", method}, {"tol", c.tol}});
    rows.push_back({num(A), num(T), method, num(c.tol)});
    plot.emplace_back(A, T);
  }
  em.emit({{"potential", p.spec()}, {"records", records}}, {"A", "T", "method", "tol"}, rows);
  if (!o.plot_data.empty()) write_plot(o.plot_data, "A,T", plot);
}

void cmd_hbm(const Options& o, Emitter& em) {
  const RunConfig c = make_config(o);
  const Potential p = Potential::parse(c.potential);
  const int N = o.orders.empty() ? 1 : single_order(o.orders);
  const auto sols = solve_hbm(p, N, c.grid.points());
  json arr = json::array();
  std::vector<std::string> header{"A", "omega", "T"};
  const size_t na = sols.empty() ? 0 : sols.front().a.size();
  for (size_t k = 0; k < na; ++k) header.push_back("a" + std::to_string(k));
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<double, double>> plot;
  for (const auto& s : sols) {
    arr.push_back(solution_json(s));
    std::vector<std::string> row{num(s.A), num(s.omega), num(s.T)};
    for (double a : s.a) row.push_back(num(a));
    rows.push_back(std::move(row));
    plot.emplace_back(s.A, s.T);
  }
  em.emit({{"potential", p.spec()}, {"N", N}, {"solutions", arr}}, header, rows);
  if (!o.plot_data.empty()) write_plot(o.plot_data, "A,T_N", plot);
}

void cmd_taylor(const Options& o, Emitter& em) {
  const Potential p = Potential::parse(o.potential);
  if (o.order < 0) fail(ErrorKind::domain, "series order must be nonnegative");
  json j{{"potential", p.spec()}};
  PeriodSeries s;
  if (o.orders.empty()) {
    s = lindstedt_series(p, o.order);
    j["source"] = "exact";
  } else {
    const int N = single_order(o.orders);
    s = hbm_taylor(p, N, o.order);
    j["source"] = "hbm";
    j["N"] = N;
  }
  const json sj = series_json(s);
  for (auto& [k, v] : sj.items()) j[k] = v;
  j["unit"] = "pi";
  std::vector<std::vector<std::string>> rows;
  for (int k = 0; k <= s.order(); ++k) rows.push_back({std::to_string(k), to_string(s.coeff(k))});
  em.emit(j, {"k", "coeff_over_pi"}, rows);
}

void cmd_asymptote(const Options& o, Emitter& em, std::istream& in) {
  json j;
  std::vector<std::vector<std::string>> rows;
  auto add_fit = [&](const std::vector<std::pair<double, double>>& samples, const std::string& label) {
    const TailFit f = tail_fit(samples);
    j[label] = {{"C", f.C}, {"exponent", f.exponent}, {"residual", f.residual}};
    rows.push_back({label, num(f.C), num(f.exponent), num(f.residual)});
  };
  if (o.fit) {
    if (!o.potential.empty()) j["potential"] = Potential::parse(o.potential).spec();
    add_fit(read_samples(in), "fit");
    em.emit(j, {"source", "C", "exponent", "residual"}, rows);
    return;
  }
  if (o.potential.empty()) fail(ErrorKind::parse, "asymptote needs a potential or --fit");
  const Potential p = Potential::parse(o.potential);
  j["potential"] = p.spec();
  // Fits belong to large amplitudes; the table default would sit in the transient.
  const GridSpec g = parse_grid(o.grid_given ? o.grid : "1e2:1e4:12:log");
  const auto A = g.points();
  std::vector<std::pair<double, double>> samples;
  if (o.orders.empty()) {
    try {
      const AsymptoticTerm t = exact_tail(p);
      j["exact_tail"] = {{"C", t.M}, {"exponent", t.a}};
      rows.push_back({"exact_tail", num(t.M), num(t.a), ""});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::unsupported) throw;
      j["exact_tail"] = nullptr;
    }
    for (double a : A) samples.emplace_back(a, period_quadrature(p, a, o.tol));
  } else {
    const int N = single_order(o.orders);
    j["N"] = N;
    if (N == 2 && is_duffing(p)) {
      j["limit"] = {{"C", duffing_order2_infinity()}, {"exponent", -1}};
      rows.push_back({"limit", num(duffing_order2_infinity()), "-1", ""});
    } else if (N == 3 && is_duffing(p)) {
      const double d = DuffingOrder3::instance().infinity_constant();
      j["limit"] = {{"C", d}, {"exponent", -1}};
      rows.push_back({"limit", num(d), "-1", ""});
    }
    for (const auto& s : solve_hbm(p, N, A)) samples.emplace_back(s.A, s.T);
  }
  add_fit(samples, "fit");
  em.emit(j, {"source", "C", "exponent", "residual"}, rows);
}

void cmd_monotonicity(const Options& o, Emitter& em) {
  const Potential p = Potential::parse(o.potential);
  const MonotonicityReport r = monotonicity_criterion(p, MonotonicityGrid{o.half_width, o.points});
  json j{{"potential", p.spec()},
         {"verdict", to_string(r.verdict)},
         {"g_min", r.g_min},
         {"g_max", r.g_max},
         {"x_at_min", r.x_at_min},
         {"x_at_max", r.x_at_max},
         {"tol", r.tol}};
  em.emit(j, {"verdict", "g_min", "g_max", "x_at_min", "x_at_max", "tol"},
          {{to_string(r.verdict), num(r.g_min), num(r.g_max), num(r.x_at_min), num(r.x_at_max), num(r.tol)}});
}

void cmd_critical(const Options& o, Emitter& em) {
  const Potential p = Potential::parse(o.potential);
  const auto [lo, hi] = parse_range(o.range);
  json j{{"potential", p.spec()}, {"range", {lo, hi}}};
  std::vector<CriticalPeriod> list;
  if (o.orders.empty()) {
    list = critical_periods(p, lo, hi, 1e-10);
    j["source"] = "exact";
  } else {
    const int N = single_order(o.orders);
    list = hbm_critical_periods(p, N, lo, hi);
    j["source"] = "hbm";
    j["N"] = N;
  }
  j["critical"] = critical_json(list);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : list) rows.push_back({num(c.A), to_string(c.kind), num(c.T)});
  em.emit(j, {"A", "kind", "T"}, rows);
}

void cmd_compare(const Options& o, Emitter& em) {
  const RunConfig c = make_config(o);
  const Potential p = Potential::parse(c.potential);
  const auto orders = o.orders.empty() ? std::vector<int>{1, 2} : parse_orders(o.orders);
  const auto [lo, hi] = parse_range(o.range);
  CompareOptions opts;
  opts.grid = c.grid.points();
  opts.critical_lo = lo;
  opts.critical_hi = hi;
  opts.tol = c.tol;
  const ComparisonReport r = compare(p, orders, opts);
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& oc : r.orders) {
    json errs = json::array();
    for (const auto& e : oc.errors) {
      errs.push_back({{"A", e.A}, {"T", e.T}, {"T_N", e.T_N}, {"error", e.error}});
      rows.push_back({std::to_string(oc.N), num(e.A), num(e.T), num(e.T_N), num(e.error)});
    }
    arr.push_back({{"N", oc.N},
                   {"local_match_order", oc.match_order ? json(*oc.match_order) : json(nullptr)},
                   {"tail_exact", tail_json(oc.tail_exact)},
                   {"tail_hbm", tail_json(oc.tail_hbm)},
                   {"critical_periods_exact", critical_json(oc.critical_exact)},
                   {"critical_periods_hbm", critical_json(oc.critical_hbm)},
                   {"error_curve", errs},
                   {"notes", oc.notes}});
  }
  em.emit({{"family", r.family}, {"orders", arr}}, {"N", "A", "T", "T_N", "error"}, rows);
  if (!o.plot_data.empty()) {
    for (const auto& oc : r.orders) {
      std::vector<std::pair<double, double>> plot;
      for (const auto& e : oc.errors) plot.emplace_back(e.A, e.error);
      write_plot(r.orders.size() == 1 ? o.plot_data : plot_path_for(o.plot_data, oc.N), "A,error", plot);
    }
  }
}

void cmd_families(const Options& o, Emitter& em) {
  if (o.families_action != "list") fail(ErrorKind::parse, "families supports only 'list'");
  struct Family {
    const char* id;
    const char* spec;
    const char* potential;
    const char* notes;
  };
  static const Family kFamilies[] = {
      {"poly", "poly:m=<int >= 2>", "F(x) = x^2/2 + x^(2m)/(2m)",
       "global center; T decreasing; T ~ C A^(1-m); m = 2 is the Duffing oscillator"},
      {"rat", "rat:k=<nonzero>,m=<real >= 1>", "F'(x) = x / (k^2 + x^2)^m, evaluated in the k = 1 normalization",
       "T increasing; global center only for m = 1; exact HBM needs integer m"},
      {"quintic", "quintic:k=<real>", "F'(x) = x + k x^3 + x^5",
       "one critical period for -2 < k < 0 near A = sqrt(-3k/5); T ~ C / A^2"},
      {"gen", "gen:<i>=<rational>,...", "F'(x) = x + sum_i k_i x^i",
       "general polynomial potential; series coefficients through A^4 have closed forms"},
      {"duffing", "duffing", "x'' + x + x^3 = 0", "alias of poly:m=2; exact resultant paths for N = 2, 3"},
  };
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : kFamilies) {
    arr.push_back({{"id", f.id}, {"spec", f.spec}, {"potential", f.potential}, {"notes", f.notes}});
    rows.push_back({f.id, std::string("\"") + f.spec + "\""});
  }
  em.emit({{"families", arr}}, {"id", "spec"}, rows);
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::parse ? 2 : 3; }

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> g(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    g[static_cast<size_t>(i)] = scale == GridScale::log ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  g.back() = max;
  return g;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) fail(ErrorKind::parse, "grid needs 'min:max:count:log|linear', got '" + text + "'");
  GridSpec g;
  g.min = parse_number(parts[0], "grid minimum");
  g.max = parse_number(parts[1], "grid maximum");
  const double count = parse_number(parts[2], "grid count");
  if (count != std::floor(count)) fail(ErrorKind::parse, "grid count must be an integer");
  if (parts[3] == "log") {
    g.scale = GridScale::log;
  } else if (parts[3] == "linear") {
    g.scale = GridScale::linear;
  } else {
    fail(ErrorKind::parse, "grid scale must be log or linear, got '" + parts[3] + "'");
  }
  if (count < 2 || count > 1e6) fail(ErrorKind::domain, "grid count must lie in 2..1000000");
  g.count = static_cast<int>(count);
  if (!(g.min > 0) || !(g.max > g.min) || !std::isfinite(g.max)) fail(ErrorKind::domain, "grid must satisfy 0 < min < max");
  return g;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  Options o;
  CLI::App app{"Period functions of potential centers and their harmonic-balance approximations", "period-balance"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value defaults file (keys as the long flag names)");
  auto* grid = app.add_option("--grid", o.grid, "amplitude grid min:max:count:log|linear (asymptote: 1e2:1e4:12:log)");
  app.add_option("--tol", o.tol, "quadrature tolerance")->envname("PERIOD_BALANCE_TOL");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", o.output, "write output here instead of stdout");
  app.add_option("--plot-data", o.plot_data, "two-column CSV for plotting");
  app.add_option("-N,--hbm", o.orders, "HBM order (compare: comma-separated list)");
  app.add_option("--order", o.order, "series order");
  app.add_option("--range", o.range, "amplitude range lo:hi for critical periods");
  app.add_option("--half-width", o.half_width, "monotonicity grid half-width");
  app.add_option("--points", o.points, "monotonicity grid points");

  auto* period = app.add_subcommand("period", "exact period table");
  period->add_option("potential", o.potential, "potential spec")->required();
  auto* hbm = app.add_subcommand("hbm", "harmonic-balance period table");
  hbm->add_option("potential", o.potential, "potential spec")->required();
  auto* taylor = app.add_subcommand("taylor", "series of T or T_N at A = 0");
  taylor->add_option("potential", o.potential, "potential spec")->required();
  auto* asym = app.add_subcommand("asymptote", "behaviour of T or T_N at large A");
  asym->add_option("potential", o.potential, "potential spec");
  asym->add_flag("--fit", o.fit, "fit A, T samples read from stdin");
  auto* mono = app.add_subcommand("monotonicity", "sign test for monotone period functions");
  mono->add_option("potential", o.potential, "potential spec")->required();
  auto* crit = app.add_subcommand("critical", "critical periods");
  crit->add_option("potential", o.potential, "potential spec")->required();
  auto* cmp = app.add_subcommand("compare", "T against T_N");
  cmp->add_option("potential", o.potential, "potential spec")->required();
  auto* fam = app.add_subcommand("families", "built-in families");
  fam->add_option("action", o.families_action, "list")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    err << "error: parse: " << msg << "\n";
    return 2;
  }

  o.grid_given = grid->count() > 0;
  Emitter em(o, out);
  try {
    if (*period) cmd_period(o, em);
    else if (*hbm) cmd_hbm(o, em);
    else if (*taylor) cmd_taylor(o, em);
    else if (*asym) cmd_asymptote(o, em, in);
    else if (*mono) cmd_monotonicity(o, em);
    else if (*crit) cmd_critical(o, em);
    else if (*cmp) cmd_compare(o, em);
    else if (*fam) cmd_families(o, em);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    err << "error: " << to_string(e.kind()) << ": " << msg << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace period_balance
