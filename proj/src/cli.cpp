// Copyright 2026 The CFSK Receiver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfsk/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfsk/bounds.hpp"
#include "cfsk/document.hpp"
#include "cfsk/errors.hpp"
#include "cfsk/receiver.hpp"
#include "cfsk/sweep.hpp"
#include "cfsk/table.hpp"

namespace cfsk {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::vector<std::string> kinds{"cfsk"};
  int M = 16;
  std::vector<int> Ms{4, 8, 16, 32, 64};
  std::vector<double> n_bars{1.0};
  std::optional<double> dwt;
  std::optional<double> dtheta;
  std::int64_t trials = 100000;
  std::int64_t sql_trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  double visibility = 1.0;
  double efficiency = 1.0;
  double transmittance = 0.99;
  std::string init_hypothesis = "fixed:0";
  int max_events = 10000;
  std::string what = "hb";
  std::string dwt_range = "0:4pi:81";
  std::string dtheta_range = "0:1.96875pi:64";
  std::int64_t max_cells = 20000;
  bool smooth = false;
  std::string minima_out;
  double photons_per_bit = 2.0;
  std::vector<double> energies{0.5, 1, 2, 4, 8, 12};
  bool per_bit = false;
  bool no_sim = false;
  std::string ref;
  std::string gram;
};

json to_json(const RunConfig& c) {
  json j = {{"command", c.command},     {"seed", c.seed},
            {"threads", c.threads},     {"format", c.format},
            {"out", c.out},             {"visibility", c.visibility},
            {"efficiency", c.efficiency}, {"transmittance", c.transmittance},
            {"init_hypothesis", c.init_hypothesis}, {"max_events", c.max_events},
            {"trials", c.trials},       {"sql_trials", c.sql_trials},
            {"dwt_range", c.dwt_range}, {"dtheta_range", c.dtheta_range}};
  if (c.command == "bounds" || c.command == "scan-energy") j["kind"] = c.kinds;
  if (c.command == "bounds" || c.command == "scan-energy") j["nbar"] = c.n_bars;
  if (c.command == "ser" || c.command == "sweep") {
    j["kind"] = c.kinds.front();
    j["nbar"] = c.n_bars.front();
  }
  if (c.command != "scan-alphabet" && c.command != "ratio-map") j["M"] = c.M;
  if (c.command == "scan-alphabet" || c.command == "ratio-map") j["M_list"] = c.Ms;
  j["dwt"] = c.dwt ? json(*c.dwt) : json();
  j["dtheta"] = c.dtheta ? json(*c.dtheta) : json();
  if (c.command == "sweep") {
    j["what"] = c.what;
    j["max_cells"] = c.max_cells;
    j["smooth"] = c.smooth;
  }
  if (c.command == "scan-alphabet") j["photons_per_bit"] = c.photons_per_bit;
  if (c.command == "ratio-map") {
    j["energies"] = c.energies;
    j["per_bit"] = c.per_bit;
    j["max_cells"] = c.max_cells;
  }
  if (c.command == "scan-energy" || c.command == "scan-alphabet") j["no_sim"] = c.no_sim;
  if (c.command == "bounds") j["gram"] = c.gram;
  j["ref"] = c.ref;
  return j;
}

// "<a>:<b>:<n>" where a and b may carry a "pi" suffix ("4pi", "0.5pi").
Axis parse_range(const std::string& name, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("range '" + text + "' must look like start:stop:points");
  const auto number = [&](std::string s) {
    double scale = 1.0;
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
      scale = std::numbers::pi;
      s.resize(s.size() - 2);
      if (s.empty()) s = "1";
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + s + "' in range '" + text + "'");
    }
    if (used != s.size()) throw ConfigError("cannot parse '" + s + "' in range '" + text + "'");
    return v * scale;
  };
  int points = 0;
  try {
    points = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("bad point count in range '" + text + "'");
  }
  return Axis::linear(name, number(parts[0]), number(parts[1]), points);
}

GridSpec optimization_grid(const RunConfig& c) {
  return {parse_range("dwt", c.dwt_range), parse_range("dtheta", c.dtheta_range)};
}

ReceiverModel receiver_model(const RunConfig& c) {
  ReceiverModel r;
  r.visibility = c.visibility;
  r.efficiency = c.efficiency;
  r.transmittance = c.transmittance;
  r.max_events = c.max_events;
  if (c.init_hypothesis == "random") {
    r.initial = InitialHypothesis::random_uniform();
  } else if (c.init_hypothesis.rfind("fixed:", 0) == 0) {
    try {
      r.initial = InitialHypothesis::fixed(std::stoi(c.init_hypothesis.substr(6)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad --init-hypothesis '" + c.init_hypothesis + "'");
    }
  } else {
    throw ConfigError("--init-hypothesis must be 'random' or 'fixed:<index>'");
  }
  r.validate();
  return r;
}

std::vector<ConstellationKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<ConstellationKind> kinds;
  for (const auto& n : names) {
    if (n == "all") {
      kinds = {ConstellationKind::kCfsk, ConstellationKind::kPsk, ConstellationKind::kQam16,
               ConstellationKind::kPpm};
      continue;
    }
    const ConstellationKind k = parse_kind(n);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw ConfigError("no constellation kind given");
  return kinds;
}

struct Outcome {
  Table table;
  std::optional<SweepMap> map;
  std::optional<MinimaReport> minima;
};

// Resolves (dwt, dtheta) for a CFSK run: explicit flags win, otherwise the
// Helstrom-optimal point on the optimization grid.
std::pair<double, double> cfsk_point(RunConfig& c, double n_bar) {
  if (c.dwt && c.dtheta) return {*c.dwt, *c.dtheta};
  const CfskOptimum opt = optimize_cfsk(c.M, n_bar, optimization_grid(c), 9, c.threads);
  return {c.dwt.value_or(opt.delta_omega_T), c.dtheta.value_or(opt.delta_theta)};
}

// One row per symbol: M real entries, or 2M entries as re,im pairs.
GramMatrix read_gram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ConfigError("bad number '" + field + "' in '" + path + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto M = static_cast<Eigen::Index>(rows.size());
  if (M == 0) throw ConfigError("'" + path + "' holds no matrix rows");
  Eigen::MatrixXcd g(M, M);
  for (Eigen::Index j = 0; j < M; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j)];
    const bool complex = static_cast<Eigen::Index>(row.size()) == 2 * M;
    if (!complex && static_cast<Eigen::Index>(row.size()) != M) {
      throw ConfigError("row " + std::to_string(j) + " of '" + path + "' has " +
                        std::to_string(row.size()) + " entries; expected M or 2M");
    }
    for (Eigen::Index m = 0; m < M; ++m) {
      g(j, m) = complex ? Complex(row[2 * m], row[2 * m + 1]) : Complex(row[m], 0.0);
    }
  }
  GramMatrix G(std::move(g));
  if (!G.is_hermitian(1e-12)) throw ConfigError("Gram matrix in '" + path + "' is not Hermitian");
  if (!G.has_unit_diagonal(1e-12)) throw ConfigError("Gram matrix in '" + path + "' needs a unit diagonal");
  return G;
}

Outcome cmd_bounds_gram(const RunConfig& c) {
  const GramMatrix G = read_gram_file(c.gram);
  const BoundResult hb = srm_error(G);
  Table t;
  t.columns = {"kind", "M", "nbar", "dwt", "dtheta", "hb", "hb_method", "sql", "sql_ci95"};
  const double nan = std::nan("");
  t.add_row({std::string("gram"), std::int64_t{G.size()}, nan, nan, nan, hb.p_error,
             std::string(to_string(hb.method)), nan, nan});
  return {std::move(t), std::nullopt, std::nullopt};
}

Outcome cmd_bounds(RunConfig& c) {
  if (!c.gram.empty()) return cmd_bounds_gram(c);
  const auto kinds = parse_kinds(c.kinds);
  Table t;
  t.columns = {"kind", "M", "nbar", "dwt", "dtheta", "hb", "hb_method", "sql", "sql_ci95"};
  for (const ConstellationKind kind : kinds) {
    for (std::size_t r = 0; r < c.n_bars.size(); ++r) {
      const double n_bar = c.n_bars[r];
      ProtocolParams p{c.M, n_bar, 0.0, 0.0};
      if (kind == ConstellationKind::kCfsk) {
        std::tie(p.delta_omega_T, p.delta_theta) = cfsk_point(c, n_bar);
      } else if (kind == ConstellationKind::kPsk) {
        p = ProtocolParams::psk(c.M, n_bar);
      }
      const Constellation con = Constellation::make(kind, p);
      const BoundResult hb = helstrom_bound(con);
      double sql = std::nan(""), sql_ci = std::nan("");
      if (c.sql_trials > 0) {
        const BoundResult s = sql_error_mc(
            con, c.sql_trials, stream_key(c.seed, static_cast<std::uint64_t>(kind), r), c.threads);
        sql = s.p_error;
        sql_ci = s.ci95_halfwidth;
      }
      t.add_row({std::string(to_string(kind)), std::int64_t{c.M}, n_bar, con.params().delta_omega_T,
                 con.params().delta_theta, hb.p_error, std::string(to_string(hb.method)), sql, sql_ci});
    }
  }
  return {std::move(t), std::nullopt, std::nullopt};
}

Outcome cmd_ser(RunConfig& c) {
  if (c.trials <= 0) throw ConfigError("--trials must be positive");
  const ConstellationKind kind = parse_kind(c.kinds.front());
  if (kind != ConstellationKind::kCfsk && kind != ConstellationKind::kPsk) {
    throw ConfigError("the receiver simulates cfsk or psk alphabets only");
  }
  const double n_bar = c.n_bars.front();
  ProtocolParams p = ProtocolParams::psk(c.M, n_bar);
  if (kind == ConstellationKind::kCfsk) {
    std::tie(p.delta_omega_T, p.delta_theta) = cfsk_point(c, n_bar);
    c.dwt = p.delta_omega_T;
    c.dtheta = p.delta_theta;
  }
  p.validate();
  const ReceiverModel model = receiver_model(c);
  const SerEstimate est = estimate_ser(p, model, c.trials, c.seed, c.threads);

  Table t;
  t.columns = {"kind", "M", "nbar", "dwt", "dtheta", "trials", "errors", "ser", "ser_lo", "ser_hi",
               "capped_trials", "cfsk_hb", "psk_hb"};
  std::vector<Cell> row{std::string(to_string(kind)), std::int64_t{c.M}, n_bar, p.delta_omega_T,
                        p.delta_theta, est.trials, est.errors, est.p_hat, est.ci95.low,
                        est.ci95.high, est.capped_trials,
                        helstrom_bound(Constellation::cfsk(p)).p_error,
                        psk_helstrom_circulant(c.M, n_bar).p_error};
  if (c.sql_trials > 0) {
    const BoundResult sql = sql_error_mc(Constellation::cfsk(p), c.sql_trials,
                                         stream_key(c.seed, 1, 0), c.threads);
    t.columns.insert(t.columns.end(), {"sql", "sql_ci95"});
    row.insert(row.end(), {sql.p_error, sql.ci95_halfwidth});
  }
  t.add_row(std::move(row));
  return {std::move(t), std::nullopt, std::nullopt};
}

Outcome cmd_sweep(RunConfig& c) {
  GridSpec grid = optimization_grid(c);
  if (grid.cells() > c.max_cells) {
    throw ConfigError("sweep has " + std::to_string(grid.cells()) + " cells, above --max-cells " +
                      std::to_string(c.max_cells) + "; coarsen the ranges or raise --max-cells");
  }
  const double n_bar = c.n_bars.front();
  SweepMap map;
  if (c.what == "hb") {
    map = sweep_hb_map(c.M, n_bar, grid, c.threads);
  } else if (c.what == "ser") {
    if (c.trials <= 0) throw ConfigError("--trials must be positive");
    map = sweep_ser_map(c.M, n_bar, grid, receiver_model(c), c.trials, c.seed, c.threads);
  } else {
    throw ConfigError("--what must be 'hb' or 'ser'");
  }
  MinimaOptions opts;
  opts.median_smooth = c.smooth;
  MinimaReport minima = find_minima(map, opts);
  Table t = map.to_table();
  return {std::move(t), std::move(map), std::move(minima)};
}

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.model = receiver_model(c);
  o.trials = c.trials;
  o.sql_trials = c.sql_trials;
  o.seed = c.seed;
  o.threads = c.threads;
  o.optimization_grid = optimization_grid(c);
  o.simulate = !c.no_sim;
  if (o.simulate && o.trials <= 0) throw ConfigError("--trials must be positive");
  if (o.sql_trials <= 0) throw ConfigError("--sql-trials must be positive");
  return o;
}

Outcome cmd_scan_energy(RunConfig& c) {
  Table t = scan_energy(c.M, parse_kinds(c.kinds), c.n_bars, scan_options(c));
  return {std::move(t), std::nullopt, std::nullopt};
}

Outcome cmd_scan_alphabet(RunConfig& c) {
  Table t = scan_alphabet(c.photons_per_bit, c.Ms, scan_options(c));
  return {std::move(t), std::nullopt, std::nullopt};
}

Outcome cmd_ratio_map(RunConfig& c) {
  const std::int64_t cells = static_cast<std::int64_t>(c.energies.size() * c.Ms.size());
  if (cells > c.max_cells) {
    throw ConfigError("ratio map has " + std::to_string(cells) + " cells, above --max-cells");
  }
  SweepMap map = hb_ratio_map(c.energies, c.Ms, c.per_bit ? EnergyUnit::kPerBit : EnergyUnit::kPerSymbol,
                              optimization_grid(c), c.threads);
  Table t = map.to_table();
  return {std::move(t), std::move(map), std::nullopt};
}

void emit(const RunConfig& c, const Outcome& outcome, double seconds, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.out.empty() && c.out != "-") {
    file.open(c.out);
    if (!file) throw ConfigError("cannot write to '" + c.out + "'");
    os = &file;
  }
  if (c.format == "csv") {
    write_csv(*os, outcome.table);
  } else {
    json results = {{"table", table_to_json(outcome.table)}};
    if (outcome.map) results["map"] = map_to_json(*outcome.map);
    if (outcome.minima) results["minima"] = minima_to_json(*outcome.minima);
    json doc = {{"schema_version", kSchemaVersion},
                {"command", c.command},
                {"config", to_json(c)},
                {"build_id", build_id()},
                {"results", std::move(results)},
                {"wall_clock_seconds", seconds}};
    *os << doc.dump(2) << '\n';
  }
  if (outcome.minima && !c.minima_out.empty()) {
    std::ofstream mf(c.minima_out);
    if (!mf) throw ConfigError("cannot write to '" + c.minima_out + "'");
    write_csv(mf, minima_table(*outcome.minima, outcome.map->grid));
  }
}

bool given(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Defaults that differ per subcommand and so cannot live in RunConfig.
void apply_command_defaults(RunConfig& c, const CLI::App& sub) {
  const std::string& cmd = c.command;
  if ((cmd == "bounds" || cmd == "scan-energy") && !given(sub, "--kind")) c.kinds = {"all"};
  if (cmd == "scan-energy" && !given(sub, "--nbar")) c.n_bars = {1, 2, 4, 6, 8, 10, 12};
  if (cmd == "ratio-map" && !given(sub, "--M")) c.Ms = {2, 4, 8, 16, 32, 64};
  if (cmd == "ser" && !given(sub, "--sql-trials")) c.sql_trials = 0;
}

int default_threads() {
  if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string(kThreadsEnv) + " must be a positive integer");
  }
  return omp_get_max_threads();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Bounds and Monte Carlo simulation for coherent frequency-shift-keying receivers",
               "cfsk"};
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (default: $CFSK_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Output file (default: stdout)");
    sub->add_option("--format", c.format, "csv or doc")
        ->check(CLI::IsMember({"csv", "doc"}))
        ->capture_default_str();
    sub->add_option("--dwt-range", c.dwt_range, "delta_omega_T grid start:stop:points")
        ->capture_default_str();
    sub->add_option("--dtheta-range", c.dtheta_range, "delta_theta grid start:stop:points")
        ->capture_default_str();
  };
  const auto model = [&](CLI::App* sub) {
    sub->add_option("--visibility", c.visibility, "Interference visibility")->capture_default_str();
    sub->add_option("--efficiency", c.efficiency, "Detector efficiency")->capture_default_str();
    sub->add_option("--transmittance", c.transmittance, "Signal transmittance of the splitter")
        ->capture_default_str();
    sub->add_option("--init-hypothesis", c.init_hypothesis, "fixed:<index> or random")
        ->capture_default_str();
    sub->add_option("--max-events", c.max_events, "Click cap per trial")->capture_default_str();
    sub->add_option("--trials", c.trials, "Monte Carlo trials per point")->capture_default_str();
  };
  const auto protocol = [&](CLI::App* sub) {
    sub->add_option("--M", c.M, "Alphabet size")->capture_default_str();
    sub->add_option("--dwt", c.dwt, "delta_omega_T (default: Helstrom optimum)");
    sub->add_option("--dtheta", c.dtheta, "delta_theta (default: Helstrom optimum)");
  };

  auto* bounds = app.add_subcommand("bounds", "Helstrom bound and heterodyne SQL per kind and energy");
  common(bounds);
  protocol(bounds);
  bounds->add_option("--kind", c.kinds, "cfsk, psk, qam16, ppm or all")->delimiter(',');
  bounds->add_option("--nbar", c.n_bars, "Mean photons per symbol (list)")->delimiter(',');
  bounds->add_option("--gram", c.gram, "CSV Gram matrix to bound instead of a named alphabet");
  bounds->add_option("--sql-trials", c.sql_trials, "SQL Monte Carlo trials (0 skips)")
      ->capture_default_str();

  auto* ser = app.add_subcommand("ser", "Simulated receiver symbol error rate");
  common(ser);
  protocol(ser);
  model(ser);
  ser->add_option("--kind", c.kinds, "cfsk or psk")->expected(1);
  ser->add_option("--nbar", c.n_bars, "Mean photons per symbol")->expected(1);
  ser->add_option("--sql-trials", c.sql_trials, "Also estimate the CFSK SQL (0 skips)");
  ser->add_option("--ref", c.ref, "Add dB columns relative to this column (e.g. psk_hb)");

  auto* sweep = app.add_subcommand("sweep", "HB or SER map over (delta_omega_T, delta_theta)");
  common(sweep);
  protocol(sweep);
  model(sweep);
  sweep->add_option("--nbar", c.n_bars, "Mean photons per symbol")->expected(1);
  sweep->add_option("--what", c.what, "hb or ser")->capture_default_str();
  sweep->add_option("--max-cells", c.max_cells, "Refuse grids larger than this")->capture_default_str();
  sweep->add_flag("--smooth", c.smooth, "3x3 median filter before locating minima");
  sweep->add_option("--minima-out", c.minima_out, "Also write the minima report as CSV");

  auto* scan_e = app.add_subcommand("scan-energy", "Error rates and bounds versus mean photon number");
  common(scan_e);
  protocol(scan_e);
  model(scan_e);
  scan_e->add_option("--kind", c.kinds, "Kinds to include (default all)")->delimiter(',');
  scan_e->add_option("--nbar", c.n_bars, "Mean photons per symbol (list)")->delimiter(',');
  scan_e->add_option("--sql-trials", c.sql_trials, "SQL Monte Carlo trials")->capture_default_str();
  scan_e->add_flag("--no-sim", c.no_sim, "Bounds only, skip receiver simulation");
  scan_e->add_option("--ref", c.ref, "Add dB columns relative to this column");

  auto* scan_a = app.add_subcommand("scan-alphabet", "CFSK vs PSK at fixed photons per bit");
  common(scan_a);
  model(scan_a);
  scan_a->add_option("--photons-per-bit", c.photons_per_bit, "Energy per bit")->capture_default_str();
  scan_a->add_option("--M", c.Ms, "Alphabet sizes (powers of two)")->delimiter(',');
  scan_a->add_option("--sql-trials", c.sql_trials, "SQL Monte Carlo trials")->capture_default_str();
  scan_a->add_flag("--no-sim", c.no_sim, "Bounds only, skip receiver simulation");
  scan_a->add_option("--ref", c.ref, "Add dB columns relative to this column");

  auto* ratio = app.add_subcommand("ratio-map", "Optimized CFSK HB over PSK HB per energy and M");
  common(ratio);
  ratio->add_option("--energies", c.energies, "Energy axis values")->delimiter(',');
  ratio->add_option("--M", c.Ms, "Alphabet sizes")->delimiter(',');
  ratio->add_flag("--per-bit", c.per_bit, "Energies are photons per bit");
  ratio->add_option("--max-cells", c.max_cells, "Refuse maps larger than this")->capture_default_str();

  std::vector<std::string> argv_storage{"cfsk"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    c.threads = default_threads();
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    apply_command_defaults(c, *sub);
    if (c.n_bars.empty()) throw ConfigError("--nbar needs at least one value");
    if (c.kinds.empty()) throw ConfigError("--kind needs at least one value");
    Outcome outcome;
    if (c.command == "bounds") {
      outcome = cmd_bounds(c);
    } else if (c.command == "ser") {
      outcome = cmd_ser(c);
    } else if (c.command == "sweep") {
      outcome = cmd_sweep(c);
    } else if (c.command == "scan-energy") {
      outcome = cmd_scan_energy(c);
    } else if (c.command == "scan-alphabet") {
      outcome = cmd_scan_alphabet(c);
    } else {
      outcome = cmd_ratio_map(c);
    }
    if (!c.ref.empty()) add_db_columns(outcome.table, c.ref);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(c, outcome, seconds, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace cfsk
