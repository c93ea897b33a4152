#include "ldspectra/workflows.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>
#include <variant>

#include "ldspectra/jc.hpp"
#include "ldspectra/perturbation.hpp"
#include "ldspectra/validation.hpp"

namespace ldspectra {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

using Cell = std::variant<std::monostate, double, long long, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<Row> rows;
};

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }
Cell integer(long long v) { return Cell(v); }

std::string csv_cell(const Cell& c) {
  struct Visit {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(Visit{}, c);
}

json json_cell(const Cell& c) {
  struct Visit {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double d) const { return std::isfinite(d) ? json(d) : json(nullptr); }
    json operator()(long long i) const { return i; }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visit{}, c);
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const Row& r : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = json_cell(r[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", t.header}, {"rows", rows}};
}

// Collects tables and a JSON body; writes CSV tables (csv format) and one
// <command>.json per run. Every file carries the resolved config.
class Report {
 public:
  Report(const RunConfig& cfg, std::string command, const FockTruncation* trunc)
      : cfg_(cfg), command_(std::move(command)), config_(cfg.to_json()) {
    if (trunc) config_["truncation"] = {{"n_max", trunc->n_max()}, {"n_guard", trunc->n_guard()}};
  }

  json& body() { return body_; }
  void add(Table t) { tables_.push_back(std::move(t)); }

  void write(std::ostream& log) const {
    json doc;
    doc["command"] = command_;
    doc["config"] = config_;
    for (const auto& [k, v] : body_.items()) doc[k] = v;
    if (cfg_.format == OutputFormat::Csv) {
      json files = json::array();
      for (const Table& t : tables_) {
        const fs::path p = cfg_.out_dir / (command_ + "_" + t.name + ".csv");
        write_csv(p, t);
        files.push_back(p.filename().string());
        log << "wrote " << p.string() << "\n";
      }
      doc["tables"] = files;
    } else {
      json tables = json::object();
      for (const Table& t : tables_) tables[t.name] = table_json(t);
      doc["tables"] = tables;
    }
    const fs::path p = cfg_.out_dir / (command_ + ".json");
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << doc.dump(2) << "\n";
    log << "wrote " << p.string() << "\n";
  }

 private:
  void write_csv(const fs::path& p, const Table& t) const {
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << "# config: " << config_.dump() << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
    f << "\n";
    for (const Row& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << csv_cell(r[i]);
      f << "\n";
    }
  }

  const RunConfig& cfg_;
  std::string command_;
  json config_;
  json body_ = json::object();
  std::vector<Table> tables_;
};

struct SweepPoint {
  double K;
  double epsilon;
};

std::vector<SweepPoint> sweep_points(const RunConfig& cfg) {
  const std::vector<double> ks = cfg.sweep_K.empty() ? std::vector<double>{cfg.params.K} : cfg.sweep_K;
  const std::vector<double> es =
      cfg.sweep_epsilon.empty() ? std::vector<double>{cfg.params.epsilon} : cfg.sweep_epsilon;
  std::vector<SweepPoint> pts;
  for (double k : ks)
    for (double e : es) pts.push_back({k, e});
  return pts;
}

ModelParams at_point(const RunConfig& cfg, const SweepPoint& pt) {
  ModelParams q = cfg.params;
  q.K = pt.K;
  q.epsilon = pt.epsilon;
  return q;
}

// Per-point output: rows per table name, a JSON summary, or an error.
struct PointResult {
  std::map<std::string, std::vector<Row>> rows;
  json summary = json::object();
  std::string error;
};

template <class F>
std::vector<PointResult> run_sweep(const RunConfig& cfg, const std::vector<SweepPoint>& pts, F&& work) {
  std::vector<PointResult> out(pts.size());
  auto one = [&](std::size_t i) {
    const ModelParams q = at_point(cfg, pts[i]);
    try {
      out[i] = work(q);
    } catch (const std::exception& e) {
      out[i] = PointResult{};
      out[i].error = e.what();
    }
    out[i].summary["K"] = pts[i].K;
    out[i].summary["epsilon"] = pts[i].epsilon;
  };
  const unsigned workers = std::min<std::size_t>(std::max(1u, cfg.threads), pts.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < pts.size(); ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < pts.size(); i = next++) one(i);
    });
  }
  return out;
}

// Merges per-point rows into tables in config order; returns the error count.
int merge(Report& rep, std::vector<Table> tables, const std::vector<PointResult>& results, std::ostream& log) {
  int errors = 0;
  json points = json::array();
  for (const PointResult& r : results) {
    json s = r.summary;
    if (!r.error.empty()) {
      s["error"] = r.error;
      ++errors;
      log << "error at K = " << format_double(r.summary["K"].get<double>())
          << ", epsilon = " << format_double(r.summary["epsilon"].get<double>()) << ": " << r.error << "\n";
    }
    points.push_back(std::move(s));
    for (Table& t : tables) {
      auto it = r.rows.find(t.name);
      if (it != r.rows.end()) t.rows.insert(t.rows.end(), it->second.begin(), it->second.end());
    }
  }
  rep.body()["points"] = points;
  for (Table& t : tables) rep.add(std::move(t));
  return errors;
}

json regime_json(const ModelParams& q) {
  if (!q.resonant()) return {{"regime", nullptr}, {"note", "detuned: regime taxonomy needs delta = 0"}};
  const RegimeReport r = classify_regime(q);
  return {{"regime", std::string(to_string(r.regime))},
          {"r", r.r},
          {"gamma", r.gamma ? json(*r.gamma) : json(nullptr)},
          {"perturbative", r.perturbative},
          {"m", r.m},
          {"delta_frac", r.delta_frac},
          {"notes", r.notes}};
}

// ---------------------------------------------------------------- spectrum

PointResult spectrum_point(const RunConfig& cfg, const ModelParams& q) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  PointResult res;
  res.summary["regime"] = regime_json(q);
  const LevelMatch match = exact_levels(q, trunc);
  const int top = std::min(cfg.n_levels, trunc.highest_guarded_level());
  double max_err = 0.0;
  int ambiguous = 0;
  for (const SpectralLine& line : spectral_lines(q, top)) {
    const auto lvl = match.find(line.n, line.s);
    Row row{q.K, q.epsilon, integer(line.n), integer(line.s), line.E0, line.E2_times_eps2, line.E_total,
            opt(line.E_star)};
    if (lvl) {
      const double err = std::abs(line.E_total - lvl->energy);
      max_err = std::max(max_err, err);
      row.insert(row.end(), {lvl->energy, err, lvl->overlap, std::string("matched")});
    } else {
      ++ambiguous;
      row.insert(row.end(), {Cell(), Cell(), Cell(), std::string("ambiguous")});
    }
    res.rows["levels"].push_back(std::move(row));
  }
  res.summary["levels"] = 2 * (top + 1);
  res.summary["ambiguous"] = ambiguous;
  res.summary["max_abs_err"] = max_err;
  if (cfg.n_levels > top) {
    res.summary["notice"] = "levels above n = " + std::to_string(top) + " lie in the guard band and are omitted";
  }
  return res;
}

// Per-level log-log slopes over the epsilon sweep, one block per K.
Table spectrum_slopes(const Table& levels) {
  Table t{"slopes", {"K", "n", "s", "slope_E0", "slope_E_total", "points"}, {}};
  struct Series {
    std::vector<double> eps, d0, d2;
  };
  std::vector<std::pair<std::tuple<double, long long, long long>, Series>> order;
  std::map<std::tuple<double, long long, long long>, std::size_t> where;
  for (const Row& r : levels.rows) {
    if (std::get<std::string>(r[11]) != "matched") continue;
    const double eps = std::get<double>(r[1]);
    const double e_exact = std::get<double>(r[8]);
    const double d0 = std::abs(e_exact - std::get<double>(r[4]));
    const double d2 = std::abs(e_exact - std::get<double>(r[6]));
    if (!(eps > 0.0) || !(d0 > 0.0) || !(d2 > 0.0)) continue;
    const auto key = std::make_tuple(std::get<double>(r[0]), std::get<long long>(r[2]), std::get<long long>(r[3]));
    auto [it, fresh] = where.emplace(key, order.size());
    if (fresh) order.push_back({key, {}});
    Series& s = order[it->second].second;
    s.eps.push_back(eps);
    s.d0.push_back(d0);
    s.d2.push_back(d2);
  }
  for (const auto& [key, s] : order) {
    if (s.eps.size() < 2) continue;
    t.rows.push_back({std::get<0>(key), integer(std::get<1>(key)), integer(std::get<2>(key)),
                      loglog_slope(s.eps, s.d0), loglog_slope(s.eps, s.d2), integer(static_cast<long long>(s.eps.size()))});
  }
  return t;
}

// ---------------------------------------------------------------- regimes

PointResult regimes_point(const RunConfig& cfg, const ModelParams& q) {
  if (!q.resonant()) throw ResonanceRequired("regime classification needs delta = 0");
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  PointResult res;
  const RegimeReport rep = classify_regime(q);
  res.summary["regime"] = regime_json(q);

  const int top = std::min(cfg.n_levels, trunc.highest_guarded_level());
  std::vector<SpectralLine> lines;
  try {
    lines = spectral_lines(q, top);
  } catch (const SmallDenominator& e) {
    res.summary["doublet_notice"] = e.what();
  }
  const LevelMatch match = exact_levels(q, trunc);
  const std::string regime(to_string(rep.regime));
  for (const Doublet& d : find_doublets(lines, q)) {
    const auto lo = match.find(d.lower.n, d.lower.s);
    const auto hi = match.find(d.upper.n, d.upper.s);
    res.rows["doublets"].push_back({q.K, q.epsilon, regime, integer(d.lower.n), integer(d.lower.s),
                                    integer(d.upper.n), integer(d.upper.s), d.separation,
                                    lo && hi ? Cell(hi->energy - lo->energy) : Cell()});
  }

  const int n_spacings = std::max(1, std::min(5, top));
  const LadderSpacings sp = ladder_spacings(q, trunc, n_spacings);
  for (int s : {-1, +1}) {
    const auto& v = s < 0 ? sp.minus : sp.plus;
    for (std::size_t n = 0; n < v.size(); ++n) {
      res.rows["spacings"].push_back({q.K, q.epsilon, integer(s), integer(static_cast<long long>(n)), opt(v[n])});
    }
  }
  return res;
}

// ---------------------------------------------------------------- evolve

PointResult evolve_point(const RunConfig& cfg, const ModelParams& q, const AmplitudeSet& amps) {
  const FockTruncation trunc = cfg.truncation(kEvolveNMax);
  const double t_end = cfg.resolved_t_end();
  const std::vector<double> grid = t_end == 0.0 ? std::vector<double>{0.0} : uniform_grid(t_end, cfg.steps);

  std::vector<Trajectory> orders;
  for (int k = 0; k <= cfg.order; ++k) orders.push_back(assemble_trajectory(q, trunc, amps, grid, k, cfg.path));
  const Vector psi0 = orders.back().states.front();

  Trajectory exact;
  try {
    exact = integrate_Ht(q, trunc, psi0, grid, cfg.tol);
  } catch (const StepFailure& e) {
    throw StepFailure(std::string(e.what()) + " (K = " + format_double(q.K) + ", epsilon = " +
                      format_double(q.epsilon) + ", t_end = " + format_double(t_end) + ")");
  }
  const Matrix u2 = unitary_U2(q.eta(), trunc).matrix();
  const Trajectory chain = map_to_lab(q, trunc, evolve_reduced(q, trunc, u2.adjoint() * psi0, grid));
  const FidelityReport chain_fid = fidelity(exact, chain);

  PointResult res;
  std::vector<FidelityReport> fids;
  for (const Trajectory& tr : orders) fids.push_back(fidelity(exact, tr));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Row row{q.K, q.epsilon, grid[i], exact.sz[i], exact.n_mean[i], exact.norm[i]};
    for (std::size_t k = 0; k < orders.size(); ++k) {
      row.insert(row.end(), {orders[k].sz[i], orders[k].n_mean[i], fids[k].per_time[i]});
    }
    row.push_back(chain_fid.per_time[i]);
    res.rows["trajectory"].push_back(std::move(row));
  }
  auto dump_state = [&](const std::string& which, const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) {
      if (v(i) == Complex(0.0)) continue;
      res.rows["state"].push_back({q.K, q.epsilon, which, integer(i / 2), std::string(i % 2 ? "e" : "g"), v(i).real(),
                                   v(i).imag()});
    }
  };
  dump_state("initial", psi0);
  dump_state("final", exact.states.back());

  json f = json::object();
  for (std::size_t k = 0; k < fids.size(); ++k) {
    f["order" + std::to_string(k)] = {{"min", fids[k].min}, {"mean", fids[k].mean}};
  }
  res.summary["fidelity_vs_exact"] = f;
  res.summary["chain_fidelity"] = {{"min", chain_fid.min}, {"mean", chain_fid.mean}};
  res.summary["rhs_evaluations"] = exact.rhs_evaluations;
  double drift = 0.0;
  for (double n : exact.norm) drift = std::max(drift, std::abs(n - 1.0));
  res.summary["max_norm_drift"] = drift;
  return res;
}

// ---------------------------------------------------------------- jc

PointResult jc_point(const RunConfig& cfg, const ModelParams& q) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  PointResult res;
  const JCBlockSet blocks = jc_blocks(q, trunc);
  Eigen::SelfAdjointEigenSolver<Matrix> dense(guarded_block(build_H_JC(q, trunc).matrix(), trunc),
                                              Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = dense.eigenvalues();
  auto nearest = [&](double e) { return (ev.array() - e).abs().minCoeff(); };

  double worst_closed = 0.0, worst_dense = 0.0;
  const int top = std::min(cfg.n_levels, int(blocks.blocks.size()));
  {
    const JCLevels l = jc_eigenvalues(q, 0);
    const double dc = std::abs(blocks.ground - l.lower);
    const double dd = nearest(blocks.ground);
    worst_closed = std::max(worst_closed, dc);
    worst_dense = std::max(worst_dense, dd);
    res.rows["levels"].push_back(
        {q.K, q.epsilon, integer(0), l.lower, Cell(), blocks.ground, Cell(), dc, dd});
  }
  for (int n = 1; n <= top; ++n) {
    const JCBlock& b = blocks.blocks[std::size_t(n - 1)];
    const JCLevels l = jc_eigenvalues(q, n);
    const double dc = std::max(std::abs(b.eigenvalues(0) - l.lower), std::abs(b.eigenvalues(1) - *l.upper));
    const double dd = std::max(nearest(b.eigenvalues(0)), nearest(b.eigenvalues(1)));
    worst_closed = std::max(worst_closed, dc);
    worst_dense = std::max(worst_dense, dd);
    res.rows["levels"].push_back(
        {q.K, q.epsilon, integer(n), l.lower, *l.upper, b.eigenvalues(0), b.eigenvalues(1), dc, dd});
  }
  res.summary["closed_vs_block_max"] = worst_closed;
  res.summary["block_vs_dense_max"] = worst_dense;
  res.summary["off_block_max"] = blocks.off_block_max;

  const AlgebraReport alg = verify_dynamical_algebra(q, trunc);
  json checks = json::array();
  for (const AlgebraCheck& c : alg.checks) {
    checks.push_back({{"identity", c.name}, {"deviation", c.deviation}, {"pass", c.pass}});
    res.rows["algebra"].push_back({q.K, q.epsilon, c.name, c.deviation, integer(c.pass)});
  }
  res.summary["algebra"] = {{"all_pass", alg.all_pass()}, {"checks", checks}};

  for (int n = 0; n <= std::min(cfg.n_levels, 10); ++n) {
    for (int s : {-1, +1}) {
      const ResidualDecomposition r = decompose_R_state(q, n, s);
      res.rows["residual"].push_back({q.K, q.epsilon, integer(n), integer(s), r.spin_form_difference,
                                      r.d_form_difference, r.rotating_weight, r.counter_rotating_weight});
    }
  }
  return res;
}

void print_check(std::ostream& log, const CheckResult& c) {
  const char* tag = c.informational ? "INFO" : c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL";
  log << "[" << tag << "] " << c.id << ": " << c.description;
  if (!c.detail.empty()) log << " -- " << c.detail;
  log << "\n";
  if (c.skipped) log << "notice: check " << c.id << " " << c.detail << "\n";
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  Report rep(cfg, "spectrum", &trunc);
  const auto pts = sweep_points(cfg);
  const auto results = run_sweep(cfg, pts, [&](const ModelParams& q) { return spectrum_point(cfg, q); });
  Table levels{"levels",
               {"K", "epsilon", "n", "s", "E0", "E2_eps2", "E_total", "E_star", "E_exact", "abs_err", "overlap",
                "status"},
               {}};
  const int errors = merge(rep, {levels}, results, log);
  if (cfg.sweep_epsilon.size() >= 2) {
    Table merged{"levels", levels.header, {}};
    for (const PointResult& r : results) {
      if (auto it = r.rows.find("levels"); it != r.rows.end()) {
        merged.rows.insert(merged.rows.end(), it->second.begin(), it->second.end());
      }
    }
    rep.add(spectrum_slopes(merged));
  }
  int ambiguous = 0;
  for (const PointResult& r : results) ambiguous += r.summary.value("ambiguous", 0);
  if (ambiguous) log << "notice: " << ambiguous << " level(s) flagged ambiguous (no exact eigenvector with overlap > 0.5)\n";
  rep.write(log);
  return errors ? 1 : 0;
}

int cmd_regimes(const RunConfig& cfg, std::ostream& log) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  Report rep(cfg, "regimes", &trunc);
  const auto results =
      run_sweep(cfg, sweep_points(cfg), [&](const ModelParams& q) { return regimes_point(cfg, q); });
  const int errors = merge(rep,
                           {{"doublets",
                             {"K", "epsilon", "regime", "lower_n", "lower_s", "upper_n", "upper_s", "separation",
                              "separation_exact"},
                             {}},
                            {"spacings", {"K", "epsilon", "s", "n", "spacing_exact"}, {}}},
                           results, log);
  for (const PointResult& r : results) {
    if (r.error.empty()) {
      log << "K = " << format_double(r.summary["K"].get<double>())
          << ", epsilon = " << format_double(r.summary["epsilon"].get<double>()) << ": "
          << r.summary["regime"]["regime"].get<std::string>() << "\n";
    }
  }
  rep.write(log);
  return errors ? 1 : 0;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  const FockTruncation trunc = cfg.truncation(kEvolveNMax);
  Report rep(cfg, "evolve", &trunc);
  const AmplitudeSet amps = cfg.amps ? read_amplitudes(*cfg.amps) : AmplitudeSet{{BasisIndex{0, -1}, 1.0}};
  for (const auto& [b, _] : amps) {
    if (b.n > trunc.highest_guarded_level()) {
      throw ConfigError("amplitude at n = " + std::to_string(b.n) + " lies beyond the guarded range");
    }
  }
  json a = json::array();
  for (const auto& [b, z] : amps) a.push_back({{"n", b.n}, {"s", b.s}, {"re", z.real()}, {"im", z.imag()}});
  rep.body()["amplitudes"] = a;

  std::vector<std::string> header{"K", "epsilon", "t", "sz_exact", "n_exact", "norm_exact"};
  for (int k = 0; k <= cfg.order; ++k) {
    const std::string o = std::to_string(k);
    header.insert(header.end(), {"sz_order" + o, "n_order" + o, "fidelity_order" + o});
  }
  header.push_back("fidelity_chain");
  const auto results =
      run_sweep(cfg, sweep_points(cfg), [&](const ModelParams& q) { return evolve_point(cfg, q, amps); });
  const int errors = merge(
      rep, {{"trajectory", header, {}}, {"state", {"K", "epsilon", "which", "n", "spin", "re", "im"}, {}}}, results, log);
  rep.write(log);
  return errors ? 1 : 0;
}

int cmd_jc(const RunConfig& cfg, std::ostream& log) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  Report rep(cfg, "jc", &trunc);
  const auto results = run_sweep(cfg, sweep_points(cfg), [&](const ModelParams& q) { return jc_point(cfg, q); });
  const int errors = merge(
      rep,
      {{"levels",
        {"K", "epsilon", "n", "E_JC_minus", "E_JC_plus", "block_minus", "block_plus", "closed_vs_block",
         "block_vs_dense"},
        {}},
       {"algebra", {"K", "epsilon", "identity", "deviation", "pass"}, {}},
       {"residual",
        {"K", "epsilon", "n", "s", "spin_form_diff", "d_form_diff", "rotating_weight", "counter_rotating_weight"},
        {}}},
      results, log);
  if (cfg.sweep_epsilon.size() >= 2) {
    // n = 1 splitting against epsilon, one fit per K.
    Table split{"splitting", {"K", "epsilon", "splitting_n1"}, {}};
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> series;
    for (const PointResult& r : results) {
      if (!r.error.empty()) continue;
      const auto& rows = r.rows.at("levels");
      if (rows.size() < 2) continue;
      const double K = std::get<double>(rows[1][0]);
      const double eps = std::get<double>(rows[1][1]);
      const double gap = std::get<double>(rows[1][4]) - std::get<double>(rows[1][3]);
      split.rows.push_back({K, eps, gap});
      series[K].first.push_back(eps);
      series[K].second.push_back(gap);
    }
    json slopes = json::array();
    for (const auto& [K, xy] : series) {
      if (xy.first.size() >= 2) slopes.push_back({{"K", K}, {"slope", fit_slope(xy.first, xy.second)}});
    }
    rep.body()["splitting_slope"] = slopes;
    rep.add(std::move(split));
  }
  rep.write(log);
  return errors ? 1 : 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const FockTruncation trunc = cfg.truncation(kSpectrumNMax);
  Report rep(cfg, "validate", &trunc);
  const ModelParams& p = cfg.params;
  const double eps = p.epsilon > 0.0 ? p.epsilon : 0.05;
  std::vector<CheckResult> checks;

  checks.push_back(check_algebra(trunc));
  {
    Matrix h = build_H_eta(p, trunc).matrix();
    if (cfg.corrupt_hamiltonian) h(0, 1) += Complex(1e-6, 0.0);
    checks.push_back(check_hermitian("hermitian", h));
  }
  checks.push_back(check_unitary_chain(p, trunc.n_max(), std::max(trunc.n_guard(), 15),
                                       std::min(trunc.n_max(), kEvolveNMax), 10.0));
  {
    ScalingOptions so;
    so.epsilons = cfg.scaling_epsilons;
    so.n_levels = cfg.scaling_levels;
    so.n_max = trunc.n_max();
    checks.push_back(check_scaling(p, so));
  }
  checks.push_back(check_first_order_energy(10, 20, 2024));
  checks.push_back(check_factorized_identity());
  checks.push_back(check_regimes(eps));
  {
    JCOptions jo;
    jo.epsilon = eps;
    jo.gate_d_form = false;
    checks.push_back(check_jc(jo));
  }
  {
    CheckResult info;
    info.id = "jc-d-form";
    info.description = "D-operator form of |R(n,s)> against the ladder form (informational)";
    info.informational = true;
    double worst = 0.0;
    for (double K : JCOptions{}.K_values) {
      ModelParams q;
      q.K = K;
      q.epsilon = eps;
      for (int n = 0; n <= 10; ++n)
        for (int s : {-1, +1}) worst = std::max(worst, decompose_R_state(q, n, s).d_form_difference);
    }
    info.detail = "max difference " + format_double(worst) + " (nonzero for s = +1 unless 2K = nu)";
    info.pass = true;
    checks.push_back(info);
  }
  checks.push_back(check_crossover(eps, 3));
  if (cfg.dynamics) checks.push_back(check_dynamics(0.01, 0.005));

  bool all = true;
  Table t{"checks", {"id", "status", "description", "detail", "seconds"}, {}};
  json arr = json::array();
  for (const CheckResult& c : checks) {
    print_check(log, c);
    const std::string status = c.informational ? "info" : c.skipped ? "skipped" : c.pass ? "pass" : "fail";
    if (!c.informational && !c.pass) all = false;
    t.rows.push_back({c.id, status, c.description, c.detail, c.seconds});
    arr.push_back({{"id", c.id}, {"status", status}, {"description", c.description}, {"detail", c.detail}});
  }
  log << (all ? "validate: all checks pass" : "validate: FAILED") << "\n";
  rep.body()["checks"] = arr;
  rep.body()["all_pass"] = all;
  rep.add(std::move(t));
  rep.write(log);
  return all ? 0 : 1;
}

}  // namespace ldspectra
