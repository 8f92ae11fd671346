#include "cli.hpp"

#include "CLI11.hpp"
#include "telewig/conditional_teleport.hpp"
#include "telewig/gain_optimizer.hpp"
#include "telewig/gaussian_channel.hpp"
#include "telewig/noisy_epr.hpp"
#include "telewig/oracle.hpp"
#include "telewig/phase_space.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace telewig::cli {
namespace {

using json = nlohmann::ordered_json;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw UsageError(fmt::format("{}: '{}' is not a finite number", what, text));
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const {
    std::vector<double> v;
    const double span = (stop - start) / step;
    if (span < -1e-9) return v;
    const auto n = static_cast<long>(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
  }
  bool single() const { return start == stop; }
  json to_json() const { return {{"start", start}, {"stop", stop}, {"step", step}}; }
};

// "a:b:step" or a single value.
Range parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const double v = parse_number(parts[0], what);
    return {v, v, 1.0};
  }
  if (parts.size() != 3) throw UsageError(fmt::format("{}: expected a:b:step, got '{}'", what, text));
  Range r{parse_number(parts[0], what), parse_number(parts[1], what), parse_number(parts[2], what)};
  if (r.step == 0.0) throw UsageError(fmt::format("{}: step must be nonzero", what));
  if (r.values().empty()) throw UsageError(fmt::format("{}: empty range '{}'", what, text));
  if (r.values().size() > 1000000) throw UsageError(fmt::format("{}: range too long", what));
  return r;
}

enum class GainMode { unity, optimal, fixed, ralph };
enum class RegionKind { none, disk, point, square };
enum class StateKind { fock1, sqfock1, attenuated };

struct RunConfig {
  std::string command;
  std::string kind;
  StateKind state = StateKind::fock1;
  double eta = 1.0;
  double sq_t = std::log(2.0) / 2.0;
  std::optional<Range> squeeze;
  bool squeeze_in_db = true;
  GainMode gain = GainMode::optimal;
  bool gain_given = false;
  double fixed_gain = 1.0;
  RegionKind region = RegionKind::none;
  double region_size = 0.0;
  std::optional<Range> noise_db;
  std::optional<Range> eta_range;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::size_t samples = 200000;
  double quad_tol = 1e-13;
  bool perturb = false;
  std::string out;
};

struct RawOptions {
  std::string state;
  std::string eta;
  std::string vsq_db;
  std::string r;
  std::string gain;
  std::string region;
  std::string noise_db;
  std::string eta_range;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::size_t samples = 200000;
  double quad_tol = 1e-13;
  bool perturb = false;
  std::string out;
};

const char* state_name(StateKind s) {
  switch (s) {
    case StateKind::fock1:
      return "fock1";
    case StateKind::sqfock1:
      return "sqfock1";
    case StateKind::attenuated:
      return "attenuated";
  }
  return "";
}

const char* gain_name(GainMode g) {
  switch (g) {
    case GainMode::unity:
      return "unity";
    case GainMode::optimal:
      return "optimal";
    case GainMode::fixed:
      return "fixed";
    case GainMode::ralph:
      return "ralph";
  }
  return "";
}

const char* region_name(RegionKind r) {
  switch (r) {
    case RegionKind::none:
      return "none";
    case RegionKind::disk:
      return "disk";
    case RegionKind::point:
      return "point";
    case RegionKind::square:
      return "square";
  }
  return "";
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.kind.empty()) j["kind"] = c.kind;
  j["state"] = {{"name", state_name(c.state)}, {"eta", c.eta}};
  if (c.state == StateKind::sqfock1) j["state"]["t"] = c.sq_t;
  if (c.squeeze) {
    j["squeezing"] = c.squeeze->to_json();
    j["squeezing"]["unit"] = c.squeeze_in_db ? "dB" : "r";
  }
  j["gain"] = {{"mode", gain_name(c.gain)}};
  if (c.gain == GainMode::fixed) j["gain"]["value"] = c.fixed_gain;
  j["region"] = {{"kind", region_name(c.region)}};
  if (c.region == RegionKind::disk || c.region == RegionKind::square) j["region"]["size"] = c.region_size;
  if (c.noise_db) j["noise_db"] = c.noise_db->to_json();
  if (c.eta_range) j["eta_range"] = c.eta_range->to_json();
  j["format"] = c.format;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["quad_tol"] = c.quad_tol;
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

void resolve_state(const RawOptions& raw, RunConfig& c) {
  if (!raw.eta.empty()) {
    c.eta = parse_number(raw.eta, "--eta");
    if (!(c.eta >= 0.0 && c.eta <= 1.0)) throw UsageError("--eta must lie in [0, 1]");
  }
  if (raw.state.empty()) {
    c.state = (c.eta < 1.0) ? StateKind::attenuated : StateKind::fock1;
    return;
  }
  const auto parts = split(raw.state, ':');
  if (parts.size() > 2) throw UsageError("--state: expected fock1, sqfock1[:t] or attenuated[:eta]");
  if (parts[0] == "fock1" && parts.size() == 1) {
    if (c.eta != 1.0) throw UsageError("--state fock1 conflicts with --eta < 1");
    c.state = StateKind::fock1;
  } else if (parts[0] == "sqfock1") {
    if (c.eta != 1.0) throw UsageError("--state sqfock1 conflicts with --eta < 1");
    c.state = StateKind::sqfock1;
    if (parts.size() == 2) c.sq_t = parse_number(parts[1], "--state sqfock1:t");
  } else if (parts[0] == "attenuated") {
    c.state = StateKind::attenuated;
    if (parts.size() == 2) {
      const double eta = parse_number(parts[1], "--state attenuated:eta");
      if (!raw.eta.empty() && eta != c.eta) throw UsageError("--state attenuated:eta conflicts with --eta");
      if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("attenuated eta must lie in [0, 1]");
      c.eta = eta;
    }
  } else {
    throw UsageError(fmt::format("--state: unknown state '{}'", raw.state));
  }
}

void resolve_gain(const std::string& text, RunConfig& c) {
  if (text.empty()) return;
  c.gain_given = true;
  if (text == "unity") {
    c.gain = GainMode::unity;
  } else if (text == "optimal") {
    c.gain = GainMode::optimal;
  } else if (text == "ralph") {
    c.gain = GainMode::ralph;
  } else if (text.rfind("G=", 0) == 0) {
    c.gain = GainMode::fixed;
    c.fixed_gain = parse_number(text.substr(2), "--gain G=<x>");
    if (!(c.fixed_gain >= 0.0)) throw UsageError("--gain G=<x> needs x >= 0");
  } else {
    throw UsageError(fmt::format("--gain: expected unity, optimal, ralph or G=<x>, got '{}'", text));
  }
}

void resolve_region(const std::string& text, RunConfig& c) {
  if (text.empty()) return;
  const auto parts = split(text, ':');
  if (parts[0] == "none" && parts.size() == 1) {
    c.region = RegionKind::none;
  } else if (parts[0] == "point" && parts.size() == 1) {
    c.region = RegionKind::point;
  } else if ((parts[0] == "disk" || parts[0] == "square") && parts.size() == 2) {
    c.region = parts[0] == "disk" ? RegionKind::disk : RegionKind::square;
    c.region_size = parse_number(parts[1], "--region size");
    if (!(c.region_size > 0.0)) throw UsageError("--region size must be > 0");
  } else {
    throw UsageError(fmt::format("--region: expected none, disk:K, point or square:a, got '{}'", text));
  }
}

RunConfig resolve(const std::string& command, const std::string& kind, const RawOptions& raw) {
  RunConfig c;
  c.command = command;
  c.kind = kind;
  resolve_state(raw, c);
  if (!raw.vsq_db.empty() && !raw.r.empty()) throw UsageError("give either --vsq-db or --r, not both");
  if (!raw.vsq_db.empty()) {
    c.squeeze = parse_range(raw.vsq_db, "--vsq-db");
    for (double v : c.squeeze->values()) {
      if (v > 0.0) throw UsageError("--vsq-db values must be <= 0");
    }
  } else if (!raw.r.empty()) {
    c.squeeze = parse_range(raw.r, "--r");
    c.squeeze_in_db = false;
    for (double v : c.squeeze->values()) {
      if (v < 0.0) throw UsageError("--r values must be >= 0");
    }
  }
  resolve_gain(raw.gain, c);
  resolve_region(raw.region, c);
  if (!raw.noise_db.empty()) {
    c.noise_db = parse_range(raw.noise_db, "--noise-db");
    for (double v : c.noise_db->values()) {
      if (v < 0.0) throw UsageError("--noise-db values must be >= 0");
    }
  }
  if (!raw.eta_range.empty()) c.eta_range = parse_range(raw.eta_range, "--eta-range");
  if (raw.format != "csv" && raw.format != "json") throw UsageError("--format must be csv or json");
  c.format = raw.format;
  c.seed = raw.seed;
  c.samples = raw.samples;
  c.quad_tol = raw.quad_tol;
  c.perturb = raw.perturb;
  c.out = raw.out;
  return c;
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
};

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  return fmt::format("{:.10g}", v + 0.0);
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        os << format_number(*d);
      } else {
        os << std::get<std::string>(row[i]);
      }
    }
    os << '\n';
  }
}

void write_json(const Table& t, const RunConfig& c, std::ostream& os) {
  json j;
  j["config"] = config_json(c);
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        // round-trip through the 10-digit text form, as in CSV
        r[t.columns[i]] = std::isfinite(*d) ? json(std::stod(format_number(*d))) : json(nullptr);
      } else {
        r[t.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["notes"] = t.notes;
  os << j.dump(2) << '\n';
}

// Rows computed concurrently; output order follows the grid index.
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, const std::function<std::vector<Cell>(std::size_t)>& fn) {
  std::vector<std::vector<Cell>> rows(n);
  const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](std::size_t t) {
    try {
      for (std::size_t i = t; i < n; i += threads) rows[i] = fn(i);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

// Points where a quantity is undefined (e.g. no squeezing) become empty cells.
template <class F>
double defined_or_nan(F&& f) {
  try {
    return f();
  } catch (const std::domain_error&) {
    return kNaN;
  } catch (const std::invalid_argument&) {
    return kNaN;
  }
}

std::vector<double> squeeze_grid(const RunConfig& c) {
  const Range r = c.squeeze.value_or(Range{-15.0, 0.0, 0.5});
  return r.values();
}

SqueezeSpec squeeze_at(const RunConfig& c, double v) {
  return c.squeeze_in_db ? SqueezeSpec::from_db(v) : SqueezeSpec::from_r(v);
}

double single_noise_db(const RunConfig& c) {
  if (!c.noise_db) return 0.0;
  if (!c.noise_db->single()) throw UsageError("--noise-db takes a single value for this command");
  return c.noise_db->start;
}

double resolve_unconditional_gain(const RunConfig& c, double r) {
  switch (c.gain) {
    case GainMode::unity:
      return 1.0;
    case GainMode::fixed:
      return c.fixed_gain;
    case GainMode::ralph:
      return ralph_gain(r);
    case GainMode::optimal:
      return c.state == StateKind::attenuated ? optimal_gain_attenuated(r, c.eta).x : optimal_gain(r);
  }
  return kNaN;
}

Table sweep_unconditional(const RunConfig& c) {
  if (single_noise_db(c) != 0.0) throw UsageError("unconditional sweeps assume a pure resource; drop --noise-db");
  Table t;
  t.columns = {"vsq_db", "r", "gain", "w_origin"};
  const auto grid = squeeze_grid(c);
  t.rows = parallel_rows(grid.size(), [&](std::size_t i) -> std::vector<Cell> {
    const auto sq = squeeze_at(c, grid[i]);
    const double r = sq.r();
    const double g = defined_or_nan([&] { return resolve_unconditional_gain(c, r); });
    const double w = defined_or_nan([&] {
      if (c.state == StateKind::sqfock1) {
        return origin_squeezed_fock1(build_map(compensating_params(sq, c.sq_t, g)), c.sq_t);
      }
      return origin_symmetric(r, g, c.eta);
    });
    return {sq.db(), r, g, w};
  });
  if (c.state == StateKind::sqfock1) t.notes.push_back("squeezed input teleported with the compensating protocol");
  return t;
}

Table sweep_disk(const RunConfig& c) {
  if (single_noise_db(c) != 0.0) throw UsageError("disk post-selection assumes a pure resource; drop --noise-db");
  if (c.state == StateKind::sqfock1) throw UsageError("disk post-selection supports fock1 and attenuated states");
  const DiskRegion disk(c.region_size);
  Table t;
  t.columns = {"vsq_db", "r", "gain", "w_origin", "p_success"};
  const auto grid = squeeze_grid(c);
  t.rows = parallel_rows(grid.size(), [&](std::size_t i) -> std::vector<Cell> {
    const auto sq = squeeze_at(c, grid[i]);
    const double l = sq.lambda();
    const double p = success_prob_disk_attenuated(l, disk, c.eta);
    if (c.gain == GainMode::optimal) {
      const auto opt = optimize_disk(l, disk, c.eta);
      return {sq.db(), sq.r(), opt.gain, opt.origin, p};
    }
    const double g = defined_or_nan([&] { return resolve_unconditional_gain(c, sq.r()); });
    const double w = defined_or_nan([&] { return origin_disk_attenuated(l, g, disk, c.eta); });
    return {sq.db(), sq.r(), g, w, p};
  });
  return t;
}

Table sweep_point(const RunConfig& c) {
  if (c.state == StateKind::sqfock1) throw UsageError("point post-selection supports fock1 and attenuated states");
  const double noise = noise_from_db(single_noise_db(c));
  Table t;
  t.columns = {"vsq_db", "r", "w_origin", "p_density"};
  const auto grid = squeeze_grid(c);
  t.rows = parallel_rows(grid.size(), [&](std::size_t i) -> std::vector<Cell> {
    const auto sq = squeeze_at(c, grid[i]);
    const double w = defined_or_nan([&] { return origin_point_attenuated(NoisyEprSpec::from_noise(sq.vsq(), noise), c.eta); });
    const double p = defined_or_nan(
        [&] { return density_attenuated(0.0, NoisyEprSpec::from_noise(sq.vsq(), noise).mean_photons(), c.eta); });
    return {sq.db(), sq.r(), w, p};
  });
  t.notes.push_back("point acceptance: p_density is the outcome density at beta = 0 (measure d^2 beta / pi)");
  return t;
}

Table sweep_square(const RunConfig& c) {
  if (c.state != StateKind::fock1) throw UsageError("square post-selection supports the fock1 state only");
  const double noise = noise_from_db(single_noise_db(c));
  const SquareRegion square(c.region_size);
  Table t;
  t.columns = {"vsq_db", "r", "gain", "w_origin", "p_success"};
  const auto grid = squeeze_grid(c);
  t.rows = parallel_rows(grid.size(), [&](std::size_t i) -> std::vector<Cell> {
    const auto sq = squeeze_at(c, grid[i]);
    std::optional<NoisyEprSpec> spec;
    try {
      spec = NoisyEprSpec::from_noise(sq.vsq(), noise);
    } catch (const std::invalid_argument&) {
      return {sq.db(), sq.r(), kNaN, kNaN, kNaN};
    }
    const double p = success_prob_square(square, spec->mean_photons());
    double g = 1.0;
    double w = kNaN;
    if (c.gain == GainMode::optimal) {
      const auto opt = minimize_bounded([&](double x) { return origin_square_fock1(*spec, x, square); }, 0.0, 2.0, 1e-12);
      g = opt.x;
      w = opt.value;
    } else {
      g = defined_or_nan([&] { return resolve_unconditional_gain(c, sq.r()); });
      w = defined_or_nan([&] { return origin_square_fock1(*spec, g, square); });
    }
    return {sq.db(), sq.r(), g, w, p};
  });
  return t;
}

Table cmd_sweep(const RunConfig& c) {
  switch (c.region) {
    case RegionKind::none:
      return sweep_unconditional(c);
    case RegionKind::disk:
      return sweep_disk(c);
    case RegionKind::point:
      return sweep_point(c);
    case RegionKind::square:
      return sweep_square(c);
  }
  throw UsageError("unknown region");
}

// ---------------------------------------------------------------------------
// Thresholds

Table threshold_table1(const RunConfig& c) {
  const Range noise = c.noise_db.value_or(Range{1.0, 5.0, 1.0});
  Table t;
  t.columns = {"noise_db", "vth", "vth_db"};
  for (double db : noise.values()) {
    const auto th = threshold_point(c.eta, noise_from_db(db));
    t.rows.push_back({db, th.vsq, th.db()});
  }
  const auto inf = threshold_point_asymptote(c.eta);
  t.rows.push_back({std::string("inf"), inf.vsq, inf.db()});
  t.notes.push_back("point post-selection; last row is the infinite-noise limit");
  return t;
}

Table threshold_table2(const RunConfig& c) {
  if (c.state != StateKind::fock1) throw UsageError("table2 is defined for the fock1 state");
  if (c.gain_given && (c.gain == GainMode::optimal || c.gain == GainMode::ralph)) {
    throw UsageError("table2 uses a fixed gain; pass --gain unity or --gain G=<x>");
  }
  const double g = c.gain == GainMode::fixed ? c.fixed_gain : 1.0;
  const double a = c.region == RegionKind::square ? c.region_size : 0.3;
  if (c.region != RegionKind::square && c.region != RegionKind::none) throw UsageError("table2 needs --region square:a");
  const Range noise = c.noise_db.value_or(Range{0.0, 5.0, 1.0});
  const auto values = noise.values();
  Table t;
  t.columns = {"noise_db", "vth", "vth_db"};
  t.rows = parallel_rows(values.size(), [&](std::size_t i) -> std::vector<Cell> {
    const auto th = threshold_square(noise_from_db(values[i]), g, SquareRegion(a));
    return {values[i], th.vsq, th.db()};
  });
  t.notes.push_back(fmt::format("square half-side {}, gain fixed at G = {}; other gains via --gain G=<x>",
                                format_number(a), format_number(g)));
  return t;
}

Table threshold_fig6(const RunConfig& c, bool single) {
  const Range etas = single ? Range{c.eta, c.eta, 1.0} : c.eta_range.value_or(Range{0.51, 1.0, 0.01});
  Table t;
  t.columns = {"eta", "r_th_optimal", "vth_optimal_db", "r_th_unity", "vth_unity_db", "gap_db"};
  for (double eta : etas.values()) {
    const auto th = threshold_unconditional(eta);
    t.rows.push_back({eta, th.r_optimal_gain, th.db_optimal_gain(), th.r_unity_gain, th.db_unity_gain(),
                      th.db_optimal_gain() - th.db_unity_gain()});
  }
  return t;
}

Table threshold_disk(const RunConfig& c) {
  const double k = c.region == RegionKind::disk ? c.region_size : 0.3;
  if (c.region != RegionKind::disk && c.region != RegionKind::none) throw UsageError("disk threshold needs --region disk:K");
  const double r = threshold_disk_r(c.eta, DiskRegion(k));
  Table t;
  t.columns = {"eta", "k", "r_th", "vth_db"};
  t.rows.push_back({c.eta, k, r, SqueezeSpec::from_r(r).db()});
  return t;
}

Table threshold_crossover(const RunConfig& c) {
  const double r = gain_crossover_r(c.eta);
  Table t;
  t.columns = {"eta", "r", "vsq_db"};
  t.rows.push_back({c.eta, r, SqueezeSpec::from_r(r).db()});
  return t;
}

Table cmd_threshold(const RunConfig& c) {
  if (c.kind == "table1") return threshold_table1(c);
  if (c.kind == "table2") return threshold_table2(c);
  if (c.kind == "fig6") return threshold_fig6(c, false);
  if (c.kind == "unconditional") return threshold_fig6(c, true);
  if (c.kind == "disk") return threshold_disk(c);
  if (c.kind == "crossover") return threshold_crossover(c);
  throw UsageError(fmt::format("threshold: unknown kind '{}'", c.kind));
}

// ---------------------------------------------------------------------------
// Verification

struct Suite {
  std::string name;
  int points = 0;
  double max_dev = 0.0;
  double tolerance = 0.0;

  void add(double got, double want) {
    ++points;
    max_dev = std::max(max_dev, std::abs(got - want));
  }
  void add_z(double got, double want, double sigma) {
    ++points;
    max_dev = std::max(max_dev, std::abs(got - want) / sigma);
  }
  bool pass() const { return points > 0 && max_dev <= tolerance; }
};

std::vector<Suite> run_verification(const RunConfig& c) {
  QuadratureOptions q;
  q.tolerance = c.quad_tol;
  const double bump = c.perturb ? 1e-3 : 0.0;
  std::vector<Suite> suites;

  Suite channel{"channel_quadrature", 0, 0.0, 1e-6};
  for (double r : {0.1, 0.4, 0.8, 1.2, 1.6}) {
    for (double g : {0.5, 0.8, 1.0, 1.2, 1.5}) {
      const auto map = build_map(TeleportParams::symmetric(SqueezeSpec::from_r(r), g));
      channel.add(origin_via_quadrature(map, make_fock1(), q), origin_symmetric(r, g) + bump);
      channel.add(origin_via_quadrature(map, make_attenuated(0.6304), q), origin_symmetric(r, g, 0.6304));
    }
  }
  suites.push_back(channel);

  Suite squeezed{"squeezed_quadrature", 0, 0.0, 1e-6};
  for (double r : {0.2, 0.6, 1.1}) {
    for (double t : {-0.5, 0.2, std::log(2.0) / 2.0, 0.7}) {
      const auto map = build_map(compensating_params(SqueezeSpec::from_r(r), t, 1.1));
      squeezed.add(origin_via_quadrature(map, make_squeezed_fock1(t), q), origin_squeezed_fock1(map, t));
    }
  }
  suites.push_back(squeezed);

  Suite parity{"fock_parity", 0, 0.0, 1e-12};
  for (double l : {0.2, 0.5, 0.8}) {
    for (double g : {0.6, 1.0, 1.4}) {
      for (const cplx beta : {cplx(0.0, 0.0), cplx(0.2, 0.1), cplx(-0.5, 0.4)}) {
        const auto s = conditional_state_fock(l, g, beta);
        const double d = 1.0 - l * l;
        const double m = l * l - 2.0 * g * l + 1.0;
        const double b2 = std::norm(beta);
        parity.add(s.parity_expectation(), d * std::exp(-cond_exponent(l, g) * b2) * (m * m * b2 - l * l));
      }
    }
  }
  suites.push_back(parity);

  Suite mc{"disk_monte_carlo_sigma", 0, 0.0, 3.0};
  std::uint64_t stream = 0;
  for (double l : {1.0 / 3.0, 9.0 / 11.0}) {
    for (double eta : {1.0, 0.6304}) {
      const DiskRegion disk(0.3);
      const double g = optimize_disk(l, disk, eta).gain;
      const auto est = disk_average_mc(l, g, disk, eta, c.samples, c.seed + stream++);
      mc.add_z(est.success, success_prob_disk_attenuated(l, disk, eta), est.success_err);
      mc.add_z(est.origin, origin_disk_attenuated(l, g, disk, eta), est.origin_err);
    }
  }
  suites.push_back(mc);

  Suite noisy{"noisy_point_quadrature", 0, 0.0, 1e-6};
  for (double vsq : {0.05, 0.15, 0.25, 0.4}) {
    for (double db : {0.0, 1.0, 3.0, 6.0}) {
      const auto spec = NoisyEprSpec::from_noise(vsq, noise_from_db(db));
      noisy.add(noisy_point_via_quadrature(spec, 1.0, q), origin_point_fock1(spec));
      noisy.add(noisy_point_via_quadrature(spec, 0.6304, q), origin_point_attenuated(spec, 0.6304));
    }
  }
  suites.push_back(noisy);

  Suite limit{"square_point_limit", 0, 0.0, 1e-4};
  for (double vsq : {0.08, 0.15, 0.25, 0.35}) {
    for (double db : {1.0, 3.0, 6.0}) {
      const auto spec = NoisyEprSpec::from_noise(vsq, noise_from_db(db));
      limit.add(origin_square_fock1(spec, 1.0, SquareRegion(1e-3)), origin_point_fock1(spec));
    }
  }
  suites.push_back(limit);
  return suites;
}

Table cmd_verify(const RunConfig& c, bool& all_pass) {
  if (c.samples < 10000) throw UsageError("--samples must be >= 10000");
  const auto suites = run_verification(c);
  Table t;
  t.columns = {"suite", "points", "max_deviation", "tolerance", "status"};
  all_pass = true;
  for (const auto& s : suites) {
    t.rows.push_back({s.name, static_cast<double>(s.points), s.max_dev, s.tolerance, std::string(s.pass() ? "pass" : "fail")});
    all_pass = all_pass && s.pass();
  }
  if (c.perturb) t.notes.push_back("perturbation hook active: +1e-3 on the symmetric-protocol origin");
  return t;
}

// ---------------------------------------------------------------------------

void add_common_options(CLI::App& sub, RawOptions& raw) {
  sub.add_option("--state", raw.state, "Input state: fock1, sqfock1[:t] or attenuated[:eta]");
  sub.add_option("--eta", raw.eta, "Single-photon probability of the attenuated input");
  sub.add_option("--vsq-db", raw.vsq_db, "Squeezed variance grid in dB, a:b:step or a value");
  sub.add_option("--r", raw.r, "Squeezing parameter grid r, a:b:step or a value");
  sub.add_option("--gain", raw.gain, "unity, optimal, ralph or G=<x>");
  sub.add_option("--region", raw.region, "Acceptance region: none, disk:K, point or square:a");
  sub.add_option("--noise-db", raw.noise_db, "Noise excess in dB (a value, or a:b:step for threshold tables)");
  sub.add_option("--format", raw.format, "csv or json");
  sub.add_option("--seed", raw.seed, "Monte Carlo seed");
  sub.add_option("--out", raw.out, "Write output to this file instead of standard output");
}

// CLI11 reads "-15:0:0.5" as a short flag; glue such values to their option.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
  static const char* kValued[] = {"--vsq-db", "--r", "--eta-range", "--noise-db", "--eta", "--gain", "--region"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const bool valued = std::any_of(std::begin(kValued), std::end(kValued), [&](const char* o) { return args[i] == o; });
    if (valued && i + 1 < args.size() && args[i + 1].size() > 1 && args[i + 1][0] == '-' &&
        (std::isdigit(static_cast<unsigned char>(args[i + 1][1])) || args[i + 1][1] == '.')) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wigner-function origin of single-photon states after continuous-variable teleportation", "telewig"};
  app.require_subcommand(1);
  RawOptions raw;
  std::string kind;

  auto* sweep = app.add_subcommand("sweep", "Origin value versus squeezing");
  auto* threshold = app.add_subcommand("threshold", "Threshold squeezing tables");
  auto* conditional = app.add_subcommand("conditional", "Disk post-selection versus squeezing (default disk:0.3)");
  auto* noisy = app.add_subcommand("noisy", "Noisy resource with point or square post-selection (default point)");
  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against independent oracles");
  for (auto* sub : {sweep, threshold, conditional, noisy, verify}) add_common_options(*sub, raw);
  threshold->add_option("kind", kind, "table1, table2, fig6, unconditional, disk or crossover")->required();
  threshold->add_option("--eta-range", raw.eta_range, "eta grid for fig6, a:b:step");
  verify->add_option("--samples", raw.samples, "Monte Carlo samples per check");
  verify->add_option("--quad-tol", raw.quad_tol, "Relative tolerance of each quadrature pass");
  verify->add_flag("--perturb", raw.perturb, "Test hook: offset one closed form by 1e-3");

  try {
    std::vector<std::string> rev = glue_negative_values(args);
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto* chosen = app.get_subcommands().front();
  try {
    RunConfig cfg = resolve(chosen->get_name(), kind, raw);
    if (chosen == threshold && kind == "table2" && !cfg.gain_given) cfg.gain = GainMode::unity;
    if (chosen == conditional) {
      if (raw.region.empty()) {
        cfg.region = RegionKind::disk;
        cfg.region_size = 0.3;
      }
      if (cfg.region != RegionKind::disk) throw UsageError("conditional needs --region disk:K");
    } else if (chosen == noisy) {
      if (raw.region.empty()) cfg.region = RegionKind::point;
      if (cfg.region != RegionKind::point && cfg.region != RegionKind::square) {
        throw UsageError("noisy needs --region point or --region square:a");
      }
    }

    bool ok = true;
    Table table;
    if (chosen == threshold) {
      table = cmd_threshold(cfg);
    } else if (chosen == verify) {
      table = cmd_verify(cfg, ok);
    } else {
      table = cmd_sweep(cfg);
    }

    std::ostringstream buf;
    if (cfg.format == "json") {
      write_json(table, cfg, buf);
    } else {
      write_csv(table, buf);
      for (const auto& n : table.notes) err << "note: " << n << '\n';
    }
    if (cfg.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!(f << buf.str())) {
        err << "error: cannot write " << cfg.out << '\n';
        return kExitUsage;
      }
    }
    return ok ? kExitOk : kExitVerifyFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
}

}  // namespace telewig::cli
