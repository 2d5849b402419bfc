#include "otbyz/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "otbyz/analysis.hpp"
#include "otbyz/attack.hpp"
#include "otbyz/protocol.hpp"

namespace otbyz {
namespace {

constexpr std::uint64_t kMinThm1Trials = 1000;

struct MetricInfo {
  Metric metric;
  std::string_view name;
  bool has_se;
};

constexpr MetricInfo kMetrics[] = {
    {Metric::kPeAnalytic, "pe_analytic", false}, {Metric::kPeEmpirical, "pe_empirical", true},
    {Metric::kNtThm1, "nt_thm1", true},          {Metric::kNsEmpirical, "ns_empirical", true},
    {Metric::kNsLower, "ns_lb", false},          {Metric::kNsUpper, "ns_ub", false},
    {Metric::kDc, "dc", false},                  {Metric::kDStar, "d_star", false},
};

const MetricInfo& info(Metric m) {
  for (const auto& i : kMetrics)
    if (i.metric == m) return i;
  throw std::logic_error("unknown metric");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw SpecError("not a number: '" + t + "'");
  return v;
}

// Padded plain-text rendering of a cell.
std::string cell_text(const Cell& c) {
  if (!c) return "n/a";
  std::ostringstream os;
  os << std::setprecision(6) << *c;
  return os.str();
}

}  // namespace

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kN: return "N";
    case SweepParam::kSignal: return "s";
    case SweepParam::kAttack: return "D";
    case SweepParam::kAlpha: return "alpha0";
  }
  return "?";
}

std::string_view to_string(Metric m) { return info(m).name; }

std::optional<SweepParam> parse_sweep_param(std::string_view s) {
  for (SweepParam p : {SweepParam::kN, SweepParam::kSignal, SweepParam::kAttack, SweepParam::kAlpha})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (const auto& i : kMetrics)
    if (i.name == s) return i.metric;
  return std::nullopt;
}

bool has_std_error(Metric m) { return info(m).has_se; }

void SweepSpec::validate() const {
  if (grid.empty()) throw SpecError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw SpecError("sweep grid must be strictly increasing");
  if (metrics.empty()) throw SpecError("no metrics requested");
  if (n_trials == 0) throw SpecError("n_trials must be >= 1");
  const bool wants_thm1 = std::find(metrics.begin(), metrics.end(), Metric::kNtThm1) != metrics.end();
  if (wants_thm1 && n_trials < kMinThm1Trials)
    throw SpecError("nt_thm1 needs at least 1000 samples (n_trials)");
  for (double v : grid) {
    if (param == SweepParam::kN && (v != std::floor(v) || v < 1.0 || v > 1e6))
      throw SpecError("N grid values must be integers in [1, 10^6]");
    try {
      config_at(v).validate();
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("grid value ") + format_number(v) + ": " + e.what());
    }
  }
}

ModelConfig SweepSpec::config_at(double value) const {
  ModelConfig c = base;
  switch (param) {
    case SweepParam::kN: c.n_sensors = static_cast<int>(value); break;
    case SweepParam::kSignal: c.signal = value; break;
    case SweepParam::kAttack: c.attack_strength = value; break;
    case SweepParam::kAlpha: c.byz_frac = value; break;
  }
  return c;
}

std::string SweepSpec::config_hash() const {
  std::string text = base.canonical();
  text += ";param=";
  text += to_string(param);
  text += ";grid=";
  for (double v : grid) text += format_number(v) + ",";
  text += ";metrics=";
  for (Metric m : metrics) text += std::string(to_string(m)) + ",";
  text += ";trials=" + std::to_string(n_trials) + ";seed=" + std::to_string(seed);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

std::size_t SweepResult::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column named " + std::string(name));
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.label = spec.label;
  result.provenance = {spec.config_hash(), spec.seed, OTBYZ_VERSION};
  result.columns.emplace_back(to_string(spec.param));
  for (Metric m : spec.metrics) {
    result.columns.emplace_back(to_string(m));
    if (has_std_error(m)) result.columns.push_back(std::string(to_string(m)) + "_se");
  }

  for (double value : spec.grid) {
    const ModelConfig cfg = spec.config_at(value);
    std::optional<BatchSummary> batch;
    std::optional<BoundsReport> bounds;
    auto get_batch = [&]() -> const BatchSummary& {
      if (!batch) batch = run_batch(cfg, spec.n_trials, spec.seed, {spec.threads, std::nullopt});
      return *batch;
    };
    auto get_bounds = [&]() -> const BoundsReport* {
      if (cfg.n_sensors < 2) return nullptr;
      if (!bounds) {
        BoundsOptions opts;
        opts.threads = spec.threads;
        bounds = thm2_bounds(cfg, opts);
      }
      return &*bounds;
    };

    std::vector<Cell> row{value};
    for (Metric m : spec.metrics) {
      switch (m) {
        case Metric::kPeAnalytic:
          row.emplace_back(analytic_error_probs(cfg).p_e);
          break;
        case Metric::kPeEmpirical:
          row.emplace_back(get_batch().error_rate.value);
          row.emplace_back(get_batch().error_rate.std_error);
          break;
        case Metric::kNtThm1: {
          const auto est = thm1_expected_transmissions(cfg, spec.n_trials, spec.seed, spec.threads);
          row.emplace_back(est.expected_transmissions.value);
          row.emplace_back(est.expected_transmissions.std_error);
          break;
        }
        case Metric::kNsEmpirical:
          row.emplace_back(get_batch().saved.value);
          row.emplace_back(get_batch().saved.std_error);
          break;
        case Metric::kNsLower: {
          const auto* b = get_bounds();
          row.push_back(b ? Cell{b->lb_saved} : std::nullopt);
          break;
        }
        case Metric::kNsUpper: {
          const auto* b = get_bounds();
          row.push_back(b ? Cell{b->ub_saved} : std::nullopt);
          break;
        }
        case Metric::kDc:
          row.emplace_back(deflection_coefficient(cfg).dc);
          break;
        case Metric::kDStar:
          row.push_back(deflection_coefficient(cfg).d_star);
          break;
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string summarize(const SweepResult& result) {
  std::ostringstream os;
  if (!result.label.empty()) os << "# " << result.label << "\n";

  const std::size_t n_cols = result.columns.size();
  std::vector<std::size_t> width(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    width[c] = result.columns[c].size();
    for (const auto& row : result.rows) width[c] = std::max(width[c], cell_text(row[c]).size());
  }
  for (std::size_t c = 0; c < n_cols; ++c)
    os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << result.columns[c];
  os << "\n";
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < n_cols; ++c)
      os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cell_text(row[c]);
    os << "\n";
  }

  for (std::size_t c = 1; c < n_cols; ++c) {
    const std::string& name = result.columns[c];
    if (name.ends_with("_se")) continue;
    const bool is_ns = name.starts_with("ns_");
    const bool is_pe = name.starts_with("pe_");
    if (!is_ns && !is_pe) continue;
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
      const Cell& v = result.rows[r][c];
      if (!v) continue;
      if (!best || (is_ns ? *v < *result.rows[*best][c] : *v > *result.rows[*best][c])) best = r;
    }
    if (!best) continue;
    os << (is_ns ? "min " : "max ") << name << " = " << cell_text(result.rows[*best][c]) << " at "
       << result.columns[0] << " = " << cell_text(result.rows[*best][0]) << "\n";
  }
  return os.str();
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  std::vector<double> grid;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = t.find(':', start);
      parts.push_back(parse_double(std::string_view(t).substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3) throw SpecError("range grid must be start:stop:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo) throw SpecError("range grid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  } else {
    std::size_t start = 0;
    while (start <= t.size()) {
      const auto pos = t.find(',', start);
      grid.push_back(parse_double(std::string_view(t).substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return grid;
}

std::vector<SweepSpec> make_preset(std::string_view name, bool paper_scale) {
  // pi0 = pi1 = 0.5 throughout. s = 3, sigma^2 = 1 put the blinding strength
  // at D* = 5 for alpha0 = 0.3.
  ModelConfig base;
  base.signal = 3.0;
  base.noise_var = 1.0;
  base.prior_h1 = 0.5;

  std::vector<SweepSpec> out;
  auto add = [&](ModelConfig cfg, SweepParam param, std::vector<double> grid,
                 std::vector<Metric> metrics, std::uint64_t trials, std::string label) {
    SweepSpec spec;
    spec.base = cfg;
    spec.param = param;
    spec.grid = std::move(grid);
    spec.metrics = std::move(metrics);
    spec.n_trials = trials;
    spec.label = std::move(label);
    out.push_back(std::move(spec));
  };

  if (name == "fig1a" || name == "fig1b") {
    // alpha0 = 0.3, D = 6, s in {0.5, 4}, swept over N.
    const auto n_grid = parse_grid(paper_scale ? "10:300:10" : "10:100:10");
    const std::vector<Metric> metrics =
        name == "fig1a" ? std::vector<Metric>{Metric::kNsEmpirical}
                        : std::vector<Metric>{Metric::kPeEmpirical, Metric::kPeAnalytic};
    for (double s : {0.5, 4.0}) {
      ModelConfig cfg = base;
      cfg.signal = s;
      cfg.byz_frac = 0.3;
      cfg.attack_strength = 6.0;
      add(cfg, SweepParam::kN, n_grid, metrics, paper_scale ? 100000 : 10000,
          std::string(name) + "_s" + format_number(s));
    }
  } else if (name == "fig2") {
    // N = 10, simulation vs the expected-transmissions estimator.
    for (double alpha : {0.3, 0.5}) {
      ModelConfig cfg = base;
      cfg.n_sensors = 10;
      cfg.byz_frac = alpha;
      add(cfg, SweepParam::kAttack, parse_grid("0:12:0.5"),
          {Metric::kNsEmpirical, Metric::kNtThm1, Metric::kPeEmpirical, Metric::kDStar}, 100000,
          "fig2_alpha" + format_number(alpha));
    }
  } else if (name == "fig3" || name == "fig4") {
    // N = 300 at full scale, N = 100 otherwise.
    const bool bounds = name == "fig3";
    for (double alpha : {0.3, 0.5}) {
      ModelConfig cfg = base;
      cfg.n_sensors = paper_scale ? 300 : 100;
      cfg.byz_frac = alpha;
      add(cfg, SweepParam::kAttack, parse_grid(bounds ? "0:12:1" : "0:12:0.5"),
          bounds ? std::vector<Metric>{Metric::kNsEmpirical, Metric::kNsLower, Metric::kNsUpper}
                 : std::vector<Metric>{Metric::kPeEmpirical, Metric::kPeAnalytic, Metric::kDc},
          10000, std::string(name) + "_alpha" + format_number(alpha));
    }
  } else {
    throw SpecError("unknown preset '" + std::string(name) + "' (fig1a|fig1b|fig2|fig3|fig4)");
  }
  return out;
}

}  // namespace otbyz
