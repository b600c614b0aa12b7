#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "critters/error.hpp"
#include "critters/telemetry.hpp"

namespace critters {

struct StatConfig {
  double alpha = 0.05;
  double ci_level = 0.846;
};

struct SessionMetrics {
  int portals_used = 0;
  int portals_required = 0;
  int mutants_killed = 0;
  int mutants_total = 0;
  int healthy_finished = 0;
  int healthy_total = 0;

  // A level needing no portals is met exactly by using none; otherwise every
  // portal counts as one surplus unit.
  double r_portals() const {
    if (portals_required > 0) return static_cast<double>(portals_used) / portals_required;
    return portals_used == 0 ? 1.0 : static_cast<double>(portals_used);
  }
  double r_mut() const {
    return mutants_total == 0 ? 1.0 : static_cast<double>(mutants_killed) / mutants_total;
  }
  double r_healthy() const {
    return healthy_total == 0 ? 1.0 : static_cast<double>(healthy_finished) / healthy_total;
  }

  bool operator==(const SessionMetrics&) const = default;
};

/// Metrics of one attempt: the events from run_started through level_end of
/// a single run (other runs' events may be interleaved and are ignored).
inline SessionMetrics session_metrics(const std::vector<TelemetryEvent>& events) {
  const TelemetryEvent* start = nullptr;
  const TelemetryEvent* end = nullptr;
  for (const auto& e : events) {
    if (e.kind == TelemetryKind::run_started && start == nullptr) start = &e;
    if (e.kind == TelemetryKind::level_end && start != nullptr) end = &e;
  }
  if (start == nullptr || end == nullptr) throw Error("incomplete event stream");
  const auto& sp = start->payload;
  const auto same_run = [&](const TelemetryEvent& e) {
    return e.player == start->player && e.payload.value("session", "") == sp.value("session", "") &&
           e.payload.value("run", -1) == sp.value("run", -1);
  };
  if (!same_run(*end)) throw Error("incomplete event stream");

  SessionMetrics m;
  try {
    m.portals_used = sp.at("portals").get<int>();
    m.portals_required = end->payload.at("required_portals").get<int>();
    m.mutants_total = end->payload.at("mutants_total").get<int>();
    m.healthy_total = end->payload.at("healthy_total").get<int>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("incomplete event stream: ") + ex.what());
  }
  for (const auto& e : events) {
    if (!same_run(e)) continue;
    if (e.kind == TelemetryKind::mutant_killed) ++m.mutants_killed;
    if (e.kind == TelemetryKind::healthy_finished) ++m.healthy_finished;
  }
  if (m.mutants_killed > m.mutants_total || m.healthy_finished > m.healthy_total) {
    throw Error("incomplete event stream: terminal events exceed totals");
  }
  return m;
}

/// One run, identified by (player, session, run).
struct Attempt {
  std::string player;
  std::string level;
  std::string session;
  int run = 0;
  std::int64_t started_ms = 0;
  std::int64_t ended_ms = 0;
  SessionMetrics metrics;
  int points = 0;
  int stars = 0;
};

/// Every completed attempt in log order of its level_end. Runs without a
/// level_end are skipped.
inline std::vector<Attempt> attempts(const std::vector<TelemetryEvent>& events) {
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, std::vector<TelemetryEvent>> open;
  std::vector<Attempt> out;
  for (const auto& e : events) {
    const Key key{e.player, e.payload.value("session", ""), e.payload.value("run", -1)};
    switch (e.kind) {
      case TelemetryKind::run_started:
        open[key] = {e};
        break;
      case TelemetryKind::mutant_killed:
      case TelemetryKind::healthy_collected:
      case TelemetryKind::healthy_finished:
        if (auto it = open.find(key); it != open.end()) it->second.push_back(e);
        break;
      case TelemetryKind::level_end: {
        auto it = open.find(key);
        if (it == open.end()) break;
        it->second.push_back(e);
        Attempt a;
        a.player = e.player;
        a.level = e.level;
        a.session = std::get<1>(key);
        a.run = std::get<2>(key);
        a.started_ms = it->second.front().timestamp_ms;
        a.ended_ms = e.timestamp_ms;
        a.metrics = session_metrics(it->second);
        a.points = e.payload.value("points", 0);
        a.stars = e.payload.value("stars", 0);
        out.push_back(std::move(a));
        open.erase(it);
        break;
      }
      default:
        break;
    }
  }
  return out;
}

/// Group by distinct levels completed (a run earning at least one star):
/// up to 3 is Group 1, 4 to 7 Group 2, 8 or more Group 3.
inline int group_for(int completed_levels) {
  if (completed_levels >= 8) return 3;
  if (completed_levels >= 4) return 2;
  return 1;
}

struct GroupAssignment {
  std::map<std::string, int> group;            // player → 1..3
  std::map<std::string, int> completed_levels;  // player → distinct levels completed

  int of(const std::string& player) const {
    const auto it = group.find(player);
    return it == group.end() ? 1 : it->second;
  }
};

inline GroupAssignment assign_groups(const std::vector<TelemetryEvent>& events) {
  std::map<std::string, std::set<std::string>> completed;
  for (const auto& e : events) completed[e.player];  // every player seen gets a group
  for (const auto& a : attempts(events)) {
    if (a.stars >= 1) completed[a.player].insert(a.level);
  }
  GroupAssignment g;
  for (const auto& [player, levels] : completed) {
    g.completed_levels[player] = static_cast<int>(levels.size());
    g.group[player] = group_for(static_cast<int>(levels.size()));
  }
  return g;
}

/// Trailing decimal digits of a level id ("level07" → 7); 0 when none.
inline int level_number(std::string_view level_id) {
  std::size_t i = level_id.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(level_id[i - 1]))) --i;
  if (i == level_id.size()) return 0;
  return std::stoi(std::string(level_id.substr(i)));
}

struct MeanCI {
  int n = 0;
  double mean = 0;
  double low = 0;
  double high = 0;
};

/// Normal-approximation interval for the mean; zero width for one sample.
inline MeanCI mean_ci(const std::vector<double>& xs, double ci_level) {
  MeanCI r;
  r.n = static_cast<int>(xs.size());
  if (xs.empty()) return r;
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double half = 0;
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 1.0 - (1.0 - ci_level) / 2.0);
    half = z * sd / std::sqrt(static_cast<double>(xs.size()));
  }
  r.low = r.mean - half;
  r.high = r.mean + half;
  return r;
}

struct SeriesBin {
  int bin = 0;
  std::int64_t start_ms = 0;
  std::optional<MeanCI> r_portals;
  std::optional<MeanCI> r_mut;
  std::optional<MeanCI> r_healthy;
  std::optional<MeanCI> level;  // current level number
};

struct TimeSeries {
  std::int64_t origin_ms = 0;
  std::int64_t bin_width_ms = 0;
  std::optional<int> group;
  std::vector<SeriesBin> bins;
};

/// Bins start at the first event of the log. A player's ratio in a bin is the
/// mean over their attempts ending there; the bin value is the mean across
/// players. A player's current level is the level of their latest
/// level_start before the bin ends, counted while they are active (between
/// their first and last event).
inline TimeSeries time_series(const std::vector<TelemetryEvent>& events, std::int64_t bin_width_ms,
                              const StatConfig& config = {},
                              std::optional<int> group = std::nullopt) {
  if (bin_width_ms <= 0) throw Error("bin width must be positive");
  TimeSeries ts;
  ts.bin_width_ms = bin_width_ms;
  ts.group = group;
  if (events.empty()) return ts;

  std::int64_t first = events.front().timestamp_ms;
  std::int64_t last = first;
  for (const auto& e : events) {
    first = std::min(first, e.timestamp_ms);
    last = std::max(last, e.timestamp_ms);
  }
  ts.origin_ms = first;
  const auto bin_of = [&](std::int64_t t) { return static_cast<int>((t - first) / bin_width_ms); };
  const int bin_count = bin_of(last) + 1;

  const GroupAssignment groups = assign_groups(events);
  const auto included = [&](const std::string& p) { return !group || groups.of(p) == *group; };

  // player → bin → per-attempt ratios
  using Ratios = std::vector<std::array<double, 3>>;
  std::map<std::string, std::map<int, Ratios>> ratios;
  for (const auto& a : attempts(events)) {
    if (!included(a.player)) continue;
    ratios[a.player][bin_of(a.ended_ms)].push_back(
        {a.metrics.r_portals(), a.metrics.r_mut(), a.metrics.r_healthy()});
  }

  struct Activity {
    int first_bin = 0;
    int last_bin = 0;
    std::vector<std::pair<std::int64_t, int>> starts;  // (ts, level number)
  };
  std::map<std::string, Activity> activity;
  for (const auto& e : events) {
    if (!included(e.player)) continue;
    auto [it, fresh] = activity.try_emplace(e.player);
    const int b = bin_of(e.timestamp_ms);
    if (fresh) it->second.first_bin = it->second.last_bin = b;
    it->second.first_bin = std::min(it->second.first_bin, b);
    it->second.last_bin = std::max(it->second.last_bin, b);
    if (e.kind == TelemetryKind::level_start) {
      it->second.starts.emplace_back(e.timestamp_ms, level_number(e.level));
    }
  }
  for (auto& [player, act] : activity) std::stable_sort(act.starts.begin(), act.starts.end());

  for (int b = 0; b < bin_count; ++b) {
    SeriesBin sb;
    sb.bin = b;
    sb.start_ms = first + b * bin_width_ms;
    const std::int64_t end_ms = sb.start_ms + bin_width_ms;

    std::array<std::vector<double>, 3> per_player;
    for (const auto& [player, bins] : ratios) {
      const auto it = bins.find(b);
      if (it == bins.end()) continue;
      for (std::size_t k = 0; k < 3; ++k) {
        double sum = 0;
        for (const auto& r : it->second) sum += r[k];
        per_player[k].push_back(sum / static_cast<double>(it->second.size()));
      }
    }
    if (!per_player[0].empty()) {
      sb.r_portals = mean_ci(per_player[0], config.ci_level);
      sb.r_mut = mean_ci(per_player[1], config.ci_level);
      sb.r_healthy = mean_ci(per_player[2], config.ci_level);
    }

    std::vector<double> levels;
    for (const auto& [player, act] : activity) {
      if (b < act.first_bin || b > act.last_bin) continue;
      std::optional<int> current;
      for (const auto& [t, n] : act.starts) {
        if (t >= end_ms) break;
        current = n;
      }
      if (current) levels.push_back(*current);
    }
    if (!levels.empty()) sb.level = mean_ci(levels, config.ci_level);
    ts.bins.push_back(std::move(sb));
  }
  return ts;
}

struct MannWhitneyResult {
  double u = 0;  // pairs (a_i, b_j) with a_i > b_j, ties counting one half
  double p = 1;
  bool exact = true;
  // Exact mode only: p as a reduced fraction.
  std::uint64_t p_numerator = 1;
  std::uint64_t p_denominator = 1;
};

inline constexpr std::size_t kExactMannWhitneyLimit = 25;

namespace detail {

// Mid-ranks of the pooled sample, doubled so they stay integral.
inline std::vector<int> doubled_midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<int> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const int doubled = static_cast<int>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

/// Two-sided Wilcoxon-Mann-Whitney test. Up to 25 pooled values the null
/// distribution is counted exactly over all C(n+m, n) assignments of the
/// pooled values to the first sample (a subset-sum count over doubled
/// mid-ranks); beyond that a tie-corrected normal approximation is used and
/// `exact` is false. p = min(1, 2 * smaller tail).
inline MannWhitneyResult mann_whitney_exact(const std::vector<double>& a,
                                            const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw Error("empty sample");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t total_n = n + m;
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<int> ranks = detail::doubled_midranks(pooled);

  long long rank_sum2 = 0;  // doubled rank sum of a
  for (std::size_t i = 0; i < n; ++i) rank_sum2 += ranks[i];
  const long long nn = static_cast<long long>(n);
  const long long u2 = rank_sum2 - nn * (nn + 1);  // 2U

  MannWhitneyResult r;
  r.u = static_cast<double>(u2) / 2.0;

  if (total_n <= kExactMannWhitneyLimit) {
    const std::size_t max_sum = total_n * (total_n + 1);
    // count[k][s]: subsets of size k with doubled rank sum s
    std::vector<std::vector<std::uint64_t>> count(n + 1, std::vector<std::uint64_t>(max_sum + 1));
    count[0][0] = 1;
    for (int rank : ranks) {
      for (std::size_t k = std::min(n, total_n); k-- > 0;) {
        for (std::size_t s = max_sum + 1; s-- > static_cast<std::size_t>(rank);) {
          count[k + 1][s] += count[k][s - static_cast<std::size_t>(rank)];
        }
      }
    }
    std::uint64_t all = 0;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      const std::uint64_t c = count[n][s];
      all += c;
      if (static_cast<long long>(s) <= rank_sum2) lower += c;
      if (static_cast<long long>(s) >= rank_sum2) upper += c;
    }
    std::uint64_t numerator = std::min(all, 2 * std::min(lower, upper));
    const std::uint64_t g = std::gcd(numerator, all);
    r.p_numerator = numerator / g;
    r.p_denominator = all / g;
    r.p = static_cast<double>(numerator) / static_cast<double>(all);
    return r;
  }

  r.exact = false;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double N = static_cast<double>(total_n);
  std::map<int, int> ties;
  for (int rank : ranks) ++ties[rank];
  double tie_term = 0;
  for (const auto& [rank, t] : ties) tie_term += static_cast<double>(t) * t * t - t;
  const double variance = nd * md / 12.0 * ((N + 1) - tie_term / (N * (N - 1)));
  r.p_numerator = 0;
  r.p_denominator = 0;
  if (variance <= 0) {
    r.p = 1;
    return r;
  }
  const double z = std::abs(r.u - nd * md / 2.0) / std::sqrt(variance);
  const boost::math::normal_distribution<double> normal;
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(normal, z)));
  return r;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string number(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader =
    "player,group,level,session,run,started_ms,ended_ms,portals_used,portals_required,"
    "mutants_killed,mutants_total,healthy_finished,healthy_total,r_portals,r_mut,r_healthy,"
    "points,stars";

/// One row per attempt, in log order.
inline std::string export_csv(const std::vector<TelemetryEvent>& events) {
  std::string out(kCsvHeader);
  out += '\n';
  const GroupAssignment groups = assign_groups(events);
  for (const auto& a : attempts(events)) {
    const SessionMetrics& m = a.metrics;
    std::ostringstream row;
    row << detail::csv_field(a.player) << ',' << groups.of(a.player) << ','
        << detail::csv_field(a.level) << ',' << detail::csv_field(a.session) << ',' << a.run << ','
        << a.started_ms << ',' << a.ended_ms << ',' << m.portals_used << ','
        << m.portals_required << ',' << m.mutants_killed << ',' << m.mutants_total << ','
        << m.healthy_finished << ',' << m.healthy_total << ',' << detail::number(m.r_portals())
        << ',' << detail::number(m.r_mut()) << ',' << detail::number(m.r_healthy()) << ','
        << a.points << ',' << a.stars << '\n';
    out += row.str();
  }
  return out;
}

/// Columnar time series: one row per bin and series.
inline std::string time_series_csv(const std::vector<TimeSeries>& series) {
  std::string out = "group,bin,start_minute,series,n,mean,ci_low,ci_high\n";
  for (const auto& ts : series) {
    const std::string group = ts.group ? std::to_string(*ts.group) : "all";
    for (const auto& b : ts.bins) {
      const double minute = static_cast<double>(b.start_ms - ts.origin_ms) / 60000.0;
      const std::pair<const char*, const std::optional<MeanCI>*> columns[] = {
          {"r_portals", &b.r_portals}, {"r_mut", &b.r_mut}, {"r_healthy", &b.r_healthy},
          {"level", &b.level}};
      for (const auto& [name, value] : columns) {
        if (!*value) continue;
        const MeanCI& v = **value;
        out += group + ',' + std::to_string(b.bin) + ',' + detail::number(minute) + ',' + name +
               ',' + std::to_string(v.n) + ',' + detail::number(v.mean) + ',' +
               detail::number(v.low) + ',' + detail::number(v.high) + '\n';
      }
    }
  }
  return out;
}

/// Plain-text summary: per-group means of per-player average ratios, and
/// pairwise group comparisons of those averages.
inline std::string analytics_report(const std::vector<TelemetryEvent>& events,
                                    const StatConfig& config = {}) {
  const GroupAssignment groups = assign_groups(events);
  const std::vector<Attempt> all = attempts(events);

  std::map<std::string, std::array<std::vector<double>, 3>> by_player;
  for (const auto& a : all) {
    auto& slot = by_player[a.player];
    slot[0].push_back(a.metrics.r_portals());
    slot[1].push_back(a.metrics.r_mut());
    slot[2].push_back(a.metrics.r_healthy());
  }
  const auto avg = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  // group → metric → per-player averages
  std::map<int, std::array<std::vector<double>, 3>> by_group;
  for (const auto& [player, metrics] : by_player) {
    for (std::size_t k = 0; k < 3; ++k) by_group[groups.of(player)][k].push_back(avg(metrics[k]));
  }

  std::ostringstream os;
  os << "players: " << groups.group.size() << ", attempts: " << all.size() << "\n\n";
  os << "group  players  r_portals  r_mut      r_healthy\n";
  for (int g = 1; g <= 3; ++g) {
    int players = 0;
    for (const auto& [p, grp] : groups.group) players += grp == g;
    os << std::left << std::setw(7) << g << std::setw(9) << players;
    const auto it = by_group.find(g);
    for (std::size_t k = 0; k < 3; ++k) {
      const int width = 11;
      std::string cell = "-";
      if (it != by_group.end() && !it->second[k].empty()) cell = detail::number(avg(it->second[k]));
      os << std::setw(width) << cell;
    }
    os << '\n';
  }

  static constexpr const char* kNames[] = {"r_portals", "r_mut", "r_healthy"};
  os << "\ncomparison  metric     U       p            p < " << detail::number(config.alpha) << '\n';
  for (int g = 1; g <= 3; ++g) {
    for (int h = g + 1; h <= 3; ++h) {
      if (!by_group.count(g) || !by_group.count(h)) continue;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto result = mann_whitney_exact(by_group[g][k], by_group[h][k]);
        os << std::left << std::setw(12) << (std::to_string(g) + " vs " + std::to_string(h))
           << std::setw(11) << kNames[k] << std::setw(8) << detail::number(result.u)
           << std::setw(13) << detail::number(result.p)
           << (result.p < config.alpha ? "yes" : "no") << (result.exact ? "" : " (normal approx.)")
           << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace critters
