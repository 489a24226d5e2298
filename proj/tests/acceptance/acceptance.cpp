// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_wiki.hpp"
#include "published_tables.hpp"
#include "tropescope/compare.hpp"
#include "tropescope/crawl.hpp"
#include "tropescope/dataset.hpp"
#include "tropescope/stats.hpp"

using namespace tropescope;
using namespace tropescope::testing;

namespace {

// Tolerances.
constexpr double kGrowthTolerancePp = 0.2;      // percentage points, derived connection growth
constexpr double kPublishedConnectionGrowth = 657.23;
constexpr double kStatsRelTolerance = 1e-9;     // describe vs oracle, per field
constexpr double kStatsAbsFloor = 1e-9;         // for fields whose true value is ~0
constexpr std::size_t kOracleWikis = 100;
constexpr std::size_t kOracleArrays = 1000;
constexpr double kCrawlBudgetSeconds = 120.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = check();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (!outcome.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.1f ms)\n", outcome.pass ? "PASS" : "FAIL", id, name.c_str(), outcome.detail.c_str(),
              ms);
  std::fflush(stdout);
}

std::map<std::string, std::string> reverse(const std::vector<std::pair<std::string, std::string>>& renames) {
  std::map<std::string, std::string> out;
  for (const auto& [from, to] : renames) out[to] = from;
  return out;
}

// Increment of each new-side entity whose old count is published in the
// old top-50 column (directly or through a rename).
void check_top_increments(const std::vector<TopRow>& table, const std::map<std::string, std::string>& original,
                          std::size_t& checked, std::vector<std::string>& mismatches) {
  std::map<std::string, std::size_t> old_counts;
  for (const auto& row : table) old_counts[row.old_name] = row.old_count;
  for (const auto& row : table) {
    const auto it = original.find(row.new_name);
    const std::string old_name = it == original.end() ? row.new_name : it->second;
    const auto old = old_counts.find(old_name);
    if (old == old_counts.end()) continue;
    ++checked;
    const auto shown = format_percent(percent_change(old->second, row.new_count));
    if (shown != row.increment) mismatches.push_back(row.new_name + " " + shown + " vs " + row.increment);
  }
}

Outcome criterion_increments() {
  std::size_t checked = 0;
  std::vector<std::string> mismatches;
  check_top_increments(kFilmTop, reverse(kFilmRenames), checked, mismatches);
  check_top_increments(kTropeTop, {}, checked, mismatches);
  std::size_t move_rows = 0;
  for (const auto& row : kTropeMoves) {
    if (row.new_count == 0) continue;
    ++move_rows;
    const auto shown = format_percent(percent_change(row.old_count, row.new_count));
    if (shown != row.increment) mismatches.push_back(row.name + " " + shown + " vs " + row.increment);
  }
  checked += move_rows;

  // The named examples must be among the checked rows.
  const std::vector<std::tuple<std::size_t, std::size_t, std::string>> named = {
      {1075, 3611, "+235.9%"}, {480, 2193, "+356.9%"}, {100, 1429, "+1,329.0%"},
      {283, 13, "-95.4%"},     {79, 1, "-98.7%"},      {76, 639, "+740.8%"}};
  for (const auto& [a, b, text] : named) {
    if (format_percent(percent_change(a, b)) != text) mismatches.push_back(text);
  }

  std::ostringstream detail;
  detail << checked << " published increments reproduced";
  if (!mismatches.empty()) {
    detail << "; mismatches:";
    for (const auto& m : mismatches) detail << " [" << m << "]";
  }
  return {mismatches.empty() && checked >= 20, detail.str()};
}

Outcome criterion_growth() {
  SnapshotMeta old_meta;
  old_meta.film_count = 6296;
  old_meta.trope_count = 17738;
  SnapshotMeta new_meta;
  new_meta.film_count = 12567;
  new_meta.trope_count = 37317;
  DescriptiveSummary old_films;
  old_films.mean = 21.984;
  DescriptiveSummary old_tropes;
  old_tropes.mean = 7.803;
  DescriptiveSummary new_films;
  new_films.mean = 83.402;
  DescriptiveSummary new_tropes;
  new_tropes.mean = 28.087;
  const auto growth = growth_report(old_meta, new_meta, {old_films, old_tropes}, {new_films, new_tropes});

  const std::vector<std::pair<std::string, std::string>> expected = {{"films", "+99.6%"},
                                                                     {"mean-tropes-per-film", "+279.4%"},
                                                                     {"tropes", "+110.4%"},
                                                                     {"mean-films-per-trope", "+260.0%"}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [label, text] : expected) {
    const auto shown = format_percent(growth.line(label).change);
    detail << label << " " << shown << ", ";
    pass = pass && shown == text;
  }
  for (const char* label : {"connections-from-film-means", "connections-from-trope-means"}) {
    const auto change = growth.line(label).change;
    const bool ok = change && std::fabs(*change - kPublishedConnectionGrowth) <= kGrowthTolerancePp;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %.3f%%", label, change ? *change : NAN);
    detail << buf << (std::string(label).find("film") != std::string::npos ? ", " : "");
    pass = pass && ok;
  }
  return {pass, detail.str()};
}

Outcome criterion_common() {
  RenameMap renames;
  for (const auto& [from, to] : kFilmRenames) renames.add(EntityKind::Film, EntityKey("Film", from), EntityKey("Film", to));
  const auto common_of = [&](const std::vector<TopRow>& table, const std::string& ns, EntityKind kind) {
    std::vector<EntityKey> old_top;
    std::vector<EntityKey> new_top;
    for (const auto& row : table) {
      old_top.emplace_back(ns, row.old_name);
      new_top.emplace_back(ns, row.new_name);
    }
    return mark_common(old_top, new_top, renames, kind);
  };
  const auto films = common_of(kFilmTop, "Film", EntityKind::Film);
  const auto tropes = common_of(kTropeTop, "Main", EntityKind::Trope);

  // The common sets must also be exactly the entities marked in the tables.
  const auto marked = [](const std::vector<TopRow>& table, const std::string& ns) {
    std::set<EntityKey> out;
    for (const auto& row : table) {
      if (row.new_marked) out.emplace(ns, row.new_name);
    }
    return out;
  };
  const bool pass = films.size() == 34 && tropes.size() == 3 && films == marked(kFilmTop, "Film") &&
                    tropes == marked(kTropeTop, "Main");
  return {pass, std::to_string(films.size()) + " common films, " + std::to_string(tropes.size()) +
                    " common tropes, sets equal to the marked entries"};
}

// Full new ordering with every old top-50 trope at its published rank and
// filler tropes elsewhere; counts are non-increasing down the list.
Outcome criterion_rank_moves() {
  std::map<std::size_t, const MoveRow*> at_rank;
  for (const auto& row : kTropeMoves) {
    if (row.move == "--") continue;
    std::string digits;
    for (char c : row.move) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    at_rank[std::stoul(digits)] = &row;
  }
  const std::size_t length = at_rank.rbegin()->first + 1000;
  std::vector<RankedEntry> new_ranking;
  new_ranking.reserve(length);
  auto next = at_rank.begin();
  for (std::size_t i = 0; i < length; ++i) {
    if (next != at_rank.end() && next->first == i) {
      new_ranking.push_back({EntityKey("Main", next->second->name), next->second->new_count});
      ++next;
    } else {
      const std::size_t count = next == at_rank.end() ? 1 : next->second->new_count;
      new_ranking.push_back({EntityKey("Main", "Filler" + std::to_string(i)), count});
    }
  }
  const bool ordered = std::is_sorted(new_ranking.begin(), new_ranking.end(),
                                      [](const RankedEntry& a, const RankedEntry& b) { return a.count > b.count; });

  std::vector<RankedEntry> old_ranking;
  for (const auto& row : kTropeMoves) old_ranking.push_back({EntityKey("Main", row.name), row.old_count});
  const auto moves = rank_moves(old_ranking, new_ranking, EntityKind::Trope, RenameMap{}, 50);

  std::vector<std::string> mismatches;
  for (std::size_t i = 0; i < kTropeMoves.size(); ++i) {
    const auto& row = kTropeMoves[i];
    const auto& move = moves.at(i);
    if (move.move_display != row.move || move.increment_display != row.increment || move.new_count != row.new_count) {
      mismatches.push_back(row.name + " " + move.move_display + "/" + move.increment_display);
    }
  }
  std::map<std::string, std::string> shown;
  for (const auto& m : moves) shown[m.key.title()] = m.move_display;
  std::ostringstream detail;
  detail << "BoxOfficeBomb " << shown["BoxOfficeBomb"] << ", CultClassic " << shown["CultClassic"] << ", ThreeDMovie "
         << shown["ThreeDMovie"] << ", HeyItsThatGuy " << shown["HeyItsThatGuy"] << "; " << moves.size() - mismatches.size()
         << "/" << kTropeMoves.size() << " rows match";
  for (const auto& m : mismatches) detail << " [" << m << "]";
  if (!ordered) detail << "; synthetic ordering not sorted";
  return {ordered && mismatches.empty() && moves.size() == kTropeMoves.size(), detail.str()};
}

std::pair<BipartiteSnapshot, CrawlReport> crawl_dir(const std::filesystem::path& dir, std::size_t workers,
                                                    Perspectives perspectives = {}) {
  SourceConfig config;
  config.mode = FixtureMode{dir};
  CrawlOptions options;
  options.workers = workers;
  options.perspectives = perspectives;
  return crawl(config, wiki_seeds(), options);
}

Outcome criterion_crawl_oracle() {
  std::mt19937_64 rng(20200401);
  std::size_t exact = 0;
  std::size_t identical = 0;
  std::size_t relations = 0;
  std::size_t largest = 0;
  std::string first_failure;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t w = 0; w < kOracleWikis; ++w) {
    const auto spec = random_spec(rng, 200, 500, 5000);
    TempDir dir;
    write_wiki(spec, dir.path());
    const auto [serial, serial_report] = crawl_dir(dir.path(), 1);
    const auto [parallel, parallel_report] = crawl_dir(dir.path(), 4);
    const auto truth = spec.all_relations();
    std::set<EntityKey> films;
    for (const auto& [film, tropes] : parallel.films()) films.insert(film);
    const bool ok = relations_of(serial) == truth && relations_of(parallel) == truth && films == spec.expected_films();
    const bool same = serialize_snapshot(serial) == serialize_snapshot(parallel);
    exact += ok;
    identical += same;
    relations += truth.size();
    largest = std::max(largest, truth.size());
    if ((!ok || !same) && first_failure.empty()) {
      first_failure = "wiki " + std::to_string(w) + ": " + std::to_string(relations_of(parallel).size()) + " of " +
                      std::to_string(truth.size()) + " relations";
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << exact << "/" << kOracleWikis << " wikis exact for workers 1 and 4, " << identical << "/" << kOracleWikis
         << " byte-identical outputs, " << relations << " relations (largest " << largest << "), " << seconds << " s";
  if (!first_failure.empty()) detail << "; first failure " << first_failure;
  return {exact == kOracleWikis && identical == kOracleWikis && seconds < kCrawlBudgetSeconds, detail.str()};
}

Outcome criterion_perspectives() {
  WikiSpec spec;
  spec.films = {"Alpha", "Beta", "Gamma", "Delta"};
  spec.tropes = {"ShoutOut", "BigBad", "RedHerring", "TitleDrop"};
  spec.phantom_films = {"Missing"};
  spec.relations = {
      {{"Alpha", "ShoutOut"}, {true, false, false}},   {{"Alpha", "BigBad"}, {false, true, false}},
      {{"Beta", "ShoutOut"}, {false, false, true}},    {{"Beta", "RedHerring"}, {false, false, true}},
      {{"Gamma", "TitleDrop"}, {false, true, false}},  {{"Gamma", "BigBad"}, {true, true, true}},
      {{"Delta", "RedHerring"}, {false, true, false}}, {{"Delta", "TitleDrop"}, {false, false, true}},
  };
  spec.pagination_by_trope = {{{"Beta", "ShoutOut"}, true},
                              {{"Beta", "RedHerring"}, false},
                              {{"Gamma", "BigBad"}, true},
                              {{"Delta", "TitleDrop"}, false}};
  spec.layout_seed = 7;
  TempDir dir;
  write_wiki(spec, dir.path());

  struct Case {
    const char* name;
    Perspectives on;
  };
  const std::vector<Case> cases = {{"all", {true, true, true}},
                                   {"no trope pages", {true, false, true}},
                                   {"no pagination", {true, true, false}},
                                   {"film pages only", {true, false, false}}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto got = relations_of(crawl_dir(dir.path(), 4, c.on).first);
    const auto want = spec.relations_where(c.on.film_pages, c.on.trope_pages, c.on.pagination_pages);
    pass = pass && got == want;
    detail << c.name << " " << got.size() << "/" << want.size() << (&c == &cases.back() ? "" : ", ");
  }
  pass = pass && spec.all_relations().size() == 8 && spec.relations_where(true, false, false).size() == 2;
  return {pass, detail.str()};
}

struct OracleSummary {
  long double mean = 0;
  long double variance = 0;
  long double skewness = 0;
  long double kurtosis = 0;
  long double min = 0;
  long double max = 0;
};

// Direct summation in extended precision.
OracleSummary brute_force(const std::vector<double>& x) {
  const auto n = static_cast<long double>(x.size());
  long double sum = 0;
  for (double v : x) sum += v;
  OracleSummary s;
  s.mean = sum / n;
  long double m2 = 0;
  long double m3 = 0;
  long double m4 = 0;
  for (double v : x) {
    const long double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  s.variance = m2 / (n - 1);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.skewness = m3 / std::pow(m2, 1.5L);
  s.kurtosis = m4 / (m2 * m2) - 3;
  s.min = *std::min_element(x.begin(), x.end());
  s.max = *std::max_element(x.begin(), x.end());
  return s;
}

bool close(double got, long double want, bool dimensionless) {
  const long double err = std::fabs(got - want);
  return err <= kStatsRelTolerance * std::fabs(want) || (dimensionless && err <= kStatsAbsFloor);
}

std::vector<double> random_array(std::mt19937_64& rng) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 10000)(rng);
  std::vector<double> x(n);
  switch (rng() % 5) {
    case 0: {  // degree-like, heavy tailed
      std::geometric_distribution<int> g(0.05);
      for (auto& v : x) v = g(rng) + 1.0;
      break;
    }
    case 1: {
      std::uniform_real_distribution<double> u(-50, 50);
      for (auto& v : x) v = u(rng);
      break;
    }
    case 2: {
      std::lognormal_distribution<double> l(2, 1);
      for (auto& v : x) v = l(rng);
      break;
    }
    case 3: {
      std::uniform_real_distribution<double> u(0, 1e6);
      for (auto& v : x) v = u(rng);
      break;
    }
    default: {  // large offset, small spread
      std::normal_distribution<double> nd(1e6, 50);
      for (auto& v : x) v = nd(rng);
      break;
    }
  }
  return x;
}

Outcome criterion_stats_oracle() {
  std::mt19937_64 rng(2164167);
  std::size_t oracle_ok = 0;
  std::size_t shift_ok = 0;
  std::size_t scale_ok = 0;
  std::size_t degenerate = 0;
  for (std::size_t a = 0; a < kOracleArrays; ++a) {
    const auto x = random_array(rng);
    const auto got = describe(std::span<const double>(x));
    const auto want = brute_force(x);
    if (!got.skewness || !got.kurtosis) {
      ++degenerate;
      continue;
    }
    oracle_ok += got.nobs == x.size() && got.min == static_cast<double>(want.min) &&
                 got.max == static_cast<double>(want.max) && close(got.mean, want.mean, false) &&
                 close(got.variance, want.variance, false) && close(*got.skewness, want.skewness, true) &&
                 close(*got.kurtosis, want.kurtosis, true);

    const double c = std::uniform_real_distribution<double>(-100, 100)(rng);
    std::vector<double> shifted = x;
    for (auto& v : shifted) v += c;
    const auto s = describe(std::span<const double>(shifted));
    shift_ok += s.skewness && s.kurtosis && close(s.mean, static_cast<long double>(got.mean) + c, false) &&
                close(s.variance, got.variance, false) && close(*s.skewness, *got.skewness, true) &&
                close(*s.kurtosis, *got.kurtosis, true);

    const double k = std::uniform_real_distribution<double>(0.01, 100)(rng);
    std::vector<double> scaled = x;
    for (auto& v : scaled) v *= k;
    const auto t = describe(std::span<const double>(scaled));
    scale_ok += t.skewness && t.kurtosis &&
                close(t.variance, static_cast<long double>(got.variance) * k * k, false) &&
                close(*t.skewness, *got.skewness, true) && close(*t.kurtosis, *got.kurtosis, true);
  }
  const std::size_t tested = kOracleArrays - degenerate;
  std::ostringstream detail;
  detail << oracle_ok << "/" << tested << " arrays match the oracle, shift " << shift_ok << "/" << tested << ", scale "
         << scale_ok << "/" << tested << " (rel " << kStatsRelTolerance << ")";
  return {tested == kOracleArrays && oracle_ok == tested && shift_ok == tested && scale_ok == tested, detail.str()};
}

}  // namespace

int main() {
  report(1, "increment arithmetic", criterion_increments);
  report(2, "aggregate growth", criterion_growth);
  report(3, "common-element counts", criterion_common);
  report(4, "rank-move formatting", criterion_rank_moves);
  report(5, "scraper oracle", criterion_crawl_oracle);
  report(6, "trope and pagination perspectives", criterion_perspectives);
  report(7, "statistics oracle", criterion_stats_oracle);
  std::printf(
      "[NOTE] 8 published descriptive tables: absolute values need the original site snapshots and are not "
      "reproducible offline; describe() is covered by criterion 7\n");
  std::printf("%d criteria failed\n", failures);
  return failures;
}
