#include "tropescope/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "tropescope/compare.hpp"
#include "tropescope/crawl.hpp"
#include "tropescope/dataset.hpp"
#include "tropescope/error.hpp"
#include "tropescope/legacy.hpp"
#include "tropescope/report.hpp"
#include "tropescope/stats.hpp"

namespace tropescope::cli {

namespace {

namespace fs = std::filesystem;

Date today() {
  return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

void require_input(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw FileUnreadable(std::string(what) + " '" + path + "' is not a readable file");
}

void require_output(const std::string& path) {
  const auto parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) throw FileUnreadable("output directory '" + parent.string() + "' does not exist");
}

std::pair<DescriptiveSummary, DescriptiveSummary> both_axes(const BipartiteSnapshot& snapshot) {
  const auto summarize = [&](Axis axis) {
    const auto degrees = degree_sequence(snapshot, axis);
    return degrees.empty() ? DescriptiveSummary{} : describe(std::span<const std::size_t>(degrees));
  };
  return {summarize(Axis::TropesPerFilm), summarize(Axis::FilmsPerTrope)};
}

struct ScrapeArgs {
  std::string fixture;
  std::string base_url;
  std::vector<std::string> seeds;
  std::optional<std::size_t> max_pages;
  std::optional<std::size_t> max_depth;
  std::vector<std::string> scope;
  std::size_t workers = 4;
  double min_interval = 1.0;
  int retries = 3;
  double backoff = 0.5;
  double timeout = 30.0;
  std::string cache_dir;
  std::string user_agent = "tropescope/0.1";
  std::string article_id = "main-article";
  std::string film_ns = "Film";
  std::vector<std::string> trope_ns{"Main"};
  std::string out;
  std::string as_of;
  bool progress = false;
};

struct ImportArgs {
  std::string ntriples;
  std::vector<std::string> predicates;
  std::string out;
  std::string as_of;
  std::string film_ns = "Film";
  std::vector<std::string> trope_ns{"Main"};
};

struct StatsArgs {
  std::string dataset;
  std::string axis = "films";
  std::string format = "csv";
  std::string summary = "describe";
};

struct HistArgs {
  std::string dataset;
  std::string axis = "films";
  std::string format = "csv";
  std::string out;
};

struct DiffArgs {
  std::string old_path;
  std::string new_path;
  std::string axis = "films";
  std::size_t top = 50;
  std::string renames;
  std::size_t rank_base = 0;
  std::string format = "md";
  std::string table = "top";
};

struct GrowthArgs {
  std::string old_path;
  std::string new_path;
  std::string format = "md";
};

int do_scrape(const ScrapeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.fixture.empty() == a.base_url.empty()) throw ConfigError("scrape needs exactly one of --fixture or --base-url");
  require_output(a.out);

  SourceConfig config;
  if (!a.fixture.empty()) {
    if (!fs::is_directory(a.fixture)) throw ConfigError("fixture directory '" + a.fixture + "' does not exist");
    config.mode = FixtureMode{a.fixture};
  } else {
    config.mode = LiveMode{a.base_url};
  }
  config.min_interval = a.min_interval;
  config.max_retries = a.retries;
  config.backoff_base = a.backoff;
  config.timeout = a.timeout;
  config.user_agent = a.user_agent;
  if (!a.cache_dir.empty()) config.cache_dir = a.cache_dir;

  CrawlOptions options;
  options.scheme.article_id = a.article_id;
  options.scheme.film_namespace = a.film_ns;
  options.scheme.trope_namespaces = {a.trope_ns.begin(), a.trope_ns.end()};
  options.limits.max_pages = a.max_pages;
  options.limits.max_depth = a.max_depth;
  options.limits.scope = {a.scope.begin(), a.scope.end()};
  options.workers = a.workers;
  options.captured_at = a.as_of.empty() ? today() : parse_date(a.as_of);
  if (a.progress) {
    options.progress = [&err](std::size_t done, std::size_t frontier) {
      err << "\rpages " << done << ", frontier " << frontier << std::flush;
    };
  }

  std::vector<EntityKey> seeds;
  for (const auto& seed : a.seeds) {
    try {
      seeds.push_back(EntityKey::parse(seed));
    } catch (const std::invalid_argument&) {
      seeds.push_back(canonicalize_url(seed));
    }
  }

  auto [snapshot, report] = crawl(config, seeds, options);
  if (a.progress) err << "\n";
  save_snapshot(snapshot, a.out);

  for (const auto& d : report.diagnostics) err << "diagnostic: " << d << "\n";
  for (const auto& url : report.failed_urls) err << "failed: " << url << "\n";
  out << "pages_fetched\t" << report.pages_fetched << "\n"
      << "pages_not_found\t" << report.pages_not_found << "\n"
      << "pages_failed\t" << report.pages_failed << "\n"
      << "relations_found\t" << report.relations_found << "\n"
      << "films_discovered\t" << report.films_discovered << "\n"
      << "tropes_discovered\t" << report.tropes_discovered << "\n";
  return kOk;
}

int do_import(const ImportArgs& a, std::ostream& out, std::ostream& err) {
  require_input(a.ntriples, "n-triples file");
  require_output(a.out);
  WikiScheme scheme;
  scheme.film_namespace = a.film_ns;
  scheme.trope_namespaces = {a.trope_ns.begin(), a.trope_ns.end()};
  const std::set<std::string> predicates =
      a.predicates.empty() ? kDefaultFeaturePredicates : std::set<std::string>(a.predicates.begin(), a.predicates.end());
  auto [snapshot, stats] =
      import_legacy(fs::path(a.ntriples), predicates, scheme, a.as_of.empty() ? today() : parse_date(a.as_of));
  save_snapshot(snapshot, a.out);
  for (const auto& w : stats.warnings) err << "warning: " << w << "\n";
  out << "lines\t" << stats.lines << "\n"
      << "relations\t" << stats.relations << "\n"
      << "skipped_predicate\t" << stats.skipped_predicate << "\n"
      << "skipped_resource\t" << stats.skipped_resource << "\n"
      << "malformed\t" << stats.malformed << "\n";
  return kOk;
}

int do_stats(const StatsArgs& a, std::ostream& out) {
  require_input(a.dataset, "dataset");
  const Axis axis = axis_from_string(a.axis);
  const OutputFormat format = output_format_from_string(a.format);
  if (a.summary != "describe" && a.summary != "boxplot") {
    throw std::invalid_argument("unknown summary '" + a.summary + "' (use describe or boxplot)");
  }
  const auto degrees = degree_sequence(load_snapshot(a.dataset), axis);
  const std::span<const std::size_t> values(degrees);
  out << render(a.summary == "describe" ? summary_table(describe(values)) : boxplot_table(boxplot(values)), format);
  return kOk;
}

int do_hist(const HistArgs& a, std::ostream& out) {
  require_input(a.dataset, "dataset");
  if (!a.out.empty()) require_output(a.out);
  const Axis axis = axis_from_string(a.axis);
  const OutputFormat format = output_format_from_string(a.format);
  const std::string text = render(histogram_table(histogram(load_snapshot(a.dataset), axis)), format);
  if (a.out.empty()) {
    out << text;
  } else {
    std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
    if (!(file << text)) throw FileUnreadable("cannot write " + a.out);
  }
  return kOk;
}

int do_diff(const DiffArgs& a, std::ostream& out) {
  require_input(a.old_path, "old dataset");
  require_input(a.new_path, "new dataset");
  if (!a.renames.empty()) require_input(a.renames, "rename map");
  if (a.top == 0) throw std::invalid_argument("--top must be at least 1");
  if (a.rank_base > 1) throw std::invalid_argument("--rank-base must be 0 or 1");
  const Axis axis = axis_from_string(a.axis);
  const OutputFormat format = output_format_from_string(a.format);
  const RenameMap renames = a.renames.empty() ? RenameMap{} : RenameMap::load(a.renames);
  const auto old_snapshot = load_snapshot(a.old_path);
  const auto new_snapshot = load_snapshot(a.new_path);
  if (a.table == "top") {
    out << render(top_table(diff_top(old_snapshot, new_snapshot, axis, renames, a.top), a.rank_base), format);
  } else if (a.table == "moves") {
    out << render(moves_table(rank_moves(old_snapshot, new_snapshot, axis, renames, a.top, a.rank_base), a.rank_base),
                  format);
  } else {
    throw std::invalid_argument("unknown table '" + a.table + "' (use top or moves)");
  }
  return kOk;
}

int do_growth(const GrowthArgs& a, std::ostream& out) {
  require_input(a.old_path, "old dataset");
  require_input(a.new_path, "new dataset");
  const OutputFormat format = output_format_from_string(a.format);
  const auto old_snapshot = load_snapshot(a.old_path);
  const auto new_snapshot = load_snapshot(a.new_path);
  const auto report =
      growth_report(meta_of(old_snapshot), meta_of(new_snapshot), both_axes(old_snapshot), both_axes(new_snapshot));
  out << render(growth_table(report), format);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Film/trope dataset crawler and snapshot analysis", "tropescope"};
  app.require_subcommand(1, 1);

  ScrapeArgs scrape;
  auto* scrape_cmd = app.add_subcommand("scrape", "Crawl a wiki (live or fixture) into a dataset file");
  scrape_cmd->add_option("--fixture", scrape.fixture, "Fixture directory with index.json");
  scrape_cmd->add_option("--base-url", scrape.base_url, "Live site root, e.g. https://tvtropes.org");
  scrape_cmd->add_option("--seed", scrape.seeds, "Seed page as Namespace/Title or wiki URL")->required();
  scrape_cmd->add_option("--max-pages", scrape.max_pages, "Stop after visiting this many pages");
  scrape_cmd->add_option("--max-depth", scrape.max_depth, "Do not go deeper than this many links from the seeds");
  scrape_cmd->add_option("--scope", scrape.scope, "Namespace eligible for enqueueing (repeatable)");
  scrape_cmd->add_option("--workers", scrape.workers, "Concurrent fetch workers")->capture_default_str();
  scrape_cmd->add_option("--min-interval", scrape.min_interval, "Seconds between requests to one host")
      ->capture_default_str();
  scrape_cmd->add_option("--retries", scrape.retries, "Retries on 5xx/timeouts")->capture_default_str();
  scrape_cmd->add_option("--backoff", scrape.backoff, "Backoff base in seconds")->capture_default_str();
  scrape_cmd->add_option("--timeout", scrape.timeout, "Request timeout in seconds")->capture_default_str();
  scrape_cmd->add_option("--cache-dir", scrape.cache_dir, "Page cache directory");
  scrape_cmd->add_option("--user-agent", scrape.user_agent)->capture_default_str();
  scrape_cmd->add_option("--article-id", scrape.article_id, "id of the article body element")->capture_default_str();
  scrape_cmd->add_option("--film-ns", scrape.film_ns)->capture_default_str();
  scrape_cmd->add_option("--trope-ns", scrape.trope_ns, "Trope namespace (repeatable)")->capture_default_str();
  scrape_cmd->add_option("--out", scrape.out, "Dataset file to write")->required();
  scrape_cmd->add_option("--as-of", scrape.as_of, "Capture date YYYY-MM-DD (default today)");
  scrape_cmd->add_flag("--progress", scrape.progress, "Print progress to stderr");

  ImportArgs import;
  auto* import_cmd = app.add_subcommand("import-legacy", "Build a dataset from an N-Triples dump");
  import_cmd->add_option("--ntriples", import.ntriples)->required();
  import_cmd->add_option("--predicate", import.predicates, "Feature predicate IRI (repeatable)");
  import_cmd->add_option("--out", import.out)->required();
  import_cmd->add_option("--as-of", import.as_of, "Capture date YYYY-MM-DD (default today)");
  import_cmd->add_option("--film-ns", import.film_ns)->capture_default_str();
  import_cmd->add_option("--trope-ns", import.trope_ns)->capture_default_str();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of one axis");
  stats_cmd->add_option("--dataset", stats.dataset)->required();
  stats_cmd->add_option("--axis", stats.axis, "films (tropes per film) or tropes (films per trope)")
      ->capture_default_str();
  stats_cmd->add_option("--format", stats.format, "csv, md or text")->capture_default_str();
  stats_cmd->add_option("--summary", stats.summary, "describe or boxplot")->capture_default_str();

  HistArgs hist;
  auto* hist_cmd = app.add_subcommand("hist", "Degree frequency histogram of one axis");
  hist_cmd->add_option("--dataset", hist.dataset)->required();
  hist_cmd->add_option("--axis", hist.axis)->capture_default_str();
  hist_cmd->add_option("--format", hist.format)->capture_default_str();
  hist_cmd->add_option("--out", hist.out, "Write to a file instead of stdout");

  DiffArgs diff;
  auto* diff_cmd = app.add_subcommand("diff", "Compare the top entities of two datasets");
  diff_cmd->add_option("--old", diff.old_path)->required();
  diff_cmd->add_option("--new", diff.new_path)->required();
  diff_cmd->add_option("--axis", diff.axis)->capture_default_str();
  diff_cmd->add_option("--top", diff.top)->capture_default_str();
  diff_cmd->add_option("--renames", diff.renames, "Rename map JSON");
  diff_cmd->add_option("--rank-base", diff.rank_base, "0 or 1")->capture_default_str();
  diff_cmd->add_option("--format", diff.format)->capture_default_str();
  diff_cmd->add_option("--table", diff.table, "top (side by side) or moves (old top and where it went)")
      ->capture_default_str();

  GrowthArgs growth;
  auto* growth_cmd = app.add_subcommand("growth", "Aggregate growth between two datasets");
  growth_cmd->add_option("--old", growth.old_path)->required();
  growth_cmd->add_option("--new", growth.new_path)->required();
  growth_cmd->add_option("--format", growth.format)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*scrape_cmd) return do_scrape(scrape, out, err);
    if (*import_cmd) return do_import(import, out, err);
    if (*stats_cmd) return do_stats(stats, out);
    if (*hist_cmd) return do_hist(hist, out);
    if (*diff_cmd) return do_diff(diff, out);
    if (*growth_cmd) return do_growth(growth, out);
  } catch (const EmptyCrawl& e) {
    err << "error: " << e.what() << "\n";
    return kEmptyCrawl;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsage;
}

}  // namespace tropescope::cli
