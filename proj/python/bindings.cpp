#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tropescope/compare.hpp"
#include "tropescope/crawl.hpp"
#include "tropescope/dataset.hpp"
#include "tropescope/error.hpp"
#include "tropescope/legacy.hpp"
#include "tropescope/report.hpp"
#include "tropescope/stats.hpp"

namespace py = pybind11;
using namespace tropescope;

namespace {

py::dict summary_dict(const DescriptiveSummary& s) {
  py::dict d;
  d["nobs"] = s.nobs;
  d["min"] = s.min;
  d["max"] = s.max;
  d["mean"] = s.mean;
  d["variance"] = s.variance;
  d["skewness"] = s.skewness ? py::cast(*s.skewness) : py::none();
  d["kurtosis"] = s.kurtosis ? py::cast(*s.kurtosis) : py::none();
  return d;
}

std::vector<RankedEntry> to_ranking(const std::vector<std::pair<std::string, std::size_t>>& rows) {
  std::vector<RankedEntry> out;
  for (const auto& [key, count] : rows) out.push_back(RankedEntry{EntityKey::parse(key), count});
  return out;
}

RenameMap to_renames(const std::map<std::string, std::string>& pairs, EntityKind kind) {
  RenameMap map;
  for (const auto& [from, to] : pairs) map.add(kind, EntityKey::parse(from), EntityKey::parse(to));
  return map;
}

Date to_date(const std::string& text) { return parse_date(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Film/trope snapshot crawling, statistics and comparison";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<NotAWikiPage>(m, "NotAWikiPage", base.ptr());
  py::register_exception<KindConflict>(m, "KindConflict", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<MetaMismatch>(m, "MetaMismatch", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<EmptyInput>(m, "EmptyInput", base.ptr());
  py::register_exception<EmptyCrawl>(m, "EmptyCrawl", base.ptr());

  py::class_<EntityKey>(m, "EntityKey")
      .def(py::init<std::string, std::string>(), py::arg("namespace"), py::arg("title"))
      .def_static("parse", &EntityKey::parse)
      .def_property_readonly("namespace", &EntityKey::ns)
      .def_property_readonly("title", &EntityKey::title)
      .def("__str__", &EntityKey::str)
      .def("__repr__", [](const EntityKey& k) { return "EntityKey('" + k.str() + "')"; })
      .def("__eq__", [](const EntityKey& a, const EntityKey& b) { return a == b; })
      .def("__hash__", [](const EntityKey& k) { return std::hash<std::string>{}(k.str()); });

  m.def("canonicalize_url", [](const std::string& url) { return canonicalize_url(url).str(); }, py::arg("url"),
        "'Namespace/Title' of a wiki page URL; raises NotAWikiPage otherwise.");

  py::class_<BipartiteSnapshot>(m, "Snapshot")
      .def(py::init([](const std::string& captured_at, const std::string& provenance) {
             return BipartiteSnapshot(to_date(captured_at), provenance);
           }),
           py::arg("captured_at") = "1970-01-01", py::arg("provenance") = "scrape")
      .def(
          "add_relation",
          [](BipartiteSnapshot& s, const std::string& film, const std::string& trope) {
            const auto f = EntityKey::parse(film);
            s.add_relation(f, EntityKey::parse(trope), RelationEvidence{EvidenceSource::FilmPage, f});
          },
          py::arg("film"), py::arg("trope"))
      .def("ensure_film", [](BipartiteSnapshot& s, const std::string& film) { s.ensure_film(EntityKey::parse(film)); })
      .def_property_readonly("film_count", &BipartiteSnapshot::film_count)
      .def_property_readonly("trope_count", &BipartiteSnapshot::trope_count)
      .def_property_readonly("connection_count", [](const BipartiteSnapshot& s) { return connection_count(s); })
      .def_property_readonly("captured_at", [](const BipartiteSnapshot& s) { return format_date(s.captured_at()); })
      .def_property_readonly("provenance", &BipartiteSnapshot::provenance)
      .def("films",
           [](const BipartiteSnapshot& s) {
             std::map<std::string, std::vector<std::string>> out;
             for (const auto& [film, tropes] : s.films()) {
               auto& list = out[film.str()];
               for (const auto& t : tropes) list.push_back(t.str());
             }
             return out;
           })
      .def("to_json", &serialize_snapshot)
      .def("__eq__", [](const BipartiteSnapshot& a, const BipartiteSnapshot& b) { return a == b; });

  m.def("load_snapshot", [](const std::filesystem::path& p) { return load_snapshot(p); }, py::arg("path"));
  m.def("save_snapshot", [](const BipartiteSnapshot& s, const std::filesystem::path& p) { save_snapshot(s, p); },
        py::arg("snapshot"), py::arg("path"));
  m.def("parse_snapshot", [](const std::string& text) { return deserialize_snapshot(text); }, py::arg("text"));

  m.def(
      "degree_sequence",
      [](const BipartiteSnapshot& s, const std::string& axis) { return degree_sequence(s, axis_from_string(axis)); },
      py::arg("snapshot"), py::arg("axis") = "films");
  m.def(
      "histogram", [](const BipartiteSnapshot& s, const std::string& axis) { return histogram(s, axis_from_string(axis)); },
      py::arg("snapshot"), py::arg("axis") = "films");
  m.def("describe", [](const std::vector<double>& v) { return summary_dict(describe(std::span<const double>(v))); },
        py::arg("values"));
  m.def(
      "boxplot",
      [](const std::vector<double>& v) {
        const auto b = boxplot(std::span<const double>(v));
        py::dict d;
        d["q1"] = b.q1;
        d["median"] = b.median;
        d["q3"] = b.q3;
        d["iqr"] = b.iqr;
        d["whisker_low"] = b.whisker_low;
        d["whisker_high"] = b.whisker_high;
        d["outlier_count"] = b.outlier_count;
        return d;
      },
      py::arg("values"));

  m.def(
      "top_n",
      [](const BipartiteSnapshot& s, const std::string& axis, std::size_t n) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& e : top_n(s, axis_from_string(axis), n)) out.emplace_back(e.key.str(), e.count);
        return out;
      },
      py::arg("snapshot"), py::arg("axis"), py::arg("n"));
  m.def("percent_change", py::overload_cast<std::optional<std::size_t>, std::size_t>(&percent_change),
        py::arg("old_count"), py::arg("new_count"));
  m.def("format_percent", &format_percent, py::arg("value"));
  m.def("format_ordinal", &format_ordinal, py::arg("value"));
  m.def(
      "mark_common",
      [](const std::vector<std::string>& old_top, const std::vector<std::string>& new_top,
         const std::map<std::string, std::string>& renames, const std::string& kind) {
        const EntityKind k = kind == "trope" ? EntityKind::Trope : EntityKind::Film;
        std::vector<EntityKey> a;
        std::vector<EntityKey> b;
        for (const auto& s : old_top) a.push_back(EntityKey::parse(s));
        for (const auto& s : new_top) b.push_back(EntityKey::parse(s));
        std::set<std::string> out;
        for (const auto& key : mark_common(a, b, to_renames(renames, k), k)) out.insert(key.str());
        return out;
      },
      py::arg("old_top"), py::arg("new_top"), py::arg("renames") = std::map<std::string, std::string>{},
      py::arg("kind") = "film");
  m.def(
      "rank_moves",
      [](const std::vector<std::pair<std::string, std::size_t>>& old_ranking,
         const std::vector<std::pair<std::string, std::size_t>>& new_ranking, std::size_t n,
         const std::map<std::string, std::string>& renames, const std::string& kind, std::size_t rank_base) {
        const EntityKind k = kind == "trope" ? EntityKind::Trope : EntityKind::Film;
        const auto a = to_ranking(old_ranking);
        const auto b = to_ranking(new_ranking);
        py::list out;
        for (const auto& mv : rank_moves(a, b, k, to_renames(renames, k), n, rank_base)) {
          out.append(py::make_tuple(mv.key.str(), mv.old_count, mv.new_count, mv.increment_display, mv.move_display));
        }
        return out;
      },
      py::arg("old_ranking"), py::arg("new_ranking"), py::arg("n"),
      py::arg("renames") = std::map<std::string, std::string>{}, py::arg("kind") = "trope", py::arg("rank_base") = 0);
  m.def(
      "growth_report",
      [](const BipartiteSnapshot& old_s, const BipartiteSnapshot& new_s) {
        const auto axes = [](const BipartiteSnapshot& s) {
          const auto f = degree_sequence(s, Axis::TropesPerFilm);
          const auto t = degree_sequence(s, Axis::FilmsPerTrope);
          return std::pair{f.empty() ? DescriptiveSummary{} : describe(std::span<const std::size_t>(f)),
                           t.empty() ? DescriptiveSummary{} : describe(std::span<const std::size_t>(t))};
        };
        py::dict out;
        for (const auto& line : growth_report(meta_of(old_s), meta_of(new_s), axes(old_s), axes(new_s)).lines) {
          out[py::str(line.label)] = py::make_tuple(line.old_value, line.new_value, format_percent(line.change));
        }
        return out;
      },
      py::arg("old"), py::arg("new"));

  m.def(
      "crawl_fixture",
      [](const std::string& directory, const std::vector<std::string>& seeds, std::size_t workers,
         const std::string& captured_at, std::optional<std::size_t> max_pages) {
        SourceConfig config;
        config.mode = FixtureMode{directory};
        CrawlOptions options;
        options.workers = workers;
        options.captured_at = to_date(captured_at);
        options.limits.max_pages = max_pages;
        std::vector<EntityKey> keys;
        for (const auto& s : seeds) keys.push_back(EntityKey::parse(s));
        std::pair<BipartiteSnapshot, CrawlReport> result;
        {
          py::gil_scoped_release release;
          result = crawl(config, keys, options);
        }
        auto& [snapshot, report] = result;
        py::dict r;
        r["pages_fetched"] = report.pages_fetched;
        r["pages_not_found"] = report.pages_not_found;
        r["pages_failed"] = report.pages_failed;
        r["relations_found"] = report.relations_found;
        return py::make_tuple(std::move(snapshot), r);
      },
      py::arg("directory"), py::arg("seeds"), py::arg("workers") = 4, py::arg("captured_at") = "1970-01-01",
      py::arg("max_pages") = std::nullopt);

  m.def(
      "import_legacy",
      [](const std::filesystem::path& path, std::optional<std::vector<std::string>> predicates,
         const std::string& captured_at) {
        const std::set<std::string> preds =
            predicates ? std::set<std::string>(predicates->begin(), predicates->end()) : kDefaultFeaturePredicates;
        auto [snapshot, stats] = import_legacy(path, preds, WikiScheme{}, to_date(captured_at));
        py::dict s;
        s["relations"] = stats.relations;
        s["skipped_predicate"] = stats.skipped_predicate;
        s["skipped_resource"] = stats.skipped_resource;
        s["malformed"] = stats.malformed;
        return py::make_tuple(std::move(snapshot), s);
      },
      py::arg("path"), py::arg("predicates") = std::nullopt, py::arg("captured_at") = "1970-01-01");

  m.attr("__version__") = std::string(kToolVersion);
}
