#include "tropescope/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tropescope {

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string markdown_cell(const std::string& value) {
  std::string out;
  for (const char c : value) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

bool numeric(const std::string& value) {
  if (value.empty()) return false;
  return value.find_first_not_of("+-0123456789.,%") == std::string::npos;
}

std::string optional_key(const std::optional<EntityKey>& key) { return key ? key->title() : ""; }

std::string optional_count(const std::optional<std::size_t>& count) {
  return count ? std::to_string(*count) : "";
}

}  // namespace

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "md" || text == "markdown") return OutputFormat::Markdown;
  if (text == "text" || text == "tsv") return OutputFormat::Text;
  throw std::invalid_argument("unknown format '" + std::string(text) + "' (use csv, md or text)");
}

std::string render(const Table& table, OutputFormat format) {
  std::string out;
  const auto emit_row = [&](const std::vector<std::string>& row) {
    switch (format) {
      case OutputFormat::Csv:
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        break;
      case OutputFormat::Text:
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "\t" : "") + row[i];
        break;
      case OutputFormat::Markdown:
        out += "|";
        for (const auto& cell : row) out += " " + markdown_cell(cell) + " |";
        break;
    }
    out += '\n';
  };

  emit_row(table.header);
  if (format == OutputFormat::Markdown) {
    out += "|";
    for (std::size_t col = 0; col < table.header.size(); ++col) {
      bool right = !table.rows.empty();
      for (const auto& row : table.rows) {
        if (col < row.size() && !row[col].empty() && !numeric(row[col]) && row[col] != "--") right = false;
      }
      out += right ? " ---: |" : " --- |";
    }
    out += '\n';
  }
  for (const auto& row : table.rows) emit_row(row);
  return out;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  if (value == std::trunc(value) && std::fabs(value) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", value);
  }
  return buf;
}

Table summary_table(const DescriptiveSummary& s) {
  const auto maybe = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
  return Table{{"statistic", "value"},
               {{"nobs", std::to_string(s.nobs)},
                {"min", format_number(s.min)},
                {"max", format_number(s.max)},
                {"mean", format_number(s.mean)},
                {"variance", format_number(s.variance)},
                {"skewness", maybe(s.skewness)},
                {"kurtosis", maybe(s.kurtosis)}}};
}

Table boxplot_table(const BoxplotSummary& s) {
  return Table{{"statistic", "value"},
               {{"q1", format_number(s.q1)},
                {"median", format_number(s.median)},
                {"q3", format_number(s.q3)},
                {"iqr", format_number(s.iqr)},
                {"whisker_low", format_number(s.whisker_low)},
                {"whisker_high", format_number(s.whisker_high)},
                {"outlier_count", std::to_string(s.outlier_count)}}};
}

Table histogram_table(const FrequencyHistogram& histogram) {
  Table table{{"degree", "count"}, {}};
  for (const auto& [degree, count] : histogram) {
    table.rows.push_back({std::to_string(degree), std::to_string(count)});
  }
  return table;
}

Table top_table(const TopTable& top, std::size_t rank_base) {
  Table table{{"rank", "old_name", "old_count", "old_common", "new_name", "new_count", "new_common", "increment"},
              {}};
  for (std::size_t i = 0; i < top.rows.size(); ++i) {
    const auto& row = top.rows[i];
    table.rows.push_back({std::to_string(i + rank_base), optional_key(row.old_name), optional_count(row.old_count),
                          row.old_name ? (row.old_common ? "yes" : "no") : "", optional_key(row.new_name),
                          optional_count(row.new_count), row.new_name ? (row.new_common ? "yes" : "no") : "",
                          row.new_name ? row.increment_display : ""});
  }
  return table;
}

Table moves_table(const std::vector<RankMove>& moves, std::size_t rank_base) {
  Table table{{"rank", "name", "old_count", "new_count", "increment", "moves_to"}, {}};
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto& m = moves[i];
    table.rows.push_back({std::to_string(i + rank_base), m.key.title(), std::to_string(m.old_count),
                          std::to_string(m.new_count), m.increment_display, m.move_display});
  }
  return table;
}

Table growth_table(const GrowthReport& report) {
  Table table{{"measure", "old", "new", "increment"}, {}};
  for (const auto& line : report.lines) {
    table.rows.push_back(
        {line.label, format_number(line.old_value), format_number(line.new_value), format_percent(line.change)});
  }
  return table;
}

}  // namespace tropescope
