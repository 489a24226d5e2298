#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tropescope/compare.hpp"
#include "tropescope/stats.hpp"

namespace tropescope {

enum class OutputFormat { Csv, Markdown, Text };

/// "csv", "md"/"markdown", "text"/"tsv".
OutputFormat output_format_from_string(std::string_view text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// CSV (RFC 4180 quoting), a GitHub Markdown table, or tab-separated text.
std::string render(const Table& table, OutputFormat format);

/// Integral values print without decimals, everything else with six.
std::string format_number(double value);

Table summary_table(const DescriptiveSummary& summary);
Table boxplot_table(const BoxplotSummary& summary);
Table histogram_table(const FrequencyHistogram& histogram);
Table top_table(const TopTable& table, std::size_t rank_base = 0);
Table moves_table(const std::vector<RankMove>& moves, std::size_t rank_base = 0);
Table growth_table(const GrowthReport& report);

}  // namespace tropescope
