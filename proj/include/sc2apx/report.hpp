#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sc2apx/monte_carlo.hpp"
#include "sc2apx/scenarios.hpp"

namespace sc2apx {

enum class ReportFormat { Table, Csv, Json };

std::optional<ReportFormat> parse_format(std::string_view text);

/*!
 * One line of a results table shaped like the published one:
 * Round, Type, Match, 1-1..1-N, 2-1..2-N, 1-%, 2-%.
 *
 * There are always at least four survivor columns per army; classes an army
 * does not have read 0. An empty survivor cell means the army never won, so
 * no conditional mean exists.
 */
struct ResultRow {
  std::string round;  // empty for user scenarios
  std::string type;   // "Test", "APX1".."APX4"
  std::string match;  // pairing label or scenario name
  std::vector<std::optional<double>> survivors1;
  std::vector<std::optional<double>> survivors2;
  double win1 = 0.0;
  double win2 = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr int kMinSurvivorColumns = 4;

ResultRow make_row(const AggregateResult& result);
ResultRow make_row(const ReferenceRow& row);

// Table view rounds survivors to integers; CSV keeps one decimal; both use
// two decimals for win fractions. JSON uses full precision.
void write_rows(std::ostream& out, std::span<const ResultRow> rows, ReportFormat format);
std::vector<ResultRow> parse_rows_csv(std::string_view csv);

// Win-rate comparison of one simulated model against the published model
// row and the in-game Test row for the same matchup.
struct ComparisonRow {
  MatchupId id;
  ModelId model = ModelId::Apx1;
  double simulated_win1 = 0.0;
  double reference_win1 = 0.0;
  double test_win1 = 0.0;

  double delta_reference() const;  // |simulated - reference|
  double delta_test() const;       // |simulated - test|
};

// Every result must come from a builtin matchup.
std::vector<ComparisonRow> compare_with_reference(std::span<const AggregateResult> results);
void write_comparison(std::ostream& out, std::span<const ComparisonRow> rows,
                      ReportFormat format);

struct ModelError {
  ModelId model = ModelId::Apx1;
  int matches = 0;
  double mae = 0.0;
  // Sum of |model win1 - test win1| in hundredths; set only when computed
  // from the published rows, where it is exact.
  std::optional<std::int64_t> abs_error_centi;
};

struct ModelErrorSummary {
  std::vector<ModelError> models;  // APX1..APX4 order, models present only

  const ModelError* find(ModelId model) const;
};

// Mean over matches of |win1(model row) - win1(Test row)|. Throws
// IncompleteReferenceError if a match lacks its Test row or a model row.
ModelErrorSummary mae_by_model(std::span<const ReferenceRow> reference);

// Same metric with freshly simulated results (reported_win1) in place of the
// published model rows.
ModelErrorSummary mae_by_model(std::span<const ReferenceRow> reference,
                               std::span<const AggregateResult> simulated);

// `chart` appends a plain-text bar per model in table format.
void write_mae(std::ostream& out, const ModelErrorSummary& summary, ReportFormat format,
               bool chart);

}  // namespace sc2apx
