#include "sc2apx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sc2apx/error.hpp"

namespace sc2apx {

namespace {

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  // "-0.0" and friends print as zero.
  std::string text(buffer);
  if (text.front() == '-' && std::stod(text) == 0.0) text.erase(0, 1);
  return text;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError("csv: bad number '" + text + "'");
  return value;
}

std::size_t survivor_columns(std::span<const ResultRow> rows) {
  std::size_t n = kMinSurvivorColumns;
  for (const auto& r : rows) n = std::max({n, r.survivors1.size(), r.survivors2.size()});
  return n;
}

std::vector<std::optional<double>> padded(std::vector<std::optional<double>> v,
                                          std::size_t n) {
  v.resize(std::max(v.size(), n), 0.0);
  return v;
}

std::vector<std::string> header(std::size_t columns) {
  std::vector<std::string> h = {"Round", "Type", "Match"};
  for (int army = 1; army <= 2; ++army) {
    for (std::size_t k = 1; k <= columns; ++k) {
      h.push_back(std::to_string(army) + "-" + std::to_string(k));
    }
  }
  h.push_back("1-%");
  h.push_back("2-%");
  return h;
}

std::vector<std::string> cells(const ResultRow& row, std::size_t columns, int survivor_decimals,
                               const char* absent) {
  std::vector<std::string> c = {row.round, row.type, row.match};
  for (const auto* side : {&row.survivors1, &row.survivors2}) {
    const auto values = padded(*side, columns);
    for (const auto& v : values) c.push_back(v ? fixed(*v, survivor_decimals) : absent);
  }
  c.push_back(fixed(row.win1, 2));
  c.push_back(fixed(row.win2, 2));
  return c;
}

void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& line : table) {
    width.resize(std::max(width.size(), line.size()), 0);
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  for (const auto& line : table) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) text += "  ";
      text += line[i];
      if (i + 1 < line.size()) text.append(width[i] - line[i].size(), ' ');
    }
    out << text << '\n';
  }
}

nlohmann::ordered_json optional_list(const std::vector<std::optional<double>>& values) {
  auto list = nlohmann::ordered_json::array();
  for (const auto& v : values) list.push_back(v ? nlohmann::ordered_json(*v) : nullptr);
  return list;
}

}  // namespace

std::optional<ReportFormat> parse_format(std::string_view text) {
  if (text == "table") return ReportFormat::Table;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

ResultRow make_row(const AggregateResult& result) {
  ResultRow row;
  const auto& m = result.spec.matchup;
  if (m.id) {
    row.round = std::to_string(m.id->round);
    row.match = std::string(to_string(m.id->pairing));
  } else {
    row.match = m.name;
  }
  row.type = std::string(to_string(result.spec.model));
  auto side = [](const std::optional<std::vector<double>>& means, std::size_t classes) {
    std::vector<std::optional<double>> out;
    for (std::size_t i = 0; i < classes; ++i) {
      out.push_back(means ? std::optional<double>((*means)[i]) : std::nullopt);
    }
    // An army that never won has no survivor figures at all, padding included.
    if (!means) {
      out.resize(std::max<std::size_t>(out.size(), kMinSurvivorColumns));
      return out;
    }
    return padded(std::move(out), kMinSurvivorColumns);
  };
  row.survivors1 = side(result.mean_survivors1, m.army1.size());
  row.survivors2 = side(result.mean_survivors2, m.army2.size());
  row.win1 = result.reported_win1;
  row.win2 = result.reported_win2;
  return row;
}

ResultRow make_row(const ReferenceRow& ref) {
  ResultRow row;
  row.round = std::to_string(ref.round);
  row.type = ref.type_label();
  row.match = std::string(to_string(ref.match));
  for (int k = 0; k < 4; ++k) {
    row.survivors1.push_back(ref.survivors1[k]);
    row.survivors2.push_back(ref.survivors2[k]);
  }
  row.win1 = ref.win1();
  row.win2 = ref.win2();
  return row;
}

void write_rows(std::ostream& out, std::span<const ResultRow> rows, ReportFormat format) {
  const std::size_t columns = survivor_columns(rows);
  switch (format) {
    case ReportFormat::Table: {
      std::vector<std::vector<std::string>> table = {header(columns)};
      for (const auto& r : rows) table.push_back(cells(r, columns, 0, "-"));
      write_aligned(out, table);
      break;
    }
    case ReportFormat::Csv: {
      auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
          out << (i ? "," : "") << csv_field(fields[i]);
        }
        out << '\n';
      };
      line(header(columns));
      for (const auto& r : rows) line(cells(r, columns, 1, ""));
      break;
    }
    case ReportFormat::Json: {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["round"] = r.round;
        j["type"] = r.type;
        j["match"] = r.match;
        j["survivors1"] = optional_list(r.survivors1);
        j["survivors2"] = optional_list(r.survivors2);
        j["win1"] = r.win1;
        j["win2"] = r.win2;
        doc.push_back(std::move(j));
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
}

std::vector<ResultRow> parse_rows_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  const auto head = split_csv_line(line);
  if (head.size() < 5 || (head.size() - 5) % 2 != 0) throw ParseError("csv: bad header");
  const std::size_t columns = (head.size() - 5) / 2;
  if (head != header(columns)) throw ParseError("csv: unexpected header");

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != head.size()) throw ParseError("csv: wrong number of fields");
    ResultRow r{f[0], f[1], f[2], {}, {}, 0.0, 0.0};
    for (std::size_t k = 0; k < columns; ++k) {
      for (auto [side, offset] : {std::pair{&r.survivors1, 3 + k},
                                  std::pair{&r.survivors2, 3 + columns + k}}) {
        const auto& cell = f[offset];
        side->push_back(cell.empty() ? std::nullopt : std::optional(parse_double(cell)));
      }
    }
    r.win1 = parse_double(f[3 + 2 * columns]);
    r.win2 = parse_double(f[4 + 2 * columns]);
    rows.push_back(std::move(r));
  }
  return rows;
}

double ComparisonRow::delta_reference() const { return std::abs(simulated_win1 - reference_win1); }
double ComparisonRow::delta_test() const { return std::abs(simulated_win1 - test_win1); }

std::vector<ComparisonRow> compare_with_reference(std::span<const AggregateResult> results) {
  std::vector<ComparisonRow> rows;
  for (const auto& r : results) {
    const auto& id = r.spec.matchup.id;
    if (!id) {
      throw IncompleteReferenceError("no reference data for scenario '" +
                                     r.spec.matchup.name + "'");
    }
    rows.push_back({*id, r.spec.model, r.reported_win1,
                    reference_row(*id, r.spec.model).win1(),
                    reference_row(*id, std::nullopt).win1()});
  }
  return rows;
}

void write_comparison(std::ostream& out, std::span<const ComparisonRow> rows,
                      ReportFormat format) {
  const std::vector<std::string> head = {"Round", "Match",   "Model",     "Sim 1-%",
                                         "Ref 1-%", "Test 1-%", "|Sim-Ref|", "|Sim-Test|"};
  auto fields = [](const ComparisonRow& r) {
    return std::vector<std::string>{std::to_string(r.id.round),
                                    std::string(to_string(r.id.pairing)),
                                    std::string(to_string(r.model)),
                                    fixed(r.simulated_win1, 2),
                                    fixed(r.reference_win1, 2),
                                    fixed(r.test_win1, 2),
                                    fixed(r.delta_reference(), 2),
                                    fixed(r.delta_test(), 2)};
  };
  switch (format) {
    case ReportFormat::Table: {
      std::vector<std::vector<std::string>> table = {head};
      for (const auto& r : rows) table.push_back(fields(r));
      write_aligned(out, table);
      break;
    }
    case ReportFormat::Csv:
      out << "round,match,model,sim_win1,ref_win1,test_win1,delta_ref,delta_test\n";
      for (const auto& r : rows) {
        const auto f = fields(r);
        for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
        out << '\n';
      }
      break;
    case ReportFormat::Json: {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["round"] = r.id.round;
        j["match"] = std::string(to_string(r.id.pairing));
        j["model"] = std::string(to_string(r.model));
        j["sim_win1"] = r.simulated_win1;
        j["ref_win1"] = r.reference_win1;
        j["test_win1"] = r.test_win1;
        j["delta_ref"] = r.delta_reference();
        j["delta_test"] = r.delta_test();
        doc.push_back(std::move(j));
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
}

const ModelError* ModelErrorSummary::find(ModelId model) const {
  for (const auto& m : models) {
    if (m.model == model) return &m;
  }
  return nullptr;
}

ModelErrorSummary mae_by_model(std::span<const ReferenceRow> reference) {
  std::map<MatchupId, const ReferenceRow*> tests;
  std::map<ModelId, std::map<MatchupId, const ReferenceRow*>> by_model;
  std::set<MatchupId> matches;
  for (const auto& row : reference) {
    matches.insert(row.id());
    if (row.model) {
      by_model[*row.model][row.id()] = &row;
    } else {
      tests[row.id()] = &row;
    }
  }
  for (const auto& id : matches) {
    if (!tests.contains(id)) {
      throw IncompleteReferenceError("no Test row for " + to_string(id));
    }
  }
  ModelErrorSummary summary;
  for (const auto& [model, rows] : by_model) {
    if (rows.size() != matches.size()) {
      throw IncompleteReferenceError(std::string(to_string(model)) +
                                     " rows missing for some matches");
    }
    std::int64_t centi = 0;
    for (const auto& [id, row] : rows) centi += std::abs(row->win1_centi - tests[id]->win1_centi);
    const int n = static_cast<int>(rows.size());
    summary.models.push_back({model, n, static_cast<double>(centi) / (100.0 * n), centi});
  }
  return summary;
}

ModelErrorSummary mae_by_model(std::span<const ReferenceRow> reference,
                               std::span<const AggregateResult> simulated) {
  std::map<MatchupId, const ReferenceRow*> tests;
  for (const auto& row : reference) {
    if (!row.model) tests[row.id()] = &row;
  }
  std::map<ModelId, std::pair<int, double>> totals;
  for (const auto& r : simulated) {
    const auto& id = r.spec.matchup.id;
    if (!id || !tests.contains(*id)) {
      throw IncompleteReferenceError("no Test row for simulated matchup '" +
                                     r.spec.matchup.name + "'");
    }
    auto& [count, sum] = totals[r.spec.model];
    ++count;
    sum += std::abs(r.reported_win1 - tests[*id]->win1());
  }
  ModelErrorSummary summary;
  for (const auto& [model, t] : totals) {
    summary.models.push_back({model, t.first, t.second / t.first, std::nullopt});
  }
  return summary;
}

void write_mae(std::ostream& out, const ModelErrorSummary& summary, ReportFormat format,
               bool chart) {
  switch (format) {
    case ReportFormat::Table: {
      std::vector<std::vector<std::string>> table = {{"Model", "Matches", "MAE(1-%)"}};
      for (const auto& m : summary.models) {
        table.push_back({std::string(to_string(m.model)), std::to_string(m.matches),
                         fixed(m.mae, 4)});
      }
      write_aligned(out, table);
      if (chart) {
        out << '\n';
        for (const auto& m : summary.models) {
          const auto bar = static_cast<std::size_t>(std::lround(m.mae * 100.0));
          out << to_string(m.model) << " |" << std::string(bar, '#') << ' '
              << fixed(m.mae, 4) << '\n';
        }
      }
      break;
    }
    case ReportFormat::Csv:
      out << "model,matches,mae\n";
      for (const auto& m : summary.models) {
        out << to_string(m.model) << ',' << m.matches << ',' << fixed(m.mae, 4) << '\n';
      }
      break;
    case ReportFormat::Json: {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& m : summary.models) {
        nlohmann::ordered_json j;
        j["model"] = std::string(to_string(m.model));
        j["matches"] = m.matches;
        j["mae"] = m.mae;
        if (m.abs_error_centi) j["abs_error_centi"] = *m.abs_error_centi;
        doc.push_back(std::move(j));
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
}

}  // namespace sc2apx
