#include "spm/json_io.hpp"

#include "spm/errors.hpp"

namespace spm {

using nlohmann::json;

json alignment_json(const Alignment& a) {
  json out;
  json news = json::array();
  for (auto s : a.new_row().symbols()) news.push_back(std::string(s.name()));
  out["new"] = std::move(news);
  json rows = json::array();
  for (std::size_t r = 0; r < a.row_count(); ++r) {
    rows.push_back({{"pattern_id", a.row(r).id()}, {"instance", a.instance(r)}});
  }
  out["rows"] = std::move(rows);
  json columns = json::array();
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    json col = json::array();
    for (const auto& cell : a.column(c)) {
      col.push_back(json::array({cell.row, cell.pos, std::string(a.row(cell.row)[cell.pos].name())}));
    }
    columns.push_back(std::move(col));
  }
  out["columns"] = std::move(columns);
  return out;
}

json scored_json(const ScoredAlignment& sa) {
  json out = alignment_json(sa.alignment);
  out["b_new"] = sa.score.b_new;
  out["b_enc"] = sa.score.b_enc;
  out["cd"] = sa.score.cd;
  out["probability"] = sa.probability;
  return out;
}

Alignment alignment_from_json(const json& j, const Grammar& g) {
  try {
    std::vector<Symbol> news;
    for (const auto& s : j.at("new")) news.emplace_back(s.get<std::string>());
    const auto& rows = j.at("rows");
    if (!rows.is_array() || rows.empty()) throw DataError("alignment json: no rows");
    auto new_pattern = std::make_shared<const Pattern>(Pattern::make_new(rows[0].at("pattern_id").get<std::string>(), news));
    std::vector<std::pair<RowRef, PatternPtr>> olds;
    std::vector<PatternPtr> patterns{new_pattern};
    for (std::size_t r = 1; r < rows.size(); ++r) {
      RowRef ref{rows[r].at("pattern_id").get<std::string>(), rows[r].at("instance").get<std::size_t>()};
      auto p = g.find(ref.pattern_id);
      if (!p) throw DataError("alignment json: unknown pattern " + ref.pattern_id);
      olds.emplace_back(std::move(ref), p);
      patterns.push_back(p);
    }
    std::vector<std::vector<Cell>> columns;
    for (const auto& col : j.at("columns")) {
      std::vector<Cell> cells;
      for (const auto& c : col) {
        Cell cell{c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()};
        if (cell.row >= patterns.size() || cell.pos >= patterns[cell.row]->size() ||
            (*patterns[cell.row])[cell.pos].name() != c.at(2).get<std::string>()) {
          throw DataError("alignment json: cell does not match its row");
        }
        cells.push_back(cell);
      }
      columns.push_back(std::move(cells));
    }
    return Alignment::from_columns(new_pattern, std::move(olds), std::move(columns));
  } catch (const json::exception& e) {
    throw DataError(std::string("alignment json: ") + e.what());
  }
}

json score_json(const GrammarScore& s) { return {{"g_size", s.g_size}, {"e_size", s.e_size}, {"total", s.total}}; }

json learn_summary_json(const LearnResult& r) {
  json grammars = json::array();
  for (const auto& sg : r.grammars) {
    json o = score_json(sg.score);
    o["pattern_count"] = sg.grammar.size();
    grammars.push_back(std::move(o));
  }
  return {{"grammars", std::move(grammars)}, {"residual_count", r.residual_discarded.size()}};
}

}  // namespace spm
