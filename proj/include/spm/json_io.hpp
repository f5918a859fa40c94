#pragma once

#include <json.hpp>

#include "spm/builder.hpp"
#include "spm/learner.hpp"

namespace spm {

/// {new, rows:[{pattern_id, instance}], columns:[[[row, position, symbol]]]}.
/// rows[0] is the New pattern.
nlohmann::json alignment_json(const Alignment& a);

/// alignment_json plus {b_new, b_enc, cd, probability}.
nlohmann::json scored_json(const ScoredAlignment& sa);

/// Inverse of alignment_json: Old rows are looked up in g by pattern id.
/// Throws DataError on a malformed object, an unknown id or a symbol that
/// disagrees with its row.
Alignment alignment_from_json(const nlohmann::json& j, const Grammar& g);

/// {grammars:[{g_size, e_size, total, pattern_count}], residual_count}.
nlohmann::json learn_summary_json(const LearnResult& r);

nlohmann::json score_json(const GrammarScore& s);

}  // namespace spm
