#pragma once

// JSON forms of rule tables, bound reports and solution lists.
//
// Rule table:
//
//   {
//     "sequence": "narayana", "p": 3, "modulus": 24, "domain_start": 1,
//     "cap": {"log_multiplier": 1, "slack": 6},
//     "rules": [
//       {"label": "...", "modulus": 8, "residues": [1, 2, 3, 4, 6],
//        "formula": {"kind": "constant", "value": 0}},
//       {"label": "...", "modulus": 24, "residues": [23],
//        "formula": {"kind": "shift_plus", "shift": 1, "offset": 1}},
//       {"label": "...", "modulus": 16, "residues": [15],
//        "formula": {"kind": "product_plus", "shifts": [1, 17], "offset": -3}}
//     ]
//   }

#include "json.hpp"

#include "narval/closed_forms.hpp"
#include "narval/diophantine.hpp"

namespace narval {

nlohmann::json to_json(const RuleTable& table);

/// Rebuilds a table through the validating constructor. Throws
/// std::invalid_argument on an unknown formula kind or a table that fails
/// validation, and nlohmann::json::exception on a malformed document.
RuleTable rule_table_from_json(const nlohmann::json& doc);

/// Rationals serialize as "p/q" strings, trace values as numbers.
nlohmann::json to_json(const RootInterval& root);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const std::vector<SolutionPair>& solutions);

/// Decimal digits of `value`; with a nonzero cap, longer values print as the
/// leading `cap` digits followed by "...(N digits)".
std::string format_digits(const BigInt& value, std::size_t cap = 0);

}  // namespace narval
