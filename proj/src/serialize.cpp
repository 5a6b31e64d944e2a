#include "narval/serialize.hpp"

namespace narval {

namespace {

nlohmann::json formula_to_json(const Formula& f) {
    if (const auto* c = std::get_if<formula::Constant>(&f)) return {{"kind", "constant"}, {"value", c->value}};
    if (const auto* s = std::get_if<formula::ShiftPlus>(&f))
        return {{"kind", "shift_plus"}, {"shift", s->shift}, {"offset", s->offset}};
    const auto& pp = std::get<formula::ProductPlus>(f);
    return {{"kind", "product_plus"}, {"shifts", pp.shifts}, {"offset", pp.offset}};
}

Formula formula_from_json(const nlohmann::json& doc) {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "constant") return formula::Constant{doc.at("value").get<std::uint64_t>()};
    if (kind == "shift_plus")
        return formula::ShiftPlus{doc.at("shift").get<std::uint64_t>(), doc.at("offset").get<std::int64_t>()};
    if (kind == "product_plus")
        return formula::ProductPlus{doc.at("shifts").get<std::array<std::uint64_t, 2>>(),
                                    doc.at("offset").get<std::int64_t>()};
    throw std::invalid_argument("unknown formula kind: " + kind);
}

}  // namespace

nlohmann::json to_json(const RuleTable& table) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& rule : table.rules()) {
        rules.push_back({{"label", rule.label},
                         {"modulus", rule.modulus},
                         {"residues", rule.residues},
                         {"formula", formula_to_json(rule.formula)}});
    }
    return {{"sequence", table.sequence()},
            {"p", table.prime()},
            {"modulus", table.modulus()},
            {"domain_start", table.domain_start()},
            {"cap", {{"log_multiplier", table.cap_policy().log_multiplier}, {"slack", table.cap_policy().slack}}},
            {"rules", std::move(rules)}};
}

RuleTable rule_table_from_json(const nlohmann::json& doc) {
    std::vector<ValuationRule> rules;
    for (const auto& r : doc.at("rules")) {
        rules.push_back({r.at("label").get<std::string>(), r.at("modulus").get<std::uint64_t>(),
                         r.at("residues").get<std::vector<std::uint64_t>>(), formula_from_json(r.at("formula"))});
    }
    CapPolicy cap;
    if (doc.contains("cap")) {
        cap.log_multiplier = doc["cap"].at("log_multiplier").get<std::uint64_t>();
        cap.slack = doc["cap"].at("slack").get<std::uint64_t>();
    }
    return RuleTable(doc.at("sequence").get<std::string>(), doc.at("p").get<std::uint64_t>(),
                     doc.at("modulus").get<std::uint64_t>(), std::move(rules),
                     doc.value("domain_start", Index{1}), cap);
}

nlohmann::json to_json(const RootInterval& root) {
    return {{"lo", root.lo.get_str()},
            {"hi", root.hi.get_str()},
            {"width", root.width.get_str()},
            {"lo_decimal", root.lo.get_d()},
            {"hi_decimal", root.hi.get_d()}};
}

nlohmann::json to_json(const BoundReport& report) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& row : report.per_m_trace) {
        trace.push_back({{"m", row.m},
                         {"lhs", row.lhs},
                         {"rhs_lower", row.rhs_lower},
                         {"rhs_upper", row.rhs_upper},
                         {"feasible", row.feasible},
                         {"stable", row.stable}});
    }
    return {{"m_max", report.m_max},
            {"last_feasible_m", report.last_feasible_m},
            {"n_max", report.n_max},
            {"root", to_json(report.root)},
            {"per_m_trace", std::move(trace)}};
}

nlohmann::json to_json(const std::vector<SolutionPair>& solutions) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : solutions) out.push_back({{"n", s.n}, {"m", s.m}});
    return out;
}

std::string format_digits(const BigInt& value, std::size_t cap) {
    std::string digits = value.get_str();
    const std::size_t sign = digits.starts_with('-') ? 1 : 0;
    const std::size_t count = digits.size() - sign;
    if (cap == 0 || count <= cap) return digits;
    return digits.substr(0, sign + cap) + "...(" + std::to_string(count) + " digits)";
}

}  // namespace narval
