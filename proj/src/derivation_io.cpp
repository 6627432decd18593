#include "sessionforge/derivation_io.hpp"

#include <json.hpp>

#include "sessionforge/syntax.hpp"

namespace sf {

namespace {

using Json = nlohmann::ordered_json;

Json node_json(const Derivation& d) {
    Json j;
    j["rule"] = d.rule;
    j["conclusion"] = print_judgment(d.conclusion);
    Json ps = Json::array();
    for (const auto& p : d.premises) ps.push_back(node_json(p));
    j["premises"] = std::move(ps);
    return j;
}

Derivation node_from(const Json& j, System sys, Extension ext, const std::string& where) {
    if (!j.is_object()) throw DerivationFormatError(where + ": node must be an object");
    for (const char* key : {"rule", "conclusion", "premises"})
        if (!j.contains(key)) throw DerivationFormatError(where + ": missing \"" + key + "\"");
    if (!j["rule"].is_string() || !j["conclusion"].is_string() || !j["premises"].is_array())
        throw DerivationFormatError(where + ": wrong field types");
    Derivation d;
    d.rule = j["rule"].get<std::string>();
    const RuleSchema* rs = find_rule(sys, d.rule, ext);
    if (!rs) throw DerivationFormatError(where + ": unknown rule '" + d.rule + "' for " + system_name(sys));
    d.conclusion = parse_judgment(j["conclusion"].get<std::string>(), where);
    if ((sys == System::CLL) != (d.conclusion.system == System::CLL) ||
        (sys == System::ILL) != (d.conclusion.system == System::ILL))
        throw DerivationFormatError(where + ": conclusion does not match system " + system_name(sys));
    d.conclusion.system = sys;
    const auto& ps = j["premises"];
    if (rs->arity >= 0 && ps.size() != static_cast<std::size_t>(rs->arity))
        throw DerivationFormatError(where + ": rule '" + d.rule + "' takes " + std::to_string(rs->arity) +
                                    " premise(s), got " + std::to_string(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i)
        d.premises.push_back(node_from(ps[i], sys, ext, where + "." + std::to_string(i)));
    return d;
}

void render(const Derivation& d, int depth, std::string& out) {
    out += std::string(2 * depth, ' ') + d.rule + "  " + print_judgment(d.conclusion) + "\n";
    for (const auto& p : d.premises) render(p, depth + 1, out);
}

}  // namespace

std::string print_derivation(const Derivation& d) {
    Json j;
    j["format"] = "deriv-v1";
    j["system"] = system_name(d.system());
    Json n = node_json(d);
    for (auto& [k, v] : n.items()) j[k] = v;
    return j.dump(2) + "\n";
}

Derivation parse_derivation(const std::string& text, Extension ext) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DerivationFormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DerivationFormatError("document must be a JSON object");
    if (!j.contains("format") || j["format"] != "deriv-v1")
        throw DerivationFormatError("missing or unsupported \"format\" (expected deriv-v1)");
    if (!j.contains("system") || !j["system"].is_string())
        throw DerivationFormatError("missing \"system\"");
    auto sys = parse_system(j["system"].get<std::string>());
    if (!sys) throw DerivationFormatError("unknown system '" + j["system"].get<std::string>() + "'");
    return node_from(j, *sys, ext, "root");
}

std::string render_tree(const Derivation& d) {
    std::string out;
    render(d, 0, out);
    return out;
}

}  // namespace sf
