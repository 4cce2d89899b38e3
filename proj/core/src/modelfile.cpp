#include "varjet/modelfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "varjet/parser.hpp"

namespace varjet {

namespace {

using nlohmann::json;

std::string require_string(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ModelError(std::string("model file: missing string field '") + key + "'");
    return j[key].get<std::string>();
}

// Component-keyed map of expression names -> expressions, laid out in bundle
// component order. Every component must be covered exactly once.
std::vector<Expression> resolve_components(const json& map, const BundleSpec& bundle,
                                           const json& expressions,
                                           const std::string& what) {
    if (!map.is_object())
        throw ModelError("model file: '" + what + "' must be an object");
    std::vector<Expression> out(static_cast<std::size_t>(bundle.total_components()));
    std::vector<bool> seen(out.size(), false);
    for (const auto& [key, value] : map.items()) {
        const auto ord = bundle.component_ordinal_by_name(key);
        if (!ord)
            throw ModelError("model file: '" + what + "' names unknown component '" +
                             key + "'");
        if (!value.is_string())
            throw ModelError("model file: '" + what + "." + key +
                             "' must name an expression");
        const std::string ename = value.get<std::string>();
        if (!expressions.contains(ename))
            throw ModelError("model file: expression '" + ename + "' is not defined");
        out[static_cast<std::size_t>(*ord)] =
            parse_expression(expressions[ename].get<std::string>(), bundle);
        seen[static_cast<std::size_t>(*ord)] = true;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k])
            throw ModelError("model file: '" + what + "' misses component '" +
                             bundle.component_name(bundle.components()[k]) + "'");
    return out;
}

} // namespace

Model parse_model_json(const std::string& text, const std::string& display_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("model file '" + display_name + "': " + e.what());
    }
    if (!j.is_object()) throw ModelError("model file must be a JSON object");

    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw ModelError("model file: missing integer field 'dimension'");
    const int n = j["dimension"].get<int>();

    if (!j.contains("fields") || !j["fields"].is_array())
        throw ModelError("model file: missing array field 'fields'");
    std::vector<FieldDecl> fields;
    for (const json& f : j["fields"]) {
        const std::string name = require_string(f, "name");
        const auto kind = field_kind_from_name(require_string(f, "kind"));
        if (!kind)
            throw ModelError("model file: unknown field kind for '" + name + "'");
        fields.push_back({name, *kind});
    }

    int order_bound = 8;
    if (j.contains("order_bound")) {
        if (!j["order_bound"].is_number_integer())
            throw ModelError("model file: 'order_bound' must be an integer");
        order_bound = j["order_bound"].get<int>();
    }
    BundleSpec bundle(n, std::move(fields), order_bound);

    const json expressions = j.contains("expressions") ? j["expressions"] : json::object();
    if (!expressions.is_object())
        throw ModelError("model file: 'expressions' must be an object");
    for (const auto& [key, value] : expressions.items())
        if (!value.is_string())
            throw ModelError("model file: expression '" + key + "' must be a string");

    Model m{j.contains("name") ? require_string(j, "name") : display_name,
            bundle,
            std::nullopt,
            std::nullopt,
            {},
            j.contains("notes") ? require_string(j, "notes") : ""};

    if (j.contains("lagrangian")) {
        const std::string lname = require_string(j, "lagrangian");
        if (!expressions.contains(lname))
            throw ModelError("model file: expression '" + lname + "' is not defined");
        m.lagrangian =
            Density{parse_expression(expressions[lname].get<std::string>(), bundle)};
    }
    if (j.contains("source"))
        m.source = SourceEquation{
            resolve_components(j["source"], bundle, expressions, "source")};
    if (!m.lagrangian && !m.source)
        throw ModelError("model file: needs a 'lagrangian' or a 'source'");

    if (j.contains("vectorfields")) {
        if (!j["vectorfields"].is_object())
            throw ModelError("model file: 'vectorfields' must be an object");
        for (const auto& [name, comp_map] : j["vectorfields"].items())
            m.known_symmetries.emplace_back(
                name, EvolutionaryField{resolve_components(comp_map, bundle, expressions,
                                                           "vectorfields." + name)});
    }
    return m;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str(), path);
}

std::string model_to_json(const Model& m) {
    json j;  // std::map-backed: keys serialize alphabetically, deterministic
    j["name"] = m.name;
    j["dimension"] = m.bundle.dim();
    j["order_bound"] = m.bundle.order_bound();
    json fields = json::array();
    for (const FieldDecl& f : m.bundle.fields())
        fields.push_back({{"name", f.name}, {"kind", std::string(field_kind_name(f.kind))}});
    j["fields"] = fields;
    if (!m.notes.empty()) j["notes"] = m.notes;

    json expressions = json::object();
    if (m.lagrangian) {
        expressions["L"] = to_string(m.lagrangian->coeff, m.bundle);
        j["lagrangian"] = "L";
    }
    const auto& comps = m.bundle.components();
    if (m.source) {
        json src = json::object();
        for (std::size_t k = 0; k < comps.size(); ++k) {
            const std::string cname = m.bundle.component_name(comps[k]);
            const std::string ename = "T[" + cname + "]";
            expressions[ename] = to_string(m.source->comps[k], m.bundle);
            src[cname] = ename;
        }
        j["source"] = src;
    }
    if (!m.known_symmetries.empty()) {
        json vfs = json::object();
        for (const auto& [vname, vf] : m.known_symmetries) {
            json entry = json::object();
            for (std::size_t k = 0; k < comps.size(); ++k) {
                const std::string cname = m.bundle.component_name(comps[k]);
                const std::string ename = "V[" + vname + "][" + cname + "]";
                expressions[ename] = to_string(vf.comps[k], m.bundle);
                entry[cname] = ename;
            }
            vfs[vname] = entry;
        }
        j["vectorfields"] = vfs;
    }
    j["expressions"] = expressions;
    return j.dump(2);
}

} // namespace varjet
