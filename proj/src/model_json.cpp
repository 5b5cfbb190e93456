#include "relsys/model_json.hpp"

#include <set>
#include <utility>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ValidationError(path + ": " + why);
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path.empty() ? "config" : path, "must be an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    return j.get<double>();
}

double number_member(const json& j, const std::string& path, const char* key) {
    return number_at(member(j, path, key), path + "." + key);
}

std::string string_member(const json& j, const std::string& path, const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_string()) fail(path + "." + key, "must be a string");
    return v.get<std::string>();
}

std::vector<double> number_array_member(const json& j, const std::string& path, const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_array()) fail(path + "." + key, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number_at(v[i], path + "." + key + "[" + std::to_string(i) + "]"));
    }
    return out;
}

/// Reraises construction-time validation errors with the JSON field path.
template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

IntensityFunction intensity_from_json(const json& j, const std::string& path) {
    const std::string kind = string_member(j, path, "kind");
    if (kind == "constant") {
        const double rate = number_member(j, path, "rate");
        return at_path(path, [&] { return IntensityFunction::constant(rate); });
    }
    if (kind == "linear") {
        const double base = number_member(j, path, "base");
        const double slope = number_member(j, path, "slope");
        return at_path(path, [&] { return IntensityFunction::linear(base, slope); });
    }
    if (kind == "piecewise") {
        auto breakpoints = number_array_member(j, path, "breakpoints");
        auto rates = number_array_member(j, path, "rates");
        return at_path(path, [&] {
            return IntensityFunction::piecewise_constant(std::move(breakpoints), std::move(rates));
        });
    }
    fail(path + ".kind", "unknown intensity kind '" + kind + "'");
}

StressDistribution stress_from_json(const json& j, const std::string& path) {
    auto support = number_array_member(j, path, "support");
    auto probs = number_array_member(j, path, "probs");
    // StressDistribution messages already carry the "stress." prefix.
    return StressDistribution(std::move(support), std::move(probs));
}

ServiceDistribution service_from_json(const json& j, const std::string& path) {
    const std::string kind = string_member(j, path, "kind");
    if (kind == "exponential") {
        const double rate = number_member(j, path, "rate");
        return at_path(path, [&] { return ServiceDistribution::exponential(rate); });
    }
    if (kind == "uniform") {
        const double lo = number_member(j, path, "lo");
        const double hi = number_member(j, path, "hi");
        return at_path(path, [&] { return ServiceDistribution::uniform(lo, hi); });
    }
    if (kind == "weibull") {
        const double shape = number_member(j, path, "shape");
        const double scale = number_member(j, path, "scale");
        return at_path(path, [&] { return ServiceDistribution::weibull(shape, scale); });
    }
    fail(path + ".kind", "unknown service kind '" + kind + "'");
}

std::vector<std::string> string_array_member(const json& j, const std::string& path,
                                             const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_array()) fail(path + "." + key, "must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) {
            fail(path + "." + key + "[" + std::to_string(i) + "]", "must be a string");
        }
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

StructureExpr structure_from_json(const json& j, const std::string& path) {
    const std::string kind = string_member(j, path, "kind");
    if (kind == "component") {
        const std::string id = string_member(j, path, "id");
        return at_path(path, [&] { return StructureExpr::component(id); });
    }
    if (kind == "series" || kind == "parallel" || kind == "kofn") {
        const json& kids = member(j, path, "children");
        if (!kids.is_array()) fail(path + ".children", "must be an array");
        std::vector<StructureExpr> children;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            children.push_back(
                structure_from_json(kids[i], path + ".children[" + std::to_string(i) + "]"));
        }
        if (kind == "series") {
            return at_path(path, [&] { return StructureExpr::series(std::move(children)); });
        }
        if (kind == "parallel") {
            return at_path(path, [&] { return StructureExpr::parallel(std::move(children)); });
        }
        const json& kv = member(j, path, "k");
        if (!kv.is_number_integer()) fail(path + ".k", "must be an integer");
        const int k = kv.get<int>();
        return at_path(path, [&] { return StructureExpr::k_of_n(k, std::move(children)); });
    }
    if (kind == "bridge") {
        auto ids = string_array_member(j, path, "ids");
        return at_path(path, [&] { return StructureExpr::bridge(std::move(ids)); });
    }
    if (kind == "paths") {
        const json& sets = member(j, path, "sets");
        if (!sets.is_array()) fail(path + ".sets", "must be an array of id arrays");
        std::vector<std::vector<std::string>> parsed;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const std::string item_path = path + ".sets[" + std::to_string(i) + "]";
            if (!sets[i].is_array()) fail(item_path, "must be an array of strings");
            std::vector<std::string> one;
            for (std::size_t q = 0; q < sets[i].size(); ++q) {
                if (!sets[i][q].is_string()) {
                    fail(item_path + "[" + std::to_string(q) + "]", "must be a string");
                }
                one.push_back(sets[i][q].get<std::string>());
            }
            parsed.push_back(std::move(one));
        }
        return at_path(path, [&] { return StructureExpr::paths(std::move(parsed)); });
    }
    fail(path + ".kind", "unknown structure kind '" + kind + "'");
}

json intensity_to_json(const IntensityFunction& f) {
    json j;
    switch (f.kind()) {
        case IntensityKind::Constant:
            j["kind"] = "constant";
            j["rate"] = f.constant_rate();
            return j;
        case IntensityKind::Linear:
            j["kind"] = "linear";
            j["base"] = f.linear_base();
            j["slope"] = f.linear_slope();
            return j;
        case IntensityKind::PiecewiseConstant:
            j["kind"] = "piecewise";
            j["breakpoints"] = f.breakpoints();
            j["rates"] = f.rates();
            return j;
        case IntensityKind::Sum:
            break;
    }
    throw ValidationError("intensity: sum form has no JSON encoding");
}

json service_to_json(const ServiceDistribution& s) {
    json j;
    switch (s.kind()) {
        case ServiceKind::Exponential:
            j["kind"] = "exponential";
            j["rate"] = s.param_a();
            return j;
        case ServiceKind::Uniform:
            j["kind"] = "uniform";
            j["lo"] = s.param_a();
            j["hi"] = s.param_b();
            return j;
        case ServiceKind::Weibull:
            j["kind"] = "weibull";
            j["shape"] = s.param_a();
            j["scale"] = s.param_b();
            return j;
    }
    throw ValidationError("service: unknown kind");
}

json structure_to_json(const StructureExpr& e) {
    json j;
    switch (e.kind()) {
        case StructureKind::Component:
            j["kind"] = "component";
            j["id"] = e.id();
            return j;
        case StructureKind::Series:
        case StructureKind::Parallel:
        case StructureKind::KOfN: {
            j["kind"] = e.kind() == StructureKind::Series
                            ? "series"
                            : (e.kind() == StructureKind::Parallel ? "parallel" : "kofn");
            if (e.kind() == StructureKind::KOfN) j["k"] = e.k();
            json kids = json::array();
            for (const auto& c : e.children()) kids.push_back(structure_to_json(c));
            j["children"] = std::move(kids);
            return j;
        }
        case StructureKind::Bridge:
            j["kind"] = "bridge";
            j["ids"] = e.bridge_ids();
            return j;
        case StructureKind::Paths:
            j["kind"] = "paths";
            j["sets"] = e.sets();
            return j;
    }
    throw ValidationError("structure: unknown kind");
}

}  // namespace

SystemModel model_from_json(const json& config) {
    if (!config.is_object()) {
        throw ValidationError("config: must be a JSON object");
    }
    SystemModel model;

    const json& nodes = member(config, "", "nodes");
    if (!nodes.is_array() || nodes.empty()) {
        fail("nodes", "must be a nonempty array");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string path = "nodes[" + std::to_string(i) + "]";
        NodeSpec spec{string_member(nodes[i], path, "id"),
                      intensity_from_json(member(nodes[i], path, "baseline"), path + ".baseline"),
                      intensity_from_json(member(nodes[i], path, "intensity"),
                                          path + ".intensity")};
        if (spec.id.empty()) fail(path + ".id", "must be nonempty");
        model.nodes.push_back(std::move(spec));
    }

    model.correlator = intensity_from_json(member(config, "", "correlator"), "correlator");
    model.stress = stress_from_json(member(config, "", "stress"), "stress");
    model.service = service_from_json(member(config, "", "service"), "service");
    model.topology = structure_from_json(member(config, "", "structure"), "structure");

    model.validate();
    return model;
}

SystemModel model_from_json_text(const std::string& text) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw ValidationError("config: malformed JSON");
    }
    return model_from_json(parsed);
}

json model_to_json(const SystemModel& model) {
    json j;
    json nodes = json::array();
    for (const auto& n : model.nodes) {
        json node;
        node["id"] = n.id;
        node["baseline"] = intensity_to_json(n.baseline);
        node["intensity"] = intensity_to_json(n.private_intensity);
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    j["correlator"] = intensity_to_json(model.correlator);
    json stress;
    stress["support"] = model.stress.support();
    stress["probs"] = model.stress.probs();
    j["stress"] = std::move(stress);
    j["service"] = service_to_json(model.service);
    j["structure"] = structure_to_json(model.topology);
    return j;
}

}  // namespace relsys
