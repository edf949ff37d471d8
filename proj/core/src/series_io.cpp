#include "normkam/series_io.hpp"

#include "normkam/errors.hpp"

namespace normkam {

using nlohmann::json;

json series_to_json(const Series& s)
{
    json coeffs = json::array();
    for (const auto& e : s.entries()) {
        coeffs.push_back({{"k", e.k}, {"j", e.j}, {"re", e.value.real()}, {"im", e.value.imag()}});
    }
    return {{"freq", std::vector<double>(s.freq().begin(), s.freq().end())},
            {"order_max", s.order_max()},
            {"cutoff", s.cutoff()},
            {"coeffs", std::move(coeffs)}};
}

Series series_from_json(const json& doc)
{
    try {
        auto freq = doc.at("freq").get<std::vector<double>>();
        const int order_max = doc.at("order_max").get<int>();
        const int cutoff = doc.at("cutoff").get<int>();
        std::vector<SeriesEntry> entries;
        for (const auto& c : doc.at("coeffs")) {
            entries.push_back({c.at("k").get<int>(), c.at("j").get<std::vector<int>>(),
                               Complex{c.at("re").get<double>(), c.value("im", 0.0)}});
        }
        return make_series(std::move(freq), entries, order_max, cutoff);
    } catch (const json::exception& e) {
        throw ParseError(std::string("series JSON: ") + e.what());
    }
}

json map_to_json(const ReversibleCylinderMap& m)
{
    return {{"gamma0", m.gamma0}, {"f", series_to_json(m.f)}, {"g", series_to_json(m.g)}};
}

ReversibleCylinderMap map_from_json(const json& doc)
{
    double gamma0 = 0.0;
    try {
        gamma0 = doc.at("gamma0").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("map JSON: ") + e.what());
    }
    if (!doc.contains("f") || !doc.contains("g")) {
        throw ParseError("map JSON: missing \"f\" or \"g\"");
    }
    Series f = series_from_json(doc["f"]);
    Series g = series_from_json(doc["g"]);
    if (!f.same_layout(g)) {
        throw FrequencyMismatch("map JSON: f and g differ in freq or truncation");
    }
    return {gamma0, std::move(f), std::move(g)};
}

json transform_to_json(const NearIdentityTransform& t)
{
    return {{"u", series_to_json(t.u)}, {"v", series_to_json(t.v)}};
}

}  // namespace normkam
