#include <boost/multiprecision/mpfr.hpp>

#include "perc/error.hpp"
#include "perc/json_io.hpp"

namespace perc {

namespace {

Json edge_json(const LatticePatch& patch, EdgeId e) {
    const Edge& ed = patch.edge(e);
    return Json{{"id", e}, {"a", patch.label(ed.a)}, {"b", patch.label(ed.b)}};
}

}  // namespace

Json to_json(const RunSpec& spec) {
    Json j{{"command", spec.command}, {"params", spec.params}};
    if (!spec.output.empty()) j["output"] = spec.output;
    return j;
}

RunSpec run_spec_from_json(const Json& j) {
    RunSpec s;
    s.command = j.at("command").get<std::string>();
    if (j.contains("params")) s.params = j.at("params");
    if (j.contains("output")) s.output = j.at("output").get<std::string>();
    return s;
}

Json rational_json(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    return Json{{"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}};
}

Json to_json(const Estimate& e) { return Json{{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples}}; }

Json to_json(const ClusterShape& s) {
    return Json{{"vertices", s.vertices}, {"edges", s.edges}, {"boundary_size", s.boundary_size}};
}

Json to_json(const RationalPolynomial& p) {
    Json coeffs = Json::array();
    for (const auto& c : p.coefficients()) coeffs.push_back(to_string(c));
    return Json{{"text", p.to_string()}, {"coefficients", coeffs}};
}

Json to_json(const ShapeSum& s) {
    Json terms = Json::array();
    for (const auto& [key, count] : s.terms())
        terms.push_back(Json{{"count", count.get_str()}, {"p_power", key.first}, {"q_power", key.second}});
    return Json{{"text", s.to_string()}, {"terms", terms}};
}

Json to_json(const LatticePatch& patch, const PlanarInterface& s) {
    Json inner = Json::array(), outer = Json::array(), walk = Json::array();
    for (EdgeId e : s.inner) inner.push_back(edge_json(patch, e));
    for (EdgeId e : s.outer) outer.push_back(edge_json(patch, e));
    for (Dart d : s.walk)
        walk.push_back(Json{{"edge", dart_edge(d)}, {"from", patch.label(patch.dart_tail(d))},
                            {"to", patch.label(patch.dart_head(d))}});
    return Json{{"inner", inner}, {"outer", outer}, {"walk", walk}, {"vertex_count", s.vertices.size()}};
}

Json to_json(const LatticePatch& patch, const PInterface& s) {
    Json iv = Json::array(), io = Json::array();
    for (EdgeId e : s.i_v) iv.push_back(edge_json(patch, e));
    for (EdgeId e : s.i_o) io.push_back(edge_json(patch, e));
    return Json{{"i_v", iv}, {"i_o", io}, {"witness_size", s.witness.size()}};
}

Json to_json(const VerificationReport& r) { return Json{{"valid", r.valid}, {"violations", r.violations}}; }

Json to_json(const ExpSum& f) {
    Json terms = Json::array();
    for (const auto& [rate, c] : f.terms()) terms.push_back(Json{{"coefficient", to_string(c)}, {"rate", to_string(rate)}});
    return Json{{"text", f.to_string()}, {"terms", terms}};
}

Json to_json(const MaclaurinSlice& s) {
    Json coeffs = Json::array();
    for (std::size_t k = 0; k < s.size(); ++k) {
        Json c{{"k", k}, {"sign", s.sign(k)}};
        if (s.is_exact())
            c["value"] = to_string(s.exact[k]);
        else {
            c["value"] = s.values[k].str(30, std::ios_base::scientific);
            c["error_bound"] = s.errors[k].str(3, std::ios_base::scientific);
        }
        coeffs.push_back(std::move(c));
    }
    return Json{{"origin", to_string(s.origin)}, {"exact", s.is_exact()}, {"coefficients", coeffs}};
}

std::vector<EdgeId> edges_from_json(const LatticePatch& patch, const Json& list) {
    if (!list.is_array()) throw InvalidArgument("edge list must be an array");
    std::vector<EdgeId> out;
    for (const auto& item : list) {
        if (item.is_number_unsigned() || (item.is_object() && item.contains("id") && item["id"].is_number_unsigned())) {
            auto e = (item.is_object() ? item["id"] : item).get<EdgeId>();
            if (e >= patch.edge_count()) throw InvalidArgument("edge id out of range");
            out.push_back(e);
        } else if (item.is_array() && item.size() == 2) {
            auto a = item[0].get<VertexId>(), b = item[1].get<VertexId>();
            if (a >= patch.vertex_count() || b >= patch.vertex_count()) throw InvalidArgument("vertex id out of range");
            auto e = patch.find_edge(a, b);
            if (!e) throw InvalidArgument("no edge between the given vertices");
            out.push_back(*e);
        } else {
            throw InvalidArgument("edge entries must be ids, {\"id\": ...} objects or [a, b] pairs");
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace perc
