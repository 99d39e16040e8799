#pragma once

#include <string>

#include "json.hpp"

#include "perc/enumeration.hpp"
#include "perc/interfaces.hpp"
#include "perc/percolation.hpp"
#include "perc/rational.hpp"
#include "perc/series.hpp"

namespace perc {

using Json = nlohmann::ordered_json;

// Everything needed to replay a run.
struct RunSpec {
    std::string command;  // e.g. "simulate theta"
    Json params = Json::object();
    std::string output;   // empty = stdout
};

Json to_json(const RunSpec& spec);
RunSpec run_spec_from_json(const Json& j);

Json rational_json(const mpq_class& q);  // {"num": "...", "den": "..."}
Json to_json(const Estimate& e);
Json to_json(const ClusterShape& s);
Json to_json(const RationalPolynomial& p);
Json to_json(const ShapeSum& s);
Json to_json(const LatticePatch& patch, const PlanarInterface& s);
Json to_json(const LatticePatch& patch, const PInterface& s);
Json to_json(const VerificationReport& r);
Json to_json(const ExpSum& f);
Json to_json(const MaclaurinSlice& s);

// Edge ids from a list of plain ids, {"id": e} objects or [a, b] vertex pairs.
std::vector<EdgeId> edges_from_json(const LatticePatch& patch, const Json& list);

}  // namespace perc
