#pragma once

#include <json.hpp>

#include "supermoduli/modulispaces.hpp"
#include "supermoduli/supergeodesics.hpp"

namespace supermoduli::io {

using nlohmann::json;

// GrassmannNumber: {"s": int, "terms": [[[i1, i2, ...], re, im], ...]}
// with strictly ascending generator indices per term.
json to_json(const GrassmannNumber& g);
GrassmannNumber grassmann_from_json(const json& j);

// SDim: {"even": int, "odd": int}
json to_json(const SDim& d);
SDim sdim_from_json(const json& j);

// SuperMatrix: {"rows": [r, s], "cols": [m, n], "parity": "even"|"odd",
//               "entries": [[G, ...], ...]} row-major in block order.
json to_json(const SuperMatrix& m);
SuperMatrix matrix_from_json(const json& j);

// ProjectivePoint: {"Z1": G, "Z2": G, "Theta": G}
json to_json(const ProjectivePoint& p);
ProjectivePoint point_from_json(const json& j);

// SpGL21: entry grid plus a "verified" echo of the relation check.
json to_json(const SpGL21& l);
SpGL21 spgl21_from_json(const json& j);

// LabeledTree: {"n": int, "edges": [[u, v], ...], "labels": {"1": v, ...}}
json to_json(const LabeledTree& t);
LabeledTree tree_from_json(const json& j);

// NodalCurve: {"tree": T, "nodes": {"a-b": P, ...}, "marks": {"1": P, ...}}
json to_json(const NodalCurve& c);
NodalCurve curve_from_json(const json& j, double min_separation = 1e-8);

json to_json(const Reparam& g);
Reparam reparam_from_json(const json& j);

// StableMapSkeleton: {"curve": C, "degrees": {"0": d, ...},
//                     "node_values": {"a-b": [G, ...], ...}}
json to_json(const StableMapSkeleton& s);
StableMapSkeleton skeleton_from_json(const json& j);

json to_json(const MapCheckReport& r);

json to_json(const GromovReport& r);
std::string report_text(const GromovReport& r);

// Convergence input: {"limit": C, "sequence": [{"curve": C, "hom": [..],
//                     "reparam": [L, ...]}, ...]}
std::vector<GromovSequenceElement> sequence_from_json(const json& j);

json to_json(const GeodesicSolution& sol);
std::string geodesic_csv(const GeodesicSolution& sol);

}  // namespace supermoduli::io
