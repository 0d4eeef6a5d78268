#ifndef WCO_SERIALIZE_HPP
#define WCO_SERIALIZE_HPP

#include <nlohmann/json_fwd.hpp>
#include <ostream>
#include <string>

#include "wco/dynamics.hpp"
#include "wco/operators.hpp"
#include "wco/spectra.hpp"

namespace wco {

using Json = nlohmann::json;

// Polynomials travel as {"n": 2, "coeffs": {"1,0": [re, im], ...}} with the
// comma-joined exponent vector as the key. A map with several components is
// an array of such objects; a single object is accepted as a scalar map.
Json to_json(const TruncatedSeries& s);
Json to_json(const PolyMap& p);
PolyMap poly_map_from_json(const Json& j);

// {"domain": {"family": "disk", "n": 1}, "space": "weighted_hardy_disk",
//  "b": {"rule": "ones"} or {"list": [...]}, "alpha": number}
Json to_json(const DomainSpec& d);
DomainSpec domain_from_json(const Json& j);
Json to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const Json& j);

Json to_json(const Cplx& c);  // [re, im]
Json to_json(const Point& p);
Point point_from_json(const Json& j);

Json to_json(const WeightLiminfEstimate& e);
Json to_json(const GenzhuScan& s);
Json to_json(const CompactnessReport& r);
Json to_json(const OrbitRecord& r);
Json to_json(const FixedPointReport& r);
Json to_json(const PredictedSet& s);
Json to_json(const SpectrumReport& r);
Json to_json(const ConvergenceStudy& s);

/// Matrix export: JSON envelope with space, symbols, truncation degree and
/// the canonical basis alongside the entries.
Json to_json(const OperatorMatrix& m);

/// Serialization with doubles fixed at 17 significant digits and keys in
/// sorted order, so identical inputs give byte-identical files.
std::string dump_json(const Json& j, int indent = 2);

/// Fixed "%.17g" rendering used by every CSV/JSON writer.
std::string format_double(double v);

// CSV writers. Complex cells are written as consecutive re,im fields.
void write_matrix_csv(const OperatorMatrix& m, std::ostream& out);
void write_eigenvalues_csv(const std::vector<Cplx>& sorted_values, std::ostream& out);
void write_orbit_csv(const OrbitRecord& record, std::ostream& out);

}  // namespace wco

#endif
