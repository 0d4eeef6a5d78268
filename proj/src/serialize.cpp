#include "wco/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace wco {

Json to_json(const Cplx& c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const Point& p) {
  Json out = Json::array();
  for (const Cplx& c : p) out.push_back(to_json(c));
  return out;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("point: expected an array");
  Point p;
  for (const auto& entry : j) {
    if (entry.is_number()) {
      p.emplace_back(entry.get<double>(), 0.0);
    } else if (entry.is_array() && entry.size() == 2) {
      p.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    } else {
      throw std::invalid_argument("point: coordinates are numbers or [re, im]");
    }
  }
  return p;
}

Json to_json(const TruncatedSeries& s) {
  Json coeffs = Json::object();
  for (const auto& [g, c] : s.coefficient_map()) {
    coeffs[multi_index_key(g)] = to_json(c);
  }
  return Json{{"n", s.vars()}, {"coeffs", coeffs}};
}

Json to_json(const PolyMap& p) {
  if (p.is_scalar()) return to_json(p.component(0));
  Json out = Json::array();
  for (int i = 0; i < p.vars_out(); ++i) out.push_back(to_json(p.component(i)));
  return out;
}

namespace {

TruncatedSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("coeffs")) {
    throw std::invalid_argument("polynomial: expected {\"n\": ..., \"coeffs\": {...}}");
  }
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("polynomial: need n >= 1");
  const Json& coeffs = j.at("coeffs");
  if (!coeffs.is_object()) {
    throw std::invalid_argument("polynomial: coeffs must be an object");
  }
  int degree = 0;
  std::vector<std::pair<MultiIndex, Cplx>> entries;
  for (const auto& [key, value] : coeffs.items()) {
    const MultiIndex g = parse_multi_index_key(key, n);
    Cplx c;
    if (value.is_number()) {
      c = Cplx(value.get<double>(), 0.0);
    } else if (value.is_array() && value.size() == 2) {
      c = Cplx(value[0].get<double>(), value[1].get<double>());
    } else {
      throw std::invalid_argument("polynomial: coefficient must be a number or [re, im]");
    }
    degree = std::max(degree, total_degree(g));
    entries.emplace_back(g, c);
  }
  TruncatedSeries s(n, degree);
  for (const auto& [g, c] : entries) s.set_coefficient(g, c);
  return s;
}

}  // namespace

PolyMap poly_map_from_json(const Json& j) {
  std::vector<TruncatedSeries> components;
  if (j.is_array()) {
    for (const auto& entry : j) components.push_back(series_from_json(entry));
  } else {
    components.push_back(series_from_json(j));
  }
  return PolyMap(std::move(components));
}

Json to_json(const DomainSpec& d) {
  Json out{{"family", to_string(d.family)}, {"n", d.n}};
  if (d.family == DomainFamily::annulus_product) out["r"] = d.inner_radius;
  return out;
}

DomainSpec domain_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("domain: expected an object");
  DomainSpec d;
  d.family = domain_family_from_string(j.at("family").get<std::string>());
  d.n = j.value("n", 1);
  if (d.family == DomainFamily::annulus_product) {
    if (!j.contains("r")) throw std::invalid_argument("domain: annulus_product needs r");
    d.inner_radius = j.at("r").get<double>();
  }
  d.validate();
  return d;
}

Json to_json(const SpaceSpec& s) {
  Json out{{"domain", to_json(s.domain)}, {"space", to_string(s.family)}};
  if (s.family == SpaceFamily::weighted_hardy_disk) {
    out["b"] = s.b.is_ones() ? Json{{"rule", "ones"}} : Json{{"list", s.b.list}};
  }
  if (s.family == SpaceFamily::bergman_ball ||
      s.family == SpaceFamily::bergman_polydisk) {
    out["alpha"] = s.alpha;
  }
  return out;
}

SpaceSpec space_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("space: expected an object");
  SpaceSpec s;
  s.domain = domain_from_json(j.at("domain"));
  if (!j.contains("space")) {
    throw std::invalid_argument("space: missing the \"space\" family");
  }
  s.family = space_family_from_string(j.at("space").get<std::string>());
  if (s.family == SpaceFamily::weighted_hardy_disk) {
    if (!j.contains("b")) {
      s.b = WeightRule::ones();
    } else {
      const Json& b = j.at("b");
      if (b.contains("rule")) {
        s.b.rule = b.at("rule").get<std::string>();
      } else if (b.contains("list")) {
        s.b = WeightRule::explicit_list(b.at("list").get<std::vector<double>>());
      } else {
        throw std::invalid_argument("space: b needs a \"rule\" or a \"list\"");
      }
    }
  }
  s.alpha = j.value("alpha", 0.0);
  s.validate();
  return s;
}

Json to_json(const WeightLiminfEstimate& e) {
  return Json{{"liminf", e.liminf},
              {"innermost_epsilon", e.innermost_epsilon},
              {"bounded_away_from_zero", e.bounded_away_from_zero},
              {"threshold", e.threshold},
              {"shell_minima", e.shell_minima}};
}

Json to_json(const GenzhuScan& s) {
  Json rows = Json::array();
  for (const GenzhuRow& row : s.rows) {
    rows.push_back(Json{{"z", to_json(row.z)},
                        {"boundary_distance", row.boundary_distance},
                        {"q", row.q}});
  }
  return Json{{"rows", rows},
              {"epsilons", s.epsilons},
              {"max_q_per_shell", s.max_q_per_shell},
              {"max_q_innermost", s.max_q_innermost},
              {"max_q_outermost", s.max_q_outermost},
              {"verdict", s.verdict}};
}

Json to_json(const CompactnessReport& r) {
  return Json{{"n_ladder", r.n_ladder},
              {"singular_values", r.singular_values},
              {"tail_decay_rate", r.tail_decay_rate},
              {"stabilization_per_step", r.stabilization_per_step},
              {"top_stabilization", r.top_stabilization},
              {"verdict", r.verdict}};
}

Json to_json(const OrbitRecord& r) {
  Json points = Json::array();
  for (const Point& p : r.points) points.push_back(to_json(p));
  Json out{{"start", to_json(r.start)},
           {"points", points},
           {"boundary_distances", r.boundary_distances},
           {"classification", to_string(r.outcome)}};
  if (r.outcome == OrbitOutcome::converged) out["limit"] = to_json(r.limit);
  return out;
}

Json to_json(const FixedPointReport& r) {
  Json points = Json::array();
  for (const FixedPoint& fp : r.points) {
    Json jac = Json::array();
    for (Eigen::Index i = 0; i < fp.jacobian.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < fp.jacobian.cols(); ++k) {
        row.push_back(to_json(fp.jacobian(i, k)));
      }
      jac.push_back(row);
    }
    points.push_back(Json{{"point", to_json(fp.location)},
                          {"residual", fp.residual},
                          {"jacobian", jac}});
  }
  return Json{{"points", points},
              {"multiplicity_flag", to_string(r.multiplicity)},
              {"merge_saturated", r.merge_saturated},
              {"starts", r.starts},
              {"converged_starts", r.converged_starts},
              {"merge_radius", r.merge_radius},
              {"grid_density", r.grid_density}};
}

Json to_json(const PredictedSet& s) {
  Json values = Json::array();
  for (const Cplx& v : s.values) values.push_back(to_json(v));
  Json jac = Json::array();
  for (const Cplx& v : s.jacobian_eigenvalues) jac.push_back(to_json(v));
  return Json{{"values", values},
              {"weight_at_fixed_point", to_json(s.weight_at_fixed_point)},
              {"jacobian_eigenvalues", jac},
              {"formula", s.formula},
              {"modulus_floor", s.modulus_floor}};
}

Json to_json(const SpectrumReport& r) {
  Json computed = Json::array();
  for (const auto& values : r.computed) {
    Json list = Json::array();
    for (const Cplx& v : values) list.push_back(to_json(v));
    computed.push_back(list);
  }
  Json matching = Json::array();
  const auto finite_or_null = [](double v) {
    return std::isfinite(v) ? Json(v) : Json();  // null: no partner available
  };
  for (const MatchRow& row : r.matching) {
    Json per_n = Json::array();
    for (double d : row.difference_per_n) per_n.push_back(finite_or_null(d));
    matching.push_back(Json{{"predicted", to_json(row.predicted)},
                            {"nearest_computed", to_json(row.nearest_computed)},
                            {"difference", finite_or_null(row.difference)},
                            {"difference_per_n", per_n},
                            {"matched", row.matched}});
  }
  Json unmatched = Json::array();
  for (const Cplx& v : r.unmatched_computed_above_floor) unmatched.push_back(to_json(v));
  return Json{{"n_ladder", r.n_ladder},
              {"computed", computed},
              {"predicted", to_json(r.predicted)},
              {"matching", matching},
              {"unmatched_computed_above_floor", unmatched},
              {"tol_match", r.tol_match},
              {"supports_formula", r.supports_formula},
              {"verdict", r.verdict}};
}

Json to_json(const ConvergenceStudy& s) {
  Json tops = Json::array();
  for (const auto& values : s.top_eigenvalues) {
    Json list = Json::array();
    for (const Cplx& v : values) list.push_back(to_json(v));
    tops.push_back(list);
  }
  return Json{{"n_ladder", s.n_ladder}, {"top_eigenvalues", tops}, {"drift", s.drift}};
}

Json to_json(const OperatorMatrix& m) {
  Json basis = Json::array();
  for (const MultiIndex& g : m.basis) basis.push_back(multi_index_key(g));
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.entries.cols(); ++k) {
      row.push_back(to_json(m.entries(i, k)));
    }
    entries.push_back(row);
  }
  return Json{{"space", to_json(m.space)},
              {"psi", to_json(m.weight)},
              {"phi", to_json(m.symbol)},
              {"N", m.truncation_degree},
              {"basis", basis},
              {"entries", entries}};
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

namespace {

void append_escaped(const std::string& s, std::string& out) {
  out += Json(s).dump();  // reuse the library's string escaping
}

void dump_value(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        append_escaped(key, out);
        out += ": ";
        dump_value(value, indent, depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_value(value, indent, depth + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::string:
      append_escaped(j.get<std::string>(), out);
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        throw std::invalid_argument("dump_json: non-finite number in report");
      }
      out += format_double(v);
      return;
    }
    case Json::value_t::null:
      out += "null";
      return;
    default:
      throw std::invalid_argument("dump_json: unsupported JSON value type");
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_value(j, indent, 0, out);
  out += "\n";
  return out;
}

void write_matrix_csv(const OperatorMatrix& m, std::ostream& out) {
  out << "# dim=" << m.entries.rows() << " N=" << m.truncation_degree
      << " cells=re,im row-major\n";
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.entries.cols(); ++k) {
      if (k > 0) out << ',';
      const Cplx& c = m.entries(i, k);
      out << format_double(c.real()) << ',' << format_double(c.imag());
    }
    out << '\n';
  }
}

void write_eigenvalues_csv(const std::vector<Cplx>& sorted_values, std::ostream& out) {
  out << "re,im\n";
  for (const Cplx& v : sorted_values) {
    out << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
}

void write_orbit_csv(const OrbitRecord& record, std::ostream& out) {
  const std::size_t n = record.start.size();
  out << "j";
  for (std::size_t i = 0; i < n; ++i) out << ",re" << i << ",im" << i;
  out << ",boundary_distance\n";
  for (std::size_t j = 0; j < record.points.size(); ++j) {
    out << j;
    for (std::size_t i = 0; i < n; ++i) {
      out << ',' << format_double(record.points[j][i].real()) << ','
          << format_double(record.points[j][i].imag());
    }
    out << ',' << format_double(record.boundary_distances[j]) << '\n';
  }
}

}  // namespace wco
