#include "routed/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace routed {
namespace {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

int int_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

const Json& element(const Json& j, std::size_t i, std::size_t size, const char* what) {
  if (!j.is_array() || j.size() != size) {
    throw ParseError(std::string(what) + ": expected an array of " + std::to_string(size) + " entries");
  }
  return j[i];
}

double probability(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": probabilities must be numbers");
  return j.get<double>();
}

Json region_json(const RegionFlags& r) {
  return Json{{"hessian_ok", r.hessian_ok},
              {"envelope_iff", r.envelope_iff},
              {"simple_suff", r.simple_suff},
              {"linear_suff", r.linear_suff}};
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::string table_to_json(const CorrelationTable& t) {
  Json sp = Json::array();
  for (int x = 0; x < 2; ++x) {
    Json xs = Json::array();
    for (int y = 0; y < 2; ++y) {
      Json ys = Json::array();
      for (int a = 0; a < 2; ++a) ys.push_back(Json{t.short_path(a, 0, x, y), t.short_path(a, 1, x, y)});
      xs.push_back(ys);
    }
    sp.push_back(xs);
  }
  Json lp = Json::array();
  for (int x = 0; x < 2; ++x) {
    Json xs = Json::array();
    for (int y = 0; y < t.n(); ++y) {
      Json ys = Json::array();
      for (int a = 0; a < 2; ++a) {
        ys.push_back(Json{t.long_path(a, 0, x, y), t.long_path(a, 1, x, y), t.long_path(a, kNoClick, x, y)});
      }
      xs.push_back(ys);
    }
    lp.push_back(xs);
  }
  return dump(Json{{"n", t.n()}, {"sp", sp}, {"lp", lp}});
}

namespace {

CorrelationTable table_from(const Json& j) {
  const int n = int_field(j, "n");
  if (n < 1) throw ParseError("table field \"n\" must be >= 1");
  if (!j.contains("sp") || !j.contains("lp")) throw ParseError("table needs \"sp\" and \"lp\" arrays");
  CorrelationTable t(n);
  const Json& sp = j.at("sp");
  const Json& lp = j.at("lp");
  for (int x = 0; x < 2; ++x) {
    const Json& sx = element(sp, x, 2, "sp");
    const Json& lx = element(lp, x, 2, "lp");
    for (int y = 0; y < 2; ++y) {
      const Json& sy = element(sx, y, 2, "sp[x]");
      for (int a = 0; a < 2; ++a) {
        const Json& sa = element(sy, a, 2, "sp[x][y]");
        for (int b = 0; b < 2; ++b) t.set_short_path(a, b, x, y, probability(element(sa, b, 2, "sp[x][y][a]"), "sp"));
      }
    }
    for (int y = 0; y < n; ++y) {
      const Json& ly = element(lx, y, static_cast<std::size_t>(n), "lp[x]");
      for (int a = 0; a < 2; ++a) {
        const Json& la = element(ly, a, 2, "lp[x][y]");
        for (int b = 0; b <= kNoClick; ++b) {
          t.set_long_path(a, b, x, y, probability(element(la, b, 3, "lp[x][y][a]"), "lp"));
        }
      }
    }
  }
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid correlation table: ") + e.what());
  }
  return t;
}

}  // namespace

CorrelationTable table_from_json(const std::string& text) {
  const Json j = parse(text);
  if (!j.is_object()) throw ParseError("correlation table must be a JSON object");
  return table_from(j);
}

std::string stats_to_json(const RoutedStats& s) {
  return dump(Json{{"S", s.S}, {"Wn", s.Wn}, {"Tn", s.Tn}, {"n", s.n}});
}

RoutedStats stats_from_json(const std::string& text) {
  const Json j = parse(text);
  if (!j.is_object()) throw ParseError("statistics must be a JSON object");
  if (j.contains("sp") || j.contains("lp")) {
    const CorrelationTable t = table_from(j);
    return routed_stats(t, t.n());
  }
  RoutedStats s;
  s.S = number_field(j, "S");
  s.Wn = number_field(j, "Wn");
  s.Tn = number_field(j, "Tn");
  s.n = int_field(j, "n");
  if (s.n < 0) throw ParseError("field \"n\" must be >= 0");
  return s;
}

std::string verdict_to_json(const Verdict& v) {
  return dump(Json{{"certified", v.lrq_certified},
                   {"bound_name", v.bound_name},
                   {"bound_value", v.bound_value},
                   {"margin", v.margin},
                   {"S_used", v.S_used},
                   {"region", region_json(v.region)}});
}

std::string report_to_json(const VerifyReport& r) {
  return dump(Json{{"model", r.model},
                   {"eta_target", r.eta_target},
                   {"eta_empirical", r.eta_empirical},
                   {"max_dev", r.max_dev},
                   {"sigma", r.sigma},
                   {"max_z", r.max_z},
                   {"insufficient_samples", r.insufficient_samples},
                   {"pass", r.pass}});
}

std::string polytope_to_json(const LhsPolytope& p) {
  Json rows = Json::array();
  for (const auto& v : p.vertices) rows.push_back(Json{{"k", v.k}, {"T", v.T}, {"W_upper", v.W}});
  return dump(Json{{"n", p.n}, {"vertices", rows}});
}

std::string polytope_to_csv(const LhsPolytope& p) {
  std::ostringstream out;
  out << "k,T,W_upper\n";
  for (const auto& v : p.vertices) out << v.k << ',' << csv_number(v.T) << ',' << csv_number(v.W) << '\n';
  return out.str();
}

std::string scan_to_json(const std::vector<ScanRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json exact = r.eta_crit_exact ? Json(*r.eta_crit_exact) : Json(nullptr);
    arr.push_back(Json{{"n", r.n}, {"eta_crit_exact", exact}, {"eta_crit_small", r.eta_crit_small}});
  }
  return dump(arr);
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "n,eta_crit_exact,eta_crit_small\n";
  for (const auto& r : rows) {
    out << r.n << ',' << csv_number(r.eta_crit_exact.value_or(std::nan(""))) << ','
        << csv_number(r.eta_crit_small) << '\n';
  }
  return out.str();
}

std::string envelope_to_json(const std::vector<EnvelopeCell>& cells) {
  Json arr = Json::array();
  for (const auto& c : cells) {
    Json row{{"t", c.t}, {"s", c.s}};
    const Json flags = region_json(c.flags);
    for (const auto& [k, v] : flags.items()) row[k] = v;
    arr.push_back(row);
  }
  const EnvelopeCounts n = count_regions(cells);
  return dump(Json{{"counts",
                    {{"hessian_ok", n.hessian},
                     {"envelope_iff", n.envelope},
                     {"simple_suff", n.simple},
                     {"linear_suff", n.linear}}},
                   {"cells", arr}});
}

std::string envelope_to_csv(const std::vector<EnvelopeCell>& cells) {
  std::ostringstream out;
  out << "t,s,hessian_ok,envelope_iff,simple_suff,linear_suff\n";
  for (const auto& c : cells) {
    out << csv_number(c.t) << ',' << csv_number(c.s) << ',' << csv_bool(c.flags.hessian_ok) << ','
        << csv_bool(c.flags.envelope_iff) << ',' << csv_bool(c.flags.simple_suff) << ','
        << csv_bool(c.flags.linear_suff) << '\n';
  }
  return out.str();
}

std::string linear_bounds_to_json(const std::vector<LinearBoundRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"T", r.T},
                       {"nonlinear", r.nonlinear},
                       {"min_linear", r.min_linear},
                       {"beta", r.beta},
                       {"envelope_iff", r.envelope_iff}});
  }
  return dump(arr);
}

std::string linear_bounds_to_csv(const std::vector<LinearBoundRow>& rows) {
  std::ostringstream out;
  out << "T,nonlinear,min_linear,beta,envelope_iff\n";
  for (const auto& r : rows) {
    out << csv_number(r.T) << ',' << csv_number(r.nonlinear) << ',' << csv_number(r.min_linear) << ','
        << csv_number(r.beta) << ',' << csv_bool(r.envelope_iff) << '\n';
  }
  return out.str();
}

std::string curve_to_json(const std::vector<CurvePoint>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(Json{{"T", r.T}, {"W", r.W}});
  return dump(arr);
}

std::string curve_to_csv(const std::vector<CurvePoint>& rows) {
  std::ostringstream out;
  out << "T,W\n";
  for (const auto& r : rows) out << csv_number(r.T) << ',' << csv_number(r.W) << '\n';
  return out.str();
}

}  // namespace routed
