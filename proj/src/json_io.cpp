#include "bitoss/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace bitoss {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_error(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

const json& entries_of(const json& j) {
  const json& e = field(j, "entries");
  if (!e.is_array()) parse_error("\"entries\" must be an array");
  return e;
}

template <class F>
auto wrap(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

}  // namespace

json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    return Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    Integer v;
    if (s.empty() || v.set_str(s, 10) != 0) parse_error("not a decimal integer: \"" + s + "\"");
    return v;
  }
  parse_error("expected an integer, got " + j.dump());
}

json point_to_json(const Point& p) { return json(p); }

Point point_from_json(const json& j) {
  if (!j.is_array()) parse_error("point must be an integer array, got " + j.dump());
  Point p;
  for (const auto& v : j) {
    if (!v.is_number_integer()) parse_error("point coordinate is not an integer: " + v.dump());
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      parse_error("point coordinate out of range");
    p.push_back(static_cast<int>(x));
  }
  return p;
}

json multiset_to_json(const Multiset<Point>& phi) {
  json entries = json::array();
  for (const auto& [p, n] : phi) entries.push_back({{"point", point_to_json(p)}, {"mult", n}});
  return {{"entries", std::move(entries)}};
}

Multiset<Point> multiset_from_json(const json& j) {
  return wrap([&] {
    Multiset<Point> phi;
    for (const auto& e : entries_of(j)) {
      const json& m = field(e, "mult");
      if (!m.is_number_integer() || m.get<std::int64_t>() < 0) parse_error("\"mult\" must be a natural number");
      phi.add(point_from_json(field(e, "point")), m.get<std::uint64_t>());
    }
    return phi;
  });
}

json dist_to_json(const PDist<Rational>& omega) {
  json entries = json::array();
  for (const auto& [p, v] : omega)
    entries.push_back(
        {{"point", point_to_json(p)}, {"num", integer_to_json(v.get_num())}, {"den", integer_to_json(v.get_den())}});
  return {{"mode", "rational"}, {"entries", std::move(entries)}};
}

json dist_to_json(const PDist<double>& omega) {
  json entries = json::array();
  for (const auto& [p, v] : omega) entries.push_back({{"point", point_to_json(p)}, {"p", v}});
  return {{"mode", "float"}, {"entries", std::move(entries)}};
}

AnyDist dist_from_json(const json& j) {
  return wrap([&]() -> AnyDist {
    const json& mode = field(j, "mode");
    if (mode == "rational") {
      PDist<Rational>::Map m;
      for (const auto& e : entries_of(j)) {
        const Integer den = integer_from_json(field(e, "den"));
        if (sgn(den) <= 0) parse_error("\"den\" must be positive");
        if (!m.emplace(point_from_json(field(e, "point")), make_rational(integer_from_json(field(e, "num")), den)).second)
          parse_error("duplicate point in distribution");
      }
      try {
        return PDist<Rational>::from_map(std::move(m));
      } catch (const Error& err) {
        parse_error(err.what());
      }
    }
    if (mode == "float") {
      PDist<double>::Map m;
      for (const auto& e : entries_of(j)) {
        const json& p = field(e, "p");
        if (!p.is_number()) parse_error("\"p\" must be a number");
        if (!m.emplace(point_from_json(field(e, "point")), p.get<double>()).second)
          parse_error("duplicate point in distribution");
      }
      try {
        return PDist<double>::from_map(std::move(m));
      } catch (const Error& err) {
        parse_error(err.what());
      }
    }
    parse_error("\"mode\" must be \"rational\" or \"float\"");
  });
}

Mode mode_of(const AnyDist& d) { return d.index() == 0 ? Mode::rational : Mode::float64; }

template <class S>
json grid_to_json(const GridDist<S>& grid) {
  json j = dist_to_json(grid.dist);
  j["K"] = grid.K;
  j["N"] = grid.N;
  return j;
}

template <class S>
json channel_to_json(const Channel<Point, Point, S>& c) {
  json domain = json::array();
  json kernel = json::array();
  for (const auto& [x, d] : c.kernel()) {
    domain.push_back(point_to_json(x));
    kernel.push_back({{"point", point_to_json(x)}, {"dist", dist_to_json(d)}});
  }
  return {{"domain", std::move(domain)}, {"kernel", std::move(kernel)}};
}

std::variant<Channel<Point, Point, Rational>, Channel<Point, Point, double>> channel_from_json(const json& j) {
  return wrap([&]() -> std::variant<Channel<Point, Point, Rational>, Channel<Point, Point, double>> {
    std::vector<Point> domain;
    for (const auto& p : field(j, "domain")) domain.push_back(point_from_json(p));
    Channel<Point, Point, Rational>::Kernel kr;
    Channel<Point, Point, double>::Kernel kf;
    for (const auto& e : field(j, "kernel")) {
      auto d = dist_from_json(field(e, "dist"));
      auto x = point_from_json(field(e, "point"));
      if (d.index() == 0)
        kr.emplace(std::move(x), std::get<0>(std::move(d)));
      else
        kf.emplace(std::move(x), std::get<1>(std::move(d)));
    }
    if (!kr.empty() && !kf.empty()) throw Error(ErrorKind::ModeMismatch, "channel mixes rational and float kernels");
    const std::size_t n = kr.empty() ? kf.size() : kr.size();
    if (n != domain.size()) parse_error("channel kernel does not cover its domain");
    for (const auto& x : domain) {
      if (kr.empty() ? !kf.count(x) : !kr.count(x)) parse_error("channel kernel does not cover its domain");
    }
    if (!kr.empty()) return Channel<Point, Point, Rational>(std::move(kr));
    return Channel<Point, Point, double>(std::move(kf));
  });
}

json em_state_to_json(const EMState& s) {
  json coins = json::array();
  for (const auto& c : s.coins) coins.push_back(dist_to_json(c.dist()));
  return {{"K", s.K}, {"mixture", dist_to_json(s.mixture)}, {"coins", std::move(coins)}};
}

EMState em_state_from_json(const json& j) {
  return wrap([&] {
    EMState s;
    s.K = field(j, "K").get<unsigned>();
    auto as_float = [](AnyDist d) {
      if (d.index() == 0) return to_float(std::get<0>(d));
      return std::get<1>(std::move(d));
    };
    s.mixture = as_float(dist_from_json(field(j, "mixture")));
    for (const auto& c : field(j, "coins")) s.coins.push_back(Coin<double>::make(as_float(dist_from_json(c))));
    if (s.coins.size() != s.mixture.size()) parse_error("mixture and coins disagree on the class count");
    return s;
  });
}

json em_trace_to_json(const EMTrace& trace) {
  json records = json::array();
  for (const auto& r : trace)
    records.push_back(
        {{"iteration", r.iteration}, {"kl", r.kl}, {"clamped", r.clamped}, {"state", em_state_to_json(r.state)}});
  return {{"trace", std::move(records)}};
}

std::string em_trace_csv(const EMTrace& trace) {
  std::ostringstream os;
  os << "iteration,kl\n";
  char buf[40];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%.17g", r.kl);
    os << r.iteration << ',' << buf << '\n';
  }
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Parse, "write failed for " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template json grid_to_json<Rational>(const GridDist<Rational>&);
template json grid_to_json<double>(const GridDist<double>&);
template json channel_to_json<Rational>(const Channel<Point, Point, Rational>&);
template json channel_to_json<double>(const Channel<Point, Point, double>&);

}  // namespace bitoss
