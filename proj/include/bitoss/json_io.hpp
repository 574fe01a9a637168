#pragma once

// JSON encodings of the library's values.
//
//   Multiset  {"entries":[{"point":[ints],"mult":int}]}
//   Dist      {"mode":"rational","entries":[{"point":[ints],"num":int,"den":int}]}
//             {"mode":"float","entries":[{"point":[ints],"p":float}]}
//   GridDist  Dist plus {"K":int,"N":int}
//   Channel   {"domain":[points],"kernel":[{"point":point,"dist":Dist}]}
//
// Entries are written in point order. Integers that do not fit in 64 bits
// are written as decimal strings; readers accept either form.

#include <string>
#include <variant>

#include <json.hpp>

#include "bitoss/binomials.hpp"
#include "bitoss/channel.hpp"
#include "bitoss/dist.hpp"
#include "bitoss/em.hpp"

namespace bitoss {

using json = nlohmann::json;

using AnyDist = std::variant<PDist<Rational>, PDist<double>>;

json integer_to_json(const Integer& v);
Integer integer_from_json(const json& j);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

json multiset_to_json(const Multiset<Point>& phi);
Multiset<Point> multiset_from_json(const json& j);

json dist_to_json(const PDist<Rational>& omega);
json dist_to_json(const PDist<double>& omega);
AnyDist dist_from_json(const json& j);
Mode mode_of(const AnyDist& d);

template <class S>
json grid_to_json(const GridDist<S>& grid);

template <class S>
json channel_to_json(const Channel<Point, Point, S>& c);
std::variant<Channel<Point, Point, Rational>, Channel<Point, Point, double>> channel_from_json(const json& j);

json em_state_to_json(const EMState& s);
EMState em_state_from_json(const json& j);
json em_trace_to_json(const EMTrace& trace);

/// "iteration,kl" header then one row per record.
std::string em_trace_csv(const EMTrace& trace);

/// Reads and parses a JSON file; Parse errors carry the path.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace bitoss
