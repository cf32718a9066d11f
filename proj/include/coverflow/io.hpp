#pragma once

// JSON and CSV interchange. Requires the single-header nlohmann json.hpp on the include path.

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "coverflow/chamanara.hpp"
#include "coverflow/error.hpp"
#include "coverflow/geodesic.hpp"
#include "coverflow/ladder.hpp"
#include "coverflow/monodromy.hpp"
#include "coverflow/odometer.hpp"
#include "coverflow/permutation.hpp"

namespace coverflow::io {

using Json = nlohmann::ordered_json;

namespace detail {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed ") + what + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Parse, std::string(what) + " is missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

// --- permutations -----------------------------------------------------------

inline Json to_json(const std::vector<Permutation>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

inline std::vector<Permutation> permutations_from_json(const Json& j, std::size_t d) {
  if (!j.is_array()) fail(ErrorKind::Parse, "expected an array of permutations");
  std::vector<Permutation> out;
  for (const auto& s : j) {
    if (!s.is_string()) fail(ErrorKind::Parse, "permutation must be a cycle-notation string");
    out.push_back(Permutation::parse(s.get<std::string>(), d));
  }
  return out;
}

// --- MonodromyRep -----------------------------------------------------------

inline Json to_json(const MonodromyRep& h) {
  Json a = Json::object();
  for (const auto& [i, p] : h.assignments()) a[std::to_string(i)] = p.to_string();
  return Json{{"d", h.degree()}, {"assignments", a}};
}

inline MonodromyRep monodromy_from_json(const Json& j) {
  return detail::guarded("monodromy", [&] {
    auto d = detail::field(j, "d", "monodromy").get<std::size_t>();
    if (d < 1) fail(ErrorKind::Parse, "degree must be at least 1");
    MonodromyRep h(d);
    const auto& a = detail::field(j, "assignments", "monodromy");
    if (!a.is_object()) fail(ErrorKind::Parse, "assignments must be an object");
    for (const auto& [k, v] : a.items()) {
      std::size_t used = 0;
      std::int64_t idx = 0;
      try {
        idx = std::stoll(k, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != k.size() || k.empty()) fail(ErrorKind::Parse, "bad generator index \"" + k + "\"");
      h.assign(idx, Permutation::parse(v.get<std::string>(), d));
    }
    return h;
  });
}

// --- chamanara --------------------------------------------------------------

inline const char* to_string(ZeroBlockRule::Kind k) {
  switch (k) {
    case ZeroBlockRule::Kind::Terminal: return "terminal";
    case ZeroBlockRule::Kind::Linear: return "linear";
    case ZeroBlockRule::Kind::Repeat: return "repeat";
  }
  return "";
}

inline ZeroBlockRule zero_rule_from_json(const Json& j) {
  ZeroBlockRule r;
  auto k = detail::field(j, "kind", "zero rule").get<std::string>();
  if (k == "terminal") r.kind = ZeroBlockRule::Kind::Terminal;
  else if (k == "linear") r.kind = ZeroBlockRule::Kind::Linear;
  else if (k == "repeat") {
    r.kind = ZeroBlockRule::Kind::Repeat;
    r.value = detail::field(j, "value", "zero rule").get<std::uint64_t>();
  } else
    fail(ErrorKind::Parse, "unknown zero rule \"" + k + "\"");
  return r;
}

inline Json to_json(const PWord& p) {
  Json rule{{"kind", to_string(p.rule.kind)}};
  if (p.rule.kind == ZeroBlockRule::Kind::Repeat) rule["value"] = p.rule.value;
  return Json{{"start", p.start}, {"L1", p.L1}, {"L2", p.L2}, {"ells", p.ells}, {"rule", rule}};
}

inline PWord pword_from_json(const Json& j) {
  return detail::guarded("p-word", [&] {
    ZeroBlockRule rule;
    if (j.contains("rule")) rule = zero_rule_from_json(j.at("rule"));
    return build_p_word(detail::field(j, "L1", "p-word").get<std::uint64_t>(),
                        detail::field(j, "L2", "p-word").get<std::uint64_t>(),
                        j.value("ells", std::vector<std::uint64_t>{}), rule, j.value("start", std::int64_t{1}));
  });
}

inline Json to_json(const TailRule& t) {
  switch (t.kind) {
    case TailRule::Kind::Constant: return Json{{"kind", "constant"}, {"value", t.constant.to_string()}};
    case TailRule::Kind::Periodic: return Json{{"kind", "periodic"}, {"word", to_json(t.word)}};
    case TailRule::Kind::HLister: return Json{{"kind", "hlister"}, {"H", to_json(t.word)}};
    case TailRule::Kind::PSchedule: {
      const auto& s = *t.schedule;
      return Json{{"kind", "p_schedule"}, {"p", to_json(s.p)},     {"origin", s.origin}, {"fill1", to_json(s.fill1)},
                  {"fill2", to_json(s.fill2)}, {"H1", to_json(s.H1)}, {"H2", to_json(s.H2)}};
    }
  }
  return {};
}

inline TailRule tail_from_json(const Json& j, std::size_t d) {
  auto kind = detail::field(j, "kind", "tail").get<std::string>();
  if (kind == "constant")
    return TailRule::constant_of(j.contains("value") ? Permutation::parse(j.at("value").get<std::string>(), d)
                                                     : Permutation::identity(d));
  if (kind == "periodic") return TailRule::periodic(permutations_from_json(detail::field(j, "word", "tail"), d));
  if (kind == "hlister") return TailRule::hlister(permutations_from_json(detail::field(j, "H", "tail"), d));
  if (kind == "p_schedule") {
    PSchedule s{pword_from_json(detail::field(j, "p", "tail")),
                j.value("origin", std::int64_t{0}),
                permutations_from_json(detail::field(j, "fill1", "tail"), d),
                permutations_from_json(detail::field(j, "fill2", "tail"), d),
                permutations_from_json(detail::field(j, "H1", "tail"), d),
                permutations_from_json(detail::field(j, "H2", "tail"), d)};
    std::sort(s.H1.begin(), s.H1.end());
    std::sort(s.H2.begin(), s.H2.end());
    return TailRule::p_schedule(std::move(s), d);
  }
  fail(ErrorKind::Parse, "unknown tail kind \"" + kind + "\"");
}

inline Json to_json(const GSequence& g) {
  return Json{{"d", g.degree()},
              {"window_start", g.window_start()},
              {"window", to_json(g.window())},
              {"left_tail", to_json(g.left_tail())},
              {"right_tail", to_json(g.right_tail())}};
}

inline GSequence gsequence_from_json(const Json& j) {
  return detail::guarded("G-sequence", [&] {
    auto d = detail::field(j, "d", "G-sequence").get<std::size_t>();
    Json id{{"kind", "constant"}};
    return GSequence(d, j.value("window_start", std::int64_t{0}), permutations_from_json(j.value("window", Json::array()), d),
                     tail_from_json(j.value("left_tail", id), d), tail_from_json(j.value("right_tail", id), d));
  });
}

inline const char* to_string(AccumulationClass::Kind k) {
  switch (k) {
    case AccumulationClass::Kind::AllDisconnected: return "AllDisconnected";
    case AccumulationClass::Kind::HasConnectedLimit: return "HasConnectedLimit";
    case AccumulationClass::Kind::Undetermined: return "Undetermined";
  }
  return "";
}

inline Json to_json(const AccumulationClass& a) {
  Json subs = Json::array();
  for (const auto& h : a.subgroups) subs.push_back(to_json(h));
  return Json{{"kind", to_string(a.kind)}, {"subgroups", subs}, {"reason", a.reason}};
}

// --- ladder -----------------------------------------------------------------

inline Json to_json(const ladder::Z2Hom& h) { return Json{{"support", h.support()}}; }

inline ladder::Z2Hom z2hom_from_json(const Json& j) {
  return detail::guarded("Z2Hom", [&] {
    auto s = detail::field(j, "support", "Z2Hom").get<std::vector<std::int64_t>>();
    std::sort(s.begin(), s.end());
    if (std::binary_search(s.begin(), s.end(), 0)) fail(ErrorKind::Parse, "Z2Hom support may not contain 0");
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) fail(ErrorKind::Parse, "Z2Hom support has a repeated index");
    return ladder::Z2Hom(std::move(s));
  });
}

inline Json to_json(const ladder::LimitVerdict& v) {
  Json j{{"kind", ladder::to_string(v.kind)}, {"horizon", v.horizon}};
  j["k"] = v.k ? Json(*v.k) : Json(nullptr);
  j["m0"] = v.m0;
  j["step"] = v.step;
  return j;
}

inline ladder::LimitVerdict limit_verdict_from_json(const Json& j) {
  return detail::guarded("limit verdict", [&] {
    ladder::LimitVerdict v;
    auto k = detail::field(j, "kind", "limit verdict").get<std::string>();
    using K = ladder::LimitVerdict::Kind;
    if (k == "ConvergesCertified") v.kind = K::ConvergesCertified;
    else if (k == "ProximityReturnedToOne") v.kind = K::ProximityReturnedToOne;
    else if (k == "Undetermined") v.kind = K::Undetermined;
    else fail(ErrorKind::Parse, "unknown limit verdict \"" + k + "\"");
    if (j.contains("k") && !j.at("k").is_null()) v.k = j.at("k").get<std::uint64_t>();
    v.m0 = j.value("m0", std::uint64_t{0});
    v.step = j.value("step", std::uint64_t{0});
    v.horizon = j.value("horizon", std::uint64_t{0});
    return v;
  });
}

// --- geodesic ---------------------------------------------------------------

inline Json to_json(const GoldenScalar& x) { return x.to_string(); }

inline GoldenScalar golden_from_json(const Json& j) {
  if (!j.is_string()) fail(ErrorKind::Parse, "golden scalar must be a string like \"1/2+3*phi\"");
  return GoldenScalar::parse(j.get<std::string>());
}

inline geodesic::WalkExit walk_exit_from_string(const std::string& s) {
  for (auto e : {geodesic::WalkExit::Horizon, geodesic::WalkExit::Cusp, geodesic::WalkExit::Funnel})
    if (s == geodesic::to_string(e)) return e;
  fail(ErrorKind::Parse, "unknown walk exit \"" + s + "\"");
}

inline Json to_json(const geodesic::CodingWalk& w) {
  return Json{{"n", w.n()}, {"exit", geodesic::to_string(w.exit())}, {"divergent_into_cusp", w.divergent_into_cusp()}};
}

inline geodesic::CodingWalk walk_from_json(const Json& j) {
  return detail::guarded("coding walk", [&] {
    return geodesic::CodingWalk(detail::field(j, "n", "coding walk").get<std::vector<std::int64_t>>(),
                                walk_exit_from_string(j.value("exit", std::string("horizon"))));
  });
}

// CSV with '#' metadata lines, then "k,n_k" rows.
inline void write_walk_csv(std::ostream& os, const geodesic::CodingWalk& w, const std::vector<std::string>& meta = {}) {
  for (const auto& m : meta) os << "# " << m << '\n';
  os << "# exit=" << geodesic::to_string(w.exit()) << '\n';
  os << "k,n_k\n";
  for (std::size_t k = 0; k < w.n().size(); ++k) os << k << ',' << w.n()[k] << '\n';
}

inline geodesic::CodingWalk read_walk_csv(std::istream& is) {
  std::string line;
  std::vector<std::int64_t> n;
  auto exit = geodesic::WalkExit::Horizon;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("exit=");
      if (pos != std::string::npos) exit = walk_exit_from_string(line.substr(pos + 5));
      continue;
    }
    if (!header) {
      if (line != "k,n_k") fail(ErrorKind::Parse, "walk CSV must start with the header k,n_k");
      header = true;
      continue;
    }
    auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      std::size_t used = 0;
      auto k = std::stoull(line.substr(0, comma), &used);
      if (used != comma || k != n.size()) throw std::invalid_argument("k out of sequence");
      auto rest = line.substr(comma + 1);
      auto v = std::stoll(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing characters");
      n.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "bad walk CSV row at line " + std::to_string(lineno) + ": " + line);
    }
  }
  if (n.empty()) fail(ErrorKind::Parse, "walk CSV has no rows");
  return geodesic::CodingWalk(std::move(n), exit);
}

inline Json to_json(const geodesic::WalkSummary& ws) {
  Json visits = Json::object();
  for (const auto& [N, c] : ws.visits) visits[std::to_string(N)] = c;
  Json j{{"visits", visits},
         {"recurrence_threshold", ws.recurrence_threshold},
         {"recurrent_level", ws.recurrent_level ? Json(*ws.recurrent_level) : Json(nullptr)},
         {"sign", ws.sign},
         {"complete_levels", ws.complete_levels},
         {"monotone", ws.monotone},
         {"length", ws.length}};
  j["v_estimate"] = ws.v_estimate ? Json(*ws.v_estimate) : Json(nullptr);
  j["window"] = Json{{"lo", ws.window_lo}, {"hi", ws.window_hi}, {"roots", ws.window_roots}};
  j["v_exact"] = ws.v_exact ? Json(*ws.v_exact) : Json(nullptr);
  return j;
}

inline Json to_json(const geodesic::CoverVerdict& v, const geodesic::WalkSummary& ws) {
  Json j;
  j["branch"] = v.branch == geodesic::Branch::Undetermined ? Json(nullptr) : Json(std::string(1, geodesic::branch_letter(v.branch)));
  j["verdict"] = geodesic::to_string(v.branch);
  j["v_estimate"] = ws.v_estimate ? Json(*ws.v_estimate) : Json(nullptr);
  j["v_exact"] = ws.v_exact ? Json(*ws.v_exact) : Json(nullptr);
  j["window"] = Json{{"lo", ws.window_lo}, {"hi", ws.window_hi}, {"sign", ws.sign}};
  j["recurrent_level"] = ws.recurrent_level ? Json(*ws.recurrent_level) : Json(nullptr);
  j["tested_hom"] = to_json(v.tested);
  j["tau_limit_verdict"] = v.tau_limit ? to_json(*v.tau_limit) : Json(nullptr);
  j["flags"] = v.flags;
  return j;
}

// --- odometer ---------------------------------------------------------------

inline Json to_json(const OrbitStatistics& st) {
  Json table = Json::array();
  const std::uint64_t cells = st.d ? st.counts.size() / st.d : 0;
  for (std::uint64_t c = 0; c < cells; ++c) {
    std::vector<std::uint64_t> row(st.counts.begin() + static_cast<std::ptrdiff_t>(c * st.d),
                                   st.counts.begin() + static_cast<std::ptrdiff_t>((c + 1) * st.d));
    table.push_back(Json{{"cylinder", st.cylinder_label(c)}, {"fiber_counts", row}});
  }
  return Json{{"base", st.base},           {"degree", st.d},
              {"depth", st.depth},         {"iterations", st.iterations},
              {"deviation", st.deviation}, {"fiber_deviation", st.fiber_deviation},
              {"frequency_table", table}};
}

inline Json to_json(const Partition& blocks) {
  Json a = Json::array();
  for (const auto& b : blocks) a.push_back(b);
  return a;
}

// --- monodromy probabilities --------------------------------------------------

inline Json to_json(const DisconnectedProbability& p) {
  Json j;
  j["exact"] = p.exact ? Json(p.exact->get_str()) : Json(nullptr);
  j["exact_decimal"] = p.exact ? Json(p.exact->get_d()) : Json(nullptr);
  j["bound"] = p.bound.get_str();
  j["bound_decimal"] = p.bound.get_d();
  j["cap_exceeded"] = p.cap_exceeded;
  Json hs = Json::array();
  for (const auto& h : p.maximal_nontransitive) hs.push_back(to_json(h));
  j["maximal_nontransitive"] = hs;
  return j;
}

}  // namespace coverflow::io
