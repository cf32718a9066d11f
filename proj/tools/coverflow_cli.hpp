#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coverflow/coverflow.hpp"

namespace coverflow::cli {

using io::Json;

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kParse = 3,
  kInfeasible = 4,
  kUndecidable = 5,
  kPrecondition = 6,
  kIo = 7,
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::Infeasible: return kInfeasible;
    case ErrorKind::Undecidable: return kUndecidable;
    case ErrorKind::DegreeMismatch:
    case ErrorKind::Precondition: return kPrecondition;
    case ErrorKind::Io: return kIo;
  }
  return kOther;
}

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;  // empty: the subcommand's default
  std::optional<std::uint64_t> max_steps;
  std::optional<std::uint64_t> horizon;
  std::optional<double> tolerance;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
inline Json load_json(const std::string& arg, const char* what) {
  std::string text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("malformed JSON for ") + what + ": " + e.what());
  }
}

inline geodesic::CodingWalk load_walk(const std::string& arg) {
  std::string text = read_file(arg);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return io::walk_from_json(Json::parse(text).at("result").at("walk"));
    } catch (const Json::exception& e) {
      fail(ErrorKind::Parse, std::string("malformed walk JSON: ") + e.what());
    }
  }
  std::istringstream is(text);
  return io::read_walk_csv(is);
}

inline std::vector<Permutation> parse_perm_list(const std::string& text, std::size_t d) {
  std::vector<Permutation> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    auto item = text.substr(start, end - start);
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(Permutation::parse(item, d));
    start = end + 1;
  }
  return out;
}

inline std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      auto v = std::stoull(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "bad integer list entry \"" + item + "\"");
    }
  }
  return out;
}

inline ZeroBlockRule parse_rule(const std::string& s) {
  ZeroBlockRule r;
  if (s == "linear") return r;
  if (s == "terminal") {
    r.kind = ZeroBlockRule::Kind::Terminal;
    return r;
  }
  if (s.rfind("repeat:", 0) == 0) {
    r.kind = ZeroBlockRule::Kind::Repeat;
    auto v = parse_uint_list(s.substr(7));
    if (v.size() != 1) fail(ErrorKind::Parse, "expected repeat:<length>");
    r.value = v[0];
    return r;
  }
  fail(ErrorKind::Parse, "zero-block rule must be linear, terminal or repeat:<n>");
}

// echo of every option that was given or has a default, --out excluded
inline Json config_echo(const CLI::App& app, const CLI::App& sub) {
  Json cfg = Json::object();
  auto add = [&](const CLI::App& a) {
    for (const auto* o : a.get_options()) {
      auto name = o->get_name(false, true);
      if (name == "--help" || name == "--out" || name.empty()) continue;
      auto res = o->results();
      if (!res.empty()) {
        std::string v;
        for (std::size_t i = 0; i < res.size(); ++i) v += (i ? "," : "") + res[i];
        cfg[name.substr(2)] = v;
      } else if (!o->get_default_str().empty()) {
        cfg[name.substr(2)] = o->get_default_str();
      }
    }
  };
  add(app);
  add(sub);
  return cfg;
}

}  // namespace detail

// Runs one invocation; argv[0] is the program name. Output goes to --out or `out`.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"coverflow: covers of translation surfaces, skew products and ladder double covers", "coverflow"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for every random substream")->default_val(0);
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--max-steps", g.max_steps, "step or iteration cap");
  app.add_option("--horizon", g.horizon, "horizon M");
  app.add_option("--tolerance", g.tolerance, "numeric tolerance");

  // sample-cover
  std::string G_text, H_text = "trivial";
  std::size_t d = 0;
  unsigned k = 3;
  std::uint64_t samples = 0;
  auto* sample = app.add_subcommand("sample-cover", "sample a monodromy representation; optionally estimate P(disconnected)");
  sample->add_option("--G", G_text, "group: trivial | (..);(..) | Z<n> | S<n>")->required();
  sample->add_option("--d", d, "degree")->required()->check(CLI::PositiveNumber);
  sample->add_option("--k", k, "support size: generators 1..k")->default_val(3);
  sample->add_option("--samples", samples, "Monte Carlo samples for the disconnected fraction")->default_val(0);

  // simulate-skew
  unsigned base = 2;
  std::string psi_arg;
  std::uint64_t iters = 100000;
  std::size_t depth = 4;
  std::uint32_t start_fiber = 1;
  auto* skew = app.add_subcommand("simulate-skew", "orbit statistics of the odometer skew product");
  skew->add_option("--base", base, "odometer base n")->default_val(2)->check(CLI::Range(2u, 64u));
  skew->add_option("--degree", d, "fiber size d")->required()->check(CLI::PositiveNumber);
  skew->add_option("--psi", psi_arg, "MonodromyRep JSON (inline or file)")->required();
  skew->add_option("--iters", iters, "orbit length")->default_val(100000);
  skew->add_option("--depth", depth, "cylinder depth L")->default_val(4)->check(CLI::Range(1u, 20u));
  skew->add_option("--start-fiber", start_fiber, "fiber of the starting state")->default_val(1);

  // devious-build
  std::string prefix_text;
  std::size_t random_prefix = 0;
  std::int64_t window_start = 0;
  bool require_connected = false;
  auto* devious = app.add_subcommand("devious-build", "G-sequence with a non-transitive H tail");
  devious->add_option("--G", G_text, "ambient group")->required();
  devious->add_option("--H", H_text, "tail subgroup")->default_val("trivial");
  devious->add_option("--d", d, "degree")->required()->check(CLI::PositiveNumber);
  devious->add_option("--prefix", prefix_text, "window permutations separated by ';'");
  devious->add_option("--random-prefix", random_prefix, "extra seeded prefix entries")->default_val(0);
  devious->add_option("--window-start", window_start, "index of the first window entry")->default_val(0);
  devious->add_flag("--require-connected", require_connected, "fail unless the cover is connected");

  // p-ready-build
  std::uint64_t L1 = 1, L2 = 1, verify_extra = 256;
  std::string ells_text, rule_text = "linear", H1_text, H2_text;
  std::int64_t p_start = 1;
  auto* pready = app.add_subcommand("p-ready-build", "p-ready G-sequence for a {0,1,2}-schedule");
  pready->add_option("--L1", L1, "1-block length")->required();
  pready->add_option("--L2", L2, "2-block length")->required();
  pready->add_option("--ells", ells_text, "zero-block lengths, comma separated");
  pready->add_option("--rule", rule_text, "continuation: linear | terminal | repeat:<n>")->default_val("linear");
  pready->add_option("--start", p_start, "first index of p")->default_val(1);
  pready->add_option("--H1", H1_text, "subgroup for 1-blocks")->required();
  pready->add_option("--H2", H2_text, "subgroup for 2-blocks")->required();
  pready->add_option("--G", G_text, "ambient group")->required();
  pready->add_option("--d", d, "degree")->required()->check(CLI::PositiveNumber);
  pready->add_option("--verify-extra", verify_extra, "indices checked past the fixed part")->default_val(256);

  // chamanara-classify
  std::string gseq_arg;
  std::int64_t skew_k = 0;
  auto* cham = app.add_subcommand("chamanara-classify", "devious test and accumulation class of a G-sequence");
  cham->add_option("--gseq", gseq_arg, "GSequence JSON (inline or file)")->required();
  cham->add_option("--k", skew_k, "power k of the pseudo-Anosov for the skew model")->default_val(0);

  // ladder-act
  std::string hom_arg, gen_text = "tau";
  std::int64_t m = 1;
  auto* act = app.add_subcommand("ladder-act", "apply psi*, rho* or tau^m to a Z2Hom");
  act->add_option("--hom", hom_arg, "Z2Hom JSON (inline or file)")->required();
  act->add_option("--gen", gen_text, "psi | rho | tau")->default_val("tau")->check(CLI::IsMember({"psi", "rho", "tau"}));
  act->add_option("--m", m, "power of tau")->default_val(1);

  // z-solve
  std::string f_bits;
  std::optional<std::int64_t> K_opt;
  auto* zs = app.add_subcommand("z-solve", "finite-support h in the limits-to-zero set extending f");
  zs->add_option("--f", f_bits, "bits f(2) f(3) ... as a 0/1 string")->required();
  zs->add_option("--K", K_opt, "last index constrained by f (default 1 + length of --f)");

  // ladder-limit
  auto* lim = app.add_subcommand("ladder-limit", "horizon test of tau^m h -> 0");
  lim->add_option("--hom", hom_arg, "Z2Hom JSON (inline or file)")->required();

  // coding-walk
  std::string endpoint, synthetic;
  std::size_t levels = 6;
  int direction = 1;
  long max_bits = 16384;
  auto* walk = app.add_subcommand("coding-walk", "coding walk of a boundary endpoint, or a synthetic walk");
  auto* ep = walk->add_option("--endpoint", endpoint, "a+b*phi | inf | commutator");
  auto* sy = walk->add_option("--synthetic", synthetic, "linear | recurrent | pow:<c>");
  ep->excludes(sy);
  walk->add_option("--steps", g.max_steps, "walk steps K");
  walk->add_option("--levels", levels, "exact levels for pow:<c>")->default_val(6);
  walk->add_option("--direction", direction, "+1 or -1 for synthetic walks")->default_val(1)->check(CLI::IsMember({1, -1}));
  walk->add_option("--max-bits", max_bits, "precision cap for irrational endpoints")->default_val(16384);

  // classify
  std::string walk_arg;
  std::uint64_t threshold = 1000;
  std::size_t window = 5;
  auto* cls = app.add_subcommand("classify", "ergodicity branch for a ladder double cover");
  cls->add_option("--walk", walk_arg, "walk CSV (or coding-walk JSON)")->required();
  cls->add_option("--hom", hom_arg, "Z2Hom JSON (inline or file)")->required();
  cls->add_option("--threshold", threshold, "recurrence threshold T")->default_val(1000);
  cls->add_option("--window", window, "trailing window for the growth exponent")->default_val(5);

  // ms-series
  std::int64_t j_offset = 0;
  std::optional<std::int64_t> N_max;
  auto* ms = app.add_subcommand("ms-series", "partial sums of V_N phi^(-2(N+j)) with a trend diagnostic");
  ms->add_option("--walk", walk_arg, "walk CSV (or coding-walk JSON)")->required();
  ms->add_option("--j", j_offset, "offset j")->default_val(0);
  ms->add_option("--N-max", N_max, "last level (default: last complete level)");
  ms->add_option("--window", window, "trailing window for ratio tests")->default_val(5);

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  auto emit = [&](const std::string& text) {
    if (g.out.empty()) {
      out << text;
      return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot write " + g.out);
    f << text;
    if (!f) fail(ErrorKind::Io, "write failed for " + g.out);
  };

  try {
    const Json config = detail::config_echo(app, *sub);
    auto envelope = [&](Json result) {
      Json j{{"tool_version", kToolVersion}, {"seed", g.seed}, {"subcommand", name}, {"config", config}};
      j["result"] = std::move(result);
      return j.dump(2) + "\n";
    };
    auto csv_meta = [&] {
      return std::vector<std::string>{std::string("tool_version=") + kToolVersion, "seed=" + std::to_string(g.seed),
                                      "subcommand=" + name, "config=" + config.dump()};
    };
    const bool csv = g.format == "csv";
    if (csv && name != "simulate-skew" && name != "coding-walk")
      fail(ErrorKind::Precondition, "csv output is available for simulate-skew and coding-walk only");

    if (name == "sample-cover") {
      auto spec = parse_group(G_text, d);
      std::vector<std::int64_t> support;
      for (unsigned i = 1; i <= k; ++i) support.push_back(i);
      auto h = sample_monodromy(spec, support, g.seed);
      auto t = rep_transitivity(h);
      Json r{{"support", support}, {"sample", io::to_json(h)}, {"transitive", t.transitive}, {"orbits", io::to_json(t.orbits)}};
      if (samples > 0) {
        FiniteGroup grp(spec);
        Rng rng(g.seed, "sample_cover");
        std::uint64_t bad = 0;
        for (std::uint64_t s = 0; s < samples; ++s)
          if (!rep_transitivity(sample_monodromy(grp, support, rng)).transitive) ++bad;
        auto prob = disconnected_probability(spec, k);
        double frac = static_cast<double>(bad) / static_cast<double>(samples);
        Json mc{{"samples", samples}, {"disconnected", bad}, {"fraction", frac}, {"probability", io::to_json(prob)}};
        if (prob.exact) {
          double p = prob.exact->get_d();
          double sigma = std::sqrt(p * (1 - p) / static_cast<double>(samples));
          mc["sigma"] = sigma;
          mc["z_score"] = sigma > 0 ? Json((frac - p) / sigma) : Json(nullptr);
        }
        r["monte_carlo"] = mc;
      }
      emit(envelope(r));
    } else if (name == "simulate-skew") {
      auto psi = io::monodromy_from_json(detail::load_json(psi_arg, "--psi"));
      if (psi.degree() != d)
        fail(ErrorKind::DegreeMismatch, "--psi has degree " + std::to_string(psi.degree()) + " but --degree is " + std::to_string(d));
      if (start_fiber < 1 || start_fiber > d) fail(ErrorKind::Precondition, "--start-fiber out of range");
      const std::uint64_t N = g.max_steps.value_or(iters);
      if (N == 0) fail(ErrorKind::Precondition, "--iters must be positive");
      SkewCocycle c(base, psi);
      auto st = orbit_statistics(c, SkewState{OdometerPoint::zero(base), start_fiber}, N, depth);
      auto blocks = fiber_invariant_sets(c);
      const double tol = g.tolerance.value_or(1e-2);
      std::string structural = blocks.size() > 1
                                   ? "NON-ERGODIC CERTIFICATE (" + std::to_string(blocks.size()) + " fiber blocks)"
                                   : "NO CERTIFICATE (fibers connected)";
      std::string statistical = st.deviation < tol ? "EVIDENCE: equidistributed within tolerance"
                                                   : "EVIDENCE: not equidistributed at this horizon";
      if (csv) {
        std::ostringstream os;
        for (const auto& mline : csv_meta()) os << "# " << mline << '\n';
        os << "# structural=" << structural << "\n# statistical=" << statistical << '\n';
        os << "cylinder,fiber,count\n";
        for (std::uint64_t cyl = 0; cyl < st.counts.size() / st.d; ++cyl)
          for (std::uint32_t f = 1; f <= st.d; ++f) os << st.cylinder_label(cyl) << ',' << f << ',' << st.count(cyl, f) << '\n';
        emit(os.str());
      } else {
        Json r = io::to_json(st);
        r["tolerance"] = tol;
        r["fiber_blocks"] = io::to_json(blocks);
        r["verdict"] = Json{{"structural", structural}, {"statistical", statistical}};
        emit(envelope(r));
      }
    } else if (name == "devious-build") {
      auto G = parse_group(G_text, d);
      auto H = parse_group(H_text, d);
      auto gs = build_devious(G, H, detail::parse_perm_list(prefix_text, d), g.seed, random_prefix, window_start,
                              require_connected);
      auto chk = is_devious(gs);
      Json r{{"gsequence", io::to_json(gs)}, {"connected", chk.connected}};
      r["devious"] = chk.devious ? Json{{"K", chk.devious->K}, {"H", io::to_json(chk.devious->H)}} : Json(nullptr);
      emit(envelope(r));
    } else if (name == "p-ready-build") {
      auto p = build_p_word(L1, L2, detail::parse_uint_list(ells_text), detail::parse_rule(rule_text), p_start);
      auto gs = build_p_ready(p, parse_group(H1_text, d), parse_group(H2_text, d), parse_group(G_text, d), g.seed, verify_extra);
      Json r{{"p", io::to_json(p)},
             {"verified_length", p.finite_length() + verify_extra},
             {"gsequence", io::to_json(gs)},
             {"accumulation", io::to_json(accumulation_class(gs))}};
      emit(envelope(r));
    } else if (name == "chamanara-classify") {
      auto gs = io::gsequence_from_json(detail::load_json(gseq_arg, "--gseq"));
      auto chk = is_devious(gs);
      const std::uint64_t horizon = g.horizon.value_or(64);
      auto c = to_skew(gs, skew_k, horizon);
      Json r{{"connected", chk.connected}};
      r["devious"] = chk.devious ? Json{{"K", chk.devious->K}, {"H", io::to_json(chk.devious->H)}} : Json(nullptr);
      r["accumulation"] = io::to_json(accumulation_class(gs));
      r["skew_model"] = Json{{"k", skew_k}, {"horizon", horizon}, {"fiber_blocks", io::to_json(fiber_invariant_sets(c))}};
      emit(envelope(r));
    } else if (name == "ladder-act") {
      auto h = io::z2hom_from_json(detail::load_json(hom_arg, "--hom"));
      ladder::Z2Hom img = gen_text == "psi"   ? ladder::psi_star(h)
                          : gen_text == "rho" ? ladder::rho_star(h)
                                              : ladder::tau_star(h, m);
      auto prox = ladder::proximity(img);
      Json r{{"input", io::to_json(h)}, {"output", io::to_json(img)}};
      r["proximity"] = prox ? Json(*prox) : Json("inf");
      emit(envelope(r));
    } else if (name == "z-solve") {
      std::vector<std::int64_t> support;
      for (std::size_t i = 0; i < f_bits.size(); ++i) {
        if (f_bits[i] != '0' && f_bits[i] != '1') fail(ErrorKind::Parse, "--f must be a 0/1 string");
        if (f_bits[i] == '1') support.push_back(static_cast<std::int64_t>(i) + 2);
      }
      const std::int64_t K = K_opt.value_or(static_cast<std::int64_t>(f_bits.size()) + 1);
      const auto M = static_cast<unsigned>(g.horizon.value_or(10));
      auto h = ladder::z_solve(support, K, M);
      const std::int64_t k0 = support.empty() ? 0 : support.front();
      Json checks = Json::array();
      ladder::Z2Hom cur = h;
      bool ok = true;
      for (unsigned step = 0; step <= M; ++step) {
        bool in = ladder::cylinder_member(cur, k0 + step);
        ok = ok && in;
        checks.push_back(in);
        cur = ladder::tau_plus(cur);
      }
      emit(envelope(Json{{"f_support", support}, {"K", K}, {"horizon", M}, {"h", io::to_json(h)}, {"k", k0},
                         {"cylinder_checks", checks}, {"verified", ok}}));
    } else if (name == "ladder-limit") {
      auto h = io::z2hom_from_json(detail::load_json(hom_arg, "--hom"));
      auto v = ladder::limits_to_zero(h, static_cast<unsigned>(g.horizon.value_or(50)));
      emit(envelope(Json{{"hom", io::to_json(h)}, {"verdict", io::to_json(v)}}));
    } else if (name == "coding-walk") {
      const std::size_t K = g.max_steps.value_or(100);
      geodesic::CodingWalk w;
      if (!synthetic.empty()) {
        if (synthetic == "linear") w = geodesic::linear_walk(K, direction);
        else if (synthetic == "recurrent") w = geodesic::oscillating_walk(K / 2 + 1);
        else if (synthetic.rfind("pow:", 0) == 0) {
          auto c = detail::parse_uint_list(synthetic.substr(4));
          if (c.size() != 1) fail(ErrorKind::Parse, "expected pow:<c>");
          w = geodesic::power_walk(c[0], levels, direction);
        } else
          fail(ErrorKind::Parse, "unknown synthetic walk \"" + synthetic + "\"");
      } else if (endpoint.empty()) {
        fail(ErrorKind::Precondition, "coding-walk needs --endpoint or --synthetic");
      } else if (endpoint == "inf") {
        w = geodesic::coding_walk(std::optional<GoldenScalar>{}, K);
      } else if (endpoint == "commutator") {
        w = geodesic::coding_walk(geodesic::attracting_fixed_slope(geodesic::commutator_rho_psi()), K,
                                  geodesic::PrecisionPolicy{128, static_cast<mpfr_prec_t>(max_bits)});
      } else {
        w = geodesic::coding_walk(std::optional<GoldenScalar>{GoldenScalar::parse(endpoint)}, K);
      }
      if (g.format == "json") {
        emit(envelope(Json{{"walk", io::to_json(w)}}));
      } else {
        std::ostringstream os;
        io::write_walk_csv(os, w, csv_meta());
        emit(os.str());
      }
    } else if (name == "classify") {
      auto w = detail::load_walk(walk_arg);
      auto h = io::z2hom_from_json(detail::load_json(hom_arg, "--hom"));
      auto ws = geodesic::walk_summary(w, threshold, window);
      auto v = geodesic::classify_cover(ws, h, static_cast<unsigned>(g.horizon.value_or(50)), g.tolerance.value_or(1e-6));
      emit(envelope(io::to_json(v, ws)));
    } else if (name == "ms-series") {
      auto w = detail::load_walk(walk_arg);
      auto ws = geodesic::walk_summary(w, UINT64_MAX, window);
      auto r = geodesic::ms_series(ws, j_offset, N_max.value_or(std::max<std::int64_t>(ws.complete_levels, 0)), window);
      Json sums = Json::array();
      for (std::size_t N = 0; N < r.partial_sums.size(); ++N)
        sums.push_back(Json{{"N", N}, {"exact", r.partial_sums[N].to_string()}, {"decimal", r.partial_sums[N].to_double()}});
      emit(envelope(Json{{"j", j_offset}, {"sign", ws.sign}, {"partial_sums", sums}, {"ratio_vs_phi2", r.ratio_side},
                         {"trend", geodesic::to_string(r.trend)}}));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}

}  // namespace coverflow::cli
