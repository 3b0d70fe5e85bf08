#include "eightv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "eightv/asymptotics.hpp"
#include "eightv/correlation.hpp"
#include "eightv/dynamics.hpp"
#include "eightv/lattice.hpp"
#include "eightv/oracles.hpp"
#include "eightv/pca.hpp"

namespace eightv::cli {

namespace {

using json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_float()) {
    return to_string(v.get<double>());
  } else if (v.is_boolean()) {
    return v.get<bool>() ? "true" : "false";
  } else if (v.is_number()) {
    return v.dump();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
    out << '\n';
  }
}

json table_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
    arr.push_back(obj);
  }
  return arr;
}

Table object_table(const json& obj) {
  Table t;
  std::vector<json> row;
  for (const auto& [k, v] : obj.items()) {
    t.columns.push_back(k);
    row.push_back(v);
  }
  t.rows.push_back(row);
  return t;
}

struct Globals {
  std::uint64_t seed = 1;
  std::string backend = "float";
  std::string format = "auto";
  std::string output = "-";
  int threads = 0;

  bool exact() const { return backend == "rational"; }
};

// Output of one command, rendered once the command succeeds.
struct Result {
  std::variant<Table, json> body;
  bool prefer_json = false;
};

void render(std::ostream& out, const Result& res, const std::string& format) {
  bool as_json = format == "json" || (format == "auto" && res.prefer_json);
  if (const auto* t = std::get_if<Table>(&res.body)) {
    if (as_json)
      out << table_json(*t).dump(2) << '\n';
    else
      write_csv(out, *t);
  } else {
    const json& j = std::get<json>(res.body);
    if (as_json)
      out << j.dump(2) << '\n';
    else
      write_csv(out, object_table(j));
  }
}

template <class T>
json cell(const T& v) {
  if constexpr (is_exact_v<T>) {
    return to_string(v);
  } else {
    return v;
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::pair<long, long> parse_range(const std::string& text) {
  auto to_long = [&](const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(ErrorKind::Usage, "bad integer range '" + text + "'");
    return v;
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    long v = to_long(text);
    return {v, v};
  }
  long a = to_long(text.substr(0, dots)), b = to_long(text.substr(dots + 2));
  if (a > b) throw Error(ErrorKind::Usage, "empty range '" + text + "'");
  return {a, b};
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_range(item).first);
  if (out.empty()) throw Error(ErrorKind::Usage, "empty list");
  return out;
}

Row parse_bits(const std::string& text) {
  Row row;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorKind::Usage, "bit pattern must contain only 0 and 1");
    row.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (row.empty()) throw Error(ErrorKind::Usage, "empty bit pattern");
  return row;
}

std::vector<int> parse_digits(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c < '0' || c > '9') throw Error(ErrorKind::Usage, "row must be a string of digits");
    out.push_back(c - '0');
  }
  return out;
}

std::string bits_string(const Row& row) {
  std::string s;
  for (auto b : row) s += b ? '1' : '0';
  return s;
}

Rational parse_value(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw Error(ErrorKind::Usage, "--" + name + " expects a number, got '" + text + "'");
  }
}

struct ParamOpts {
  std::string p, r, a, b, c, d;

  void attach(CLI::App* app) {
    app->add_option("--p", p, "p = a/(a+c)");
    app->add_option("--r", r, "r = b/(b+d)");
    app->add_option("--a", a, "weight a");
    app->add_option("--b", b, "weight b");
    app->add_option("--c", c, "weight c");
    app->add_option("--d", d, "weight d");
  }

  bool has_weights() const { return !a.empty() || !b.empty() || !c.empty() || !d.empty(); }

  Weights<Rational> weights() const {
    if (has_weights()) {
      if (!p.empty() || !r.empty()) throw Error(ErrorKind::Usage, "give either --p/--r or --a/--b/--c/--d");
      if (a.empty() || b.empty() || c.empty() || d.empty())
        throw Error(ErrorKind::Usage, "all four weights --a --b --c --d are required");
      Weights<Rational> w{parse_value("a", a), parse_value("b", b), parse_value("c", c), parse_value("d", d)};
      derive_params(w);
      return w;
    }
    if (p.empty() || r.empty()) throw Error(ErrorKind::Usage, "--p and --r (or all four weights) are required");
    Rational pv = parse_value("p", p), rv = parse_value("r", r);
    params_from_pr(pv, rv);
    return weights_from_pr(pv, rv);
  }

  KernelParams<Rational> params() const { return derive_params(weights()); }
};

template <class T>
KernelParams<T> as_backend(const KernelParams<Rational>& kp) {
  if constexpr (is_exact_v<T>) {
    return kp;
  } else {
    return to_double(kp);
  }
}

template <class T>
T value_as(const Rational& q) {
  return from_rational<T>(q);
}

// exact ---------------------------------------------------------------------

struct ExactOpts {
  ParamOpts params;
  std::string i = "0", t = "0", what = "c8";
};

template <class T>
Table exact_table(const ExactOpts& o, const KernelParams<Rational>& kpq) {
  KernelParams<T> kp = as_backend<T>(kpq);
  auto [i0, i1] = parse_range(o.i);
  auto [t0, t1] = parse_range(o.t);
  Table tab;
  if (o.what == "params") {
    tab.columns = {"p", "r", "delta", "dee", "pee", "lambda"};
    tab.rows.push_back({cell(kp.p), cell(kp.r), cell(kp.delta), cell(kp.dee), cell(kp.pee), cell(kp.lambda)});
    return tab;
  }
  if (o.what == "bound") {
    tab.columns = {"t", "bound"};
    for (long t = t0; t <= t1; ++t) tab.rows.push_back({t, cell(boundary_bound<T>(t, kp))});
    return tab;
  }
  if (o.what == "c8") {
    tab.columns = {"i", "t", "c8"};
  } else if (o.what == "special") {
    tab.columns = {"i", "t", "c8_special"};
  } else if (o.what == "kdn") {
    tab.columns = {"i", "two_t", "kdn"};
  } else {
    throw Error(ErrorKind::Usage, "--what must be c8, special, kdn, bound or params");
  }
  for (long t = t0; t <= t1; ++t)
    for (long i = i0; i <= i1; ++i) {
      if (o.what == "c8") {
        tab.rows.push_back({i, t, cell(c8<T>(i, t, kp))});
      } else if (o.what == "special") {
        auto v = c8_special<T>(i, t, kp);
        tab.rows.push_back({i, t, v ? cell(*v) : json()});
      } else {
        tab.rows.push_back({i, 2 * t, cell(kdn_c<T>(i, 2 * t))});
      }
    }
  return tab;
}

// oracle ----------------------------------------------------------------------

struct OracleOpts {
  ParamOpts params;
  std::string i = "0", t = "0";
  bool dist = false;
  long t_max = 4;
  bool points = false;
  std::string C, K, R, L;
  long n = 0, k = 0;
  std::string parts;
};

template <class T>
Table walk_table(const OracleOpts& o, const KernelParams<Rational>& kpq) {
  KernelParams<T> kp = as_backend<T>(kpq);
  auto [i0, i1] = parse_range(o.i);
  auto [t0, t1] = parse_range(o.t);
  if (t0 < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  Table tab;
  if (o.dist) {
    WalkDist<T> d = walk_start<T>();
    for (long s = 0; s < t1; ++s) d = walk_step(d, kp);
    tab.columns = {"i", "spin", "probability"};
    for (const auto& [key, prob] : d.probs) tab.rows.push_back({key.first, key.second, cell(prob)});
    return tab;
  }
  tab.columns = {"i", "t", "c8"};
  for (long t = t0; t <= t1; ++t)
    for (long i = i0; i <= i1; ++i) tab.rows.push_back({i, t, cell(c8_via_walk<T>(i, t, kp))});
  return tab;
}

template <class T>
Table series_table(const OracleOpts& o, const KernelParams<Rational>& kpq) {
  Table tab;
  if (o.points) {
    // C8(i,t) read off as the coefficient of l^t x^{i+t}.
    auto [i0, i1] = parse_range(o.i);
    auto [t0, t1] = parse_range(o.t);
    if (t0 < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
    CoeffTable<T> ct = series_coeffs<T>(t1, as_backend<T>(kpq));
    tab.columns = {"i", "t", "c8"};
    for (long t = t0; t <= t1; ++t)
      for (long i = i0; i <= i1; ++i) {
        long j = i + t;
        bool inside = j >= 0 && j < static_cast<long>(ct.coeff[t].size());
        tab.rows.push_back({i, t, cell(inside ? ct.coeff[t][j] : T(0))});
      }
    return tab;
  }
  if (o.t_max < 0) throw Error(ErrorKind::Domain, "--t-max must be nonnegative");
  CoeffTable<T> ct = series_coeffs<T>(o.t_max, as_backend<T>(kpq));
  tab.columns = {"t", "j", "coeff"};
  for (long t = 0; t <= ct.t_max; ++t)
    for (std::size_t j = 0; j < ct.coeff[t].size(); ++j) tab.rows.push_back({t, static_cast<long>(j), cell(ct.coeff[t][j])});
  return tab;
}

template <class T>
Table paths_table(const OracleOpts& o, const KernelParams<Rational>& kpq) {
  KernelParams<T> kp = as_backend<T>(kpq);
  auto [i0, i1] = parse_range(o.i);
  auto [t0, t1] = parse_range(o.t);
  Table tab;
  tab.columns = {"i", "t", "paths"};
  for (long t = t0; t <= t1; ++t)
    for (long i = i0; i <= i1; ++i) tab.rows.push_back({i, t, cell(brute_force_paths<T>(i, t, kp))});
  return tab;
}

template <class T>
Table f_table(const OracleOpts& o) {
  if (o.C.empty() || o.K.empty() || o.R.empty() || o.L.empty())
    throw Error(ErrorKind::Usage, "--C --K --R --L are required");
  T C = value_as<T>(parse_value("C", o.C)), K = value_as<T>(parse_value("K", o.K));
  T R = value_as<T>(parse_value("R", o.R)), L = value_as<T>(parse_value("L", o.L));
  Table tab;
  tab.columns = {"name", "value"};
  for (int k1 = 0; k1 <= 1; ++k1)
    for (int k2 = 0; k2 <= 1; ++k2)
      tab.rows.push_back({"F" + std::to_string(k1) + std::to_string(k2), cell(closed_form_F<T>(k1, k2, C, K, R, L))});
  tab.rows.push_back({"combination", cell(closed_form_combination<T>(C, K, R, L))});
  return tab;
}

// sample ----------------------------------------------------------------------

struct SampleOpts {
  ParamOpts params;
  std::string mode = "pair", engine = "line", init = "pm:1/2";
  std::string i = "0", t = "1", profile = "0,0,0,0";
  std::uint64_t samples = 100000;
  int width = 0, steps = 4;
  std::string dump;
  std::uint64_t chains = 1;
};

InitialLaw parse_init(const std::string& text) {
  if (text == "ones") return Deterministic{Row{1}};
  if (text == "zeros") return Deterministic{Row{0}};
  if (text == "ones-free") return ones_with_free_origin();
  if (text.rfind("pm:", 0) == 0) {
    Rational q = parse_value("init", text.substr(3));
    if (q < 0 || q > 1) throw Error(ErrorKind::Domain, "product measure parameter must lie in [0,1]");
    return ProductMeasure{q};
  }
  if (text.rfind("pattern:", 0) == 0) return Deterministic{parse_bits(text.substr(8))};
  throw Error(ErrorKind::Usage, "--init must be pm:<q>, ones, zeros, ones-free or pattern:<bits>");
}

Engine parse_engine(const std::string& text) {
  if (text == "line") return Engine::Line;
  if (text == "particle") return Engine::Particle;
  throw Error(ErrorKind::Usage, "--engine must be line or particle");
}

std::string trajectory_string(Trajectory traj, int width, int steps) {
  std::string s;
  for (int t = 0; t <= steps; ++t) {
    if (t) s += '/';
    for (int i = 0; i < width; ++i) s += trajectory_state(traj, width, t, i) ? '1' : '0';
  }
  return s;
}

Result cmd_sample(const SampleOpts& o, const Globals& g) {
  KernelParams<Rational> kpq = o.params.params();
  KernelParams<double> kp = to_double(kpq);
  InitialLaw init = parse_init(o.init);
  Engine engine = parse_engine(o.engine);
  Table tab;
  if (!o.dump.empty()) {
    int width = o.width > 0 ? o.width : 2 * o.steps + 4;
    std::ofstream f(o.dump);
    if (!f) throw Error(ErrorKind::UnsupportedState, "cannot open " + o.dump);
    dump_trajectories(f, init, kp, width, o.steps, o.chains, g.seed, engine);
  }
  if (o.mode == "pair") {
    auto [i0, i1] = parse_range(o.i);
    auto [t0, t1] = parse_range(o.t);
    std::vector<EdgeAddress> targets;
    for (long t = t0; t <= t1; ++t)
      for (long i = i0; i <= i1; ++i) targets.push_back({i, t});
    SamplerConfig cfg;
    cfg.samples = o.samples;
    cfg.seed = g.seed;
    cfg.width = o.width;
    cfg.engine = engine;
    auto est = estimate_correlations({0, 0}, targets, init, kp, cfg);
    tab.columns = {"i", "t", "estimate", "std_error", "c8"};
    for (std::size_t k = 0; k < targets.size(); ++k)
      tab.rows.push_back({targets[k].i, targets[k].t, est[k].estimate, est[k].std_error,
                          c8<double>(targets[k].i, targets[k].t, kp)});
  } else if (o.mode == "boundary") {
    auto [i0, i1] = parse_range(o.i);
    auto [t0, t1] = parse_range(o.t);
    tab.columns = {"i", "t", "lhs", "std_error", "rhs", "holds"};
    for (long t = t0; t <= t1; ++t)
      for (long i = i0; i <= i1; ++i) {
        BoundaryCheck b = check_boundary_bound(init, i, t, kp, o.samples, g.seed);
        tab.rows.push_back({i, t, b.lhs, b.std_error, b.rhs, b.holds});
      }
  } else if (o.mode == "zigzag") {
    std::vector<long> profile = parse_list(o.profile);
    long tmax = *std::max_element(profile.begin(), profile.end());
    int width = o.width > 0 ? o.width : static_cast<int>(2 * (tmax + static_cast<long>(profile.size())) + 4);
    ChiSquare c = check_zigzag_independence(profile, width, o.samples, g.seed, kp);
    tab.columns = {"statistic", "dof", "p_value"};
    tab.rows.push_back({c.statistic, c.dof, c.p_value});
  } else if (o.mode == "marginal") {
    int width = o.width > 0 ? o.width : 2 * o.steps + 4;
    auto est = site_marginals(init, kp, o.steps, width, o.samples, g.seed);
    tab.columns = {"t", "estimate", "std_error"};
    for (std::size_t t = 0; t < est.size(); ++t)
      tab.rows.push_back({static_cast<long>(t), est[t].estimate, est[t].std_error});
  } else if (o.mode == "exact") {
    int width = o.width > 0 ? o.width : 4;
    auto law = engine == Engine::Line ? exact_window_distribution(width, o.steps, init, kpq)
                                      : exact_particle_distribution(width, o.steps, init, kpq);
    tab.columns = {"trajectory", "probability"};
    for (const auto& [traj, prob] : law)
      if (prob != 0) tab.rows.push_back({trajectory_string(traj, width, o.steps), to_string(prob)});
  } else {
    throw Error(ErrorKind::Usage, "--mode must be pair, boundary, zigzag, marginal or exact");
  }
  return {tab, false};
}

// enumerate -------------------------------------------------------------------

struct EnumerateOpts {
  ParamOpts params;
  std::string lattice = "kbar", bc = "free", check;
  int n = 1;
  bool gibbs = false;
};

BoundarySpec parse_bc(const std::string& text) {
  if (text == "free") return Free{};
  if (text.rfind("fixed:", 0) == 0) return Fixed{parse_bits(text.substr(6))};
  if (text.rfind("half:", 0) == 0) return HalfProduct{parse_value("bc", text.substr(5))};
  throw Error(ErrorKind::Usage, "--bc must be free, fixed:<bits> or half:<q>");
}

Result cmd_enumerate(const EnumerateOpts& o) {
  if (o.check == "restriction") {
    KernelParams<Rational> kp = o.params.params();
    json j;
    j["check"] = "restriction";
    j["N"] = o.n;
    j["p"] = to_string(kp.p);
    j["r"] = to_string(kp.r);
    j["holds"] = check_restriction_law(o.n, kp);
    return {j, true};
  }
  if (!o.check.empty()) throw Error(ErrorKind::Usage, "--check must be restriction");
  Weights<Rational> w = o.params.weights();
  FiniteLattice lat;
  if (o.lattice == "kbar")
    lat = make_kbar(o.n);
  else if (o.lattice == "k")
    lat = make_k(o.n);
  else
    throw Error(ErrorKind::Usage, "--lattice must be k or kbar");
  BoundarySpec bc = parse_bc(o.bc);
  if (o.gibbs) {
    Table tab;
    tab.columns = {"configuration", "probability"};
    for (const auto& [cfg, prob] : gibbs_distribution(lat, bc, w)) {
      std::string bits;
      for (std::size_t e = 0; e < lat.edges.size(); ++e) bits += ((cfg >> e) & 1u) ? '1' : '0';
      tab.rows.push_back({bits, to_string(prob)});
    }
    return {tab, false};
  }
  Rational z = partition_function(lat, bc, w);
  std::optional<Rational> closed;
  if (std::holds_alternative<Free>(bc)) {
    closed = partition_closed_form(lat, w);
  } else if (std::holds_alternative<HalfProduct>(bc)) {
    closed = Rational(1);
  } else if (lat.kind == LatticeKind::Kbar) {
    closed = ipow<Rational>(w.a + w.c, static_cast<long>(o.n) * (o.n + 1) / 2);
  }
  json j;
  j["lattice"] = o.lattice;
  j["N"] = o.n;
  j["bc"] = describe(bc);
  j["Z"] = to_string(z);
  j["closed_form"] = closed ? json(to_string(*closed)) : json();
  j["match"] = closed ? json(*closed == z) : json();
  return {j, true};
}

// pca -------------------------------------------------------------------------

struct PcaOpts {
  std::string kernel = "a8", solver = "binary";
  std::string p = "1/2", r = "1/2", q = "1/2";
  bool consistency = false, ergodicity = false;
  int width = 4, steps = 1;
  std::uint64_t samples = 100000;
  std::string rows, map, init_row = "0000000000";
  long layer = 0;
};

Result cmd_pca(const PcaOpts& o, const Globals& g) {
  Rational pq = parse_value("p", o.p), rq = parse_value("r", o.r);
  if (!o.map.empty()) {
    auto slash = o.rows.find('/');
    if (slash == std::string::npos) throw Error(ErrorKind::Usage, "--rows must be <upper>/<lower>");
    FaceRows fr{parse_digits(o.rows.substr(0, slash)), parse_digits(o.rows.substr(slash + 1)), o.layer};
    EdgeWindow e;
    if (o.map == "theta8")
      e = theta8(fr);
    else if (o.map == "theta6")
      e = theta6(fr);
    else
      throw Error(ErrorKind::Usage, "--map must be theta8 or theta6");
    json j;
    j["map"] = o.map;
    j["t"] = e.t;
    j["edges"] = bits_string(e.states);
    return {j, true};
  }
  if (o.consistency) {
    json j;
    j["check"] = "theta8";
    j["width"] = o.width;
    j["steps"] = o.steps;
    j["p"] = to_string(pq);
    j["r"] = to_string(rq);
    j["holds"] = theta8_consistency(o.width, o.steps, params_from_pr(pq, rq));
    return {j, true};
  }
  if (o.ergodicity) {
    std::vector<int> row = parse_digits(o.init_row);
    auto est = a8_marginals(FaceRows{row, row, 0}, to_double(pq), to_double(rq), o.steps, o.samples, g.seed);
    Table tab;
    tab.columns = {"cell", "estimate", "std_error"};
    for (std::size_t c = 0; c < est.size(); ++c)
      tab.rows.push_back({static_cast<long>(c), est[c].estimate, est[c].std_error});
    return {tab, false};
  }
  json j;
  j["kernel"] = o.kernel;
  std::optional<Hzmc> h;
  TpcaKernel T;
  if (o.kernel == "a8") {
    T = a8_kernel(to_double(pq), to_double(rq));
    j["params"] = {{"p", to_double(pq)}, {"r", to_double(rq)}};
    // A8 rates vanish at p or r in {0,1}; the solvers need positive rates.
    if (o.solver == "binary")
      h = solve_hzmc_binary(T);
    else if (o.solver == "equal")
      h = solve_hzmc_equal_du(T);
    else
      throw Error(ErrorKind::Usage, "--solver must be binary or equal");
  } else if (o.kernel == "a6") {
    double q = to_double(parse_value("q", o.q));
    if (q < 0 || q > 1) throw Error(ErrorKind::Domain, "q must lie in [0,1]");
    T = a6_kernel(to_double(pq));
    j["params"] = {{"p", to_double(pq)}, {"q", q}};
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      D(i, (i + 1) % 3) = q;
      D(i, (i + 2) % 3) = 1 - q;
    }
    Hzmc cand = make_hzmc(D, D);
    if (hzmc_invariance_residual(T, cand) <= kSolverTolerance) h = cand;
    j["candidate_residual"] = hzmc_invariance_residual(T, cand);
  } else {
    throw Error(ErrorKind::Usage, "--kernel must be a8 or a6");
  }
  j["solved"] = h.has_value();
  j["D"] = h ? matrix_json(h->D) : json();
  j["U"] = h ? matrix_json(h->U) : json();
  j["residual"] = h ? json(hzmc_invariance_residual(T, *h)) : json();
  return {j, true};
}

// asymp -----------------------------------------------------------------------

struct AsympOpts {
  std::string p = "0.2", r = "0.4", quantity = "rate";
  long t_max = 200, i = 0, t = 20, n = 0;
  int kind = 0;
  std::string K = "0", X = "0";
  std::uint64_t samples = 100000;
};

std::vector<Rational> parse_values(const std::string& name, const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_value(name, item));
  if (out.empty()) throw Error(ErrorKind::Usage, "--" + name + " is empty");
  return out;
}

template <class T>
Result asymp_exact(const AsympOpts& o) {
  Table tab;
  if (o.quantity == "h") {
    tab.columns = {"p", "r", "H"};
    for (const auto& p : parse_values("p", o.p))
      for (const auto& r : parse_values("r", o.r)) {
        KernelParams<T> kp = as_backend<T>(params_from_pr(p, r));
        tab.rows.push_back({cell(kp.p), cell(kp.r), cell(h_of<T>(kp))});
      }
  } else {
    tab.columns = {"kind", "n", "X", "value"};
    T x = value_as<T>(parse_value("X", o.X));
    tab.rows.push_back({o.kind, o.n, cell(x), cell(m_poly<T>(o.kind, o.n, x))});
  }
  return {tab, false};
}

Result cmd_asymp(const AsympOpts& o, const Globals& g) {
  Table tab;
  if (o.quantity == "rate") {
    tab.columns = {"p", "r", "lambda", "fitted_rate", "envelope_constant"};
    for (const auto& p : parse_values("p", o.p))
      for (const auto& r : parse_values("r", o.r)) {
        RateReport rep = fit_rate(params_from_pr(p, r), o.t_max, o.i);
        tab.rows.push_back({rep.p, rep.r, rep.lambda, rep.fitted_rate, rep.envelope_constant});
      }
  } else if (o.quantity == "h" || o.quantity == "mpoly") {
    return g.exact() ? asymp_exact<Rational>(o) : asymp_exact<double>(o);
  } else if (o.quantity == "m") {
    double k = to_double(parse_value("K", o.K));
    tab.columns = {"K", "m"};
    tab.rows.push_back({k, m_of(k)});
  } else if (o.quantity == "ywalk" || o.quantity == "ydecomp") {
    double p = to_double(parse_values("p", o.p).front());
    EmpiricalLaw law = o.quantity == "ywalk" ? y_walk_sim(p, o.t, o.samples, g.seed)
                                             : y_decomposition_sim(p, o.t, o.samples, g.seed);
    tab.columns = {"position", "count", "probability"};
    for (const auto& [pos, count] : law.counts)
      tab.rows.push_back({pos, static_cast<std::uint64_t>(count), law.probability(pos)});
  } else {
    throw Error(ErrorKind::Usage, "--quantity must be rate, h, m, mpoly, ywalk or ydecomp");
  }
  return {tab, false};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::ConstraintViolated:
      return 2;
    case ErrorKind::Domain:
    case ErrorKind::Degenerate:
    case ErrorKind::Singular:
    case ErrorKind::SingularDenominator:
    case ErrorKind::RegimeUnsupported:
    case ErrorKind::SizeExceeded:
    case ErrorKind::InvalidProfile:
    case ErrorKind::ImproperColoring:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and sampled edge correlations of the integrable 8-vertex model", "eightv"};
  Globals g;
  app.add_option("--seed", g.seed, "base seed for every random stream");
  app.add_option("--backend", g.backend, "float or rational")->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--format", g.format, "csv, json or auto")->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--output", g.output, "output path, - for standard output");
  app.add_option("--threads", g.threads, "worker threads, 0 for all");
  app.require_subcommand(1);

  ExactOpts ex;
  auto* exact = app.add_subcommand("exact", "closed-form C8 and related exact quantities");
  ex.params.attach(exact);
  exact->add_option("--i", ex.i, "position or range a..b");
  exact->add_option("--t", ex.t, "time or range a..b");
  exact->add_option("--what", ex.what, "c8, special, kdn, bound or params");

  OracleOpts orc;
  auto* oracle = app.add_subcommand("oracle", "independent reference computations");
  oracle->require_subcommand(1);
  auto* walk = oracle->add_subcommand("walk", "C8 through the walk dynamic programme");
  auto* series = oracle->add_subcommand("series", "generating-function coefficients");
  auto* paths = oracle->add_subcommand("paths", "brute-force coloured path enumeration");
  auto* fsub = oracle->add_subcommand("F", "closed forms of the generating functions");
  auto* binom = oracle->add_subcommand("binomial", "exact binomial coefficient");
  auto* multi = oracle->add_subcommand("multinomial", "exact multinomial coefficient");
  for (auto* s : {walk, series, paths}) orc.params.attach(s);
  for (auto* s : {walk, paths}) {
    s->add_option("--i", orc.i, "position or range");
    s->add_option("--t", orc.t, "time or range");
  }
  series->add_option("--i", orc.i, "position or range (with --t: print C8 instead of the coefficient table)");
  auto* series_t = series->add_option("--t", orc.t, "time or range");
  walk->add_flag("--dist", orc.dist, "print the walk law at the last time");
  series->add_option("--t-max", orc.t_max, "largest power of l");
  fsub->add_option("--C", orc.C);
  fsub->add_option("--K", orc.K);
  fsub->add_option("--R", orc.R);
  fsub->add_option("--L", orc.L);
  binom->add_option("--n", orc.n)->required();
  binom->add_option("--k", orc.k)->required();
  multi->add_option("--n", orc.n)->required();
  multi->add_option("--parts", orc.parts, "comma-separated parts")->required();

  SampleOpts so;
  auto* sample = app.add_subcommand("sample", "Monte Carlo estimators of the line dynamics");
  so.params.attach(sample);
  sample->add_option("--mode", so.mode, "pair, boundary, zigzag, marginal or exact");
  sample->add_option("--engine", so.engine, "line or particle");
  sample->add_option("--init", so.init, "pm:<q>, ones, zeros, ones-free or pattern:<bits>");
  sample->add_option("--i", so.i, "position or range");
  sample->add_option("--t", so.t, "time or range");
  sample->add_option("--samples", so.samples, "independent chains");
  sample->add_option("--width", so.width, "window width, 0 for automatic");
  sample->add_option("--steps", so.steps, "horizon for marginal, exact and dump");
  sample->add_option("--profile", so.profile, "zigzag times t_0,t_1,...");
  sample->add_option("--dump-trajectories", so.dump, "write t,i,state rows to this file");
  sample->add_option("--chains", so.chains, "chains to dump");

  EnumerateOpts eo;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "exact enumeration on small lattices");
  eo.params.attach(enumerate_cmd);
  enumerate_cmd->add_option("--lattice", eo.lattice, "k or kbar");
  enumerate_cmd->add_option("--n", eo.n, "lattice size N");
  enumerate_cmd->add_option("--bc", eo.bc, "free, fixed:<bits> or half:<q>");
  enumerate_cmd->add_flag("--gibbs", eo.gibbs, "print the Gibbs distribution");
  enumerate_cmd->add_option("--check", eo.check, "restriction");

  PcaOpts po;
  auto* pca = app.add_subcommand("pca", "triangular PCA kernels and HZMC solvers");
  pca->add_option("--kernel", po.kernel, "a8 or a6");
  pca->add_option("--solver", po.solver, "binary or equal");
  pca->add_option("--p", po.p);
  pca->add_option("--r", po.r);
  pca->add_option("--q", po.q, "A6 HZMC parameter");
  pca->add_flag("--consistency", po.consistency, "exact theta8 pushforward check");
  pca->add_flag("--ergodicity", po.ergodicity, "A8 single-cell marginals");
  pca->add_option("--width", po.width);
  pca->add_option("--steps", po.steps);
  pca->add_option("--samples", po.samples);
  pca->add_option("--init-row", po.init_row, "initial row for both face lines");
  pca->add_option("--rows", po.rows, "<upper>/<lower> face rows for --map");
  pca->add_option("--map", po.map, "theta8 or theta6");
  pca->add_option("--layer", po.layer, "layer index t of the face rows");

  AsympOpts ao;
  auto* asymp = app.add_subcommand("asymp", "decay rates and the r=0 walk");
  asymp->add_option("--quantity", ao.quantity, "rate, h, m, mpoly, ywalk or ydecomp");
  asymp->add_option("--p", ao.p, "value or comma list");
  asymp->add_option("--r", ao.r, "value or comma list");
  asymp->add_option("--t-max", ao.t_max);
  asymp->add_option("--i", ao.i);
  asymp->add_option("--t", ao.t);
  asymp->add_option("--K", ao.K);
  asymp->add_option("--kind", ao.kind);
  asymp->add_option("--n", ao.n);
  asymp->add_option("--X", ao.X);
  asymp->add_option("--samples", ao.samples);

  for (auto* s : {exact, oracle, walk, series, paths, fsub, binom, multi, sample, enumerate_cmd, pca, asymp})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << '\n';
    return 2;
  }

  try {
    set_thread_count(g.threads);
    Result res;
    if (exact->parsed()) {
      KernelParams<Rational> kp = ex.params.params();
      res = {g.exact() ? exact_table<Rational>(ex, kp) : exact_table<double>(ex, kp), false};
    } else if (walk->parsed()) {
      KernelParams<Rational> kp = orc.params.params();
      res = {g.exact() ? walk_table<Rational>(orc, kp) : walk_table<double>(orc, kp), false};
    } else if (series->parsed()) {
      KernelParams<Rational> kp = orc.params.params();
      orc.points = series_t->count() > 0;
      res = {g.exact() ? series_table<Rational>(orc, kp) : series_table<double>(orc, kp), false};
    } else if (paths->parsed()) {
      KernelParams<Rational> kp = orc.params.params();
      res = {g.exact() ? paths_table<Rational>(orc, kp) : paths_table<double>(orc, kp), false};
    } else if (fsub->parsed()) {
      res = {g.exact() ? f_table<Rational>(orc) : f_table<double>(orc), false};
    } else if (binom->parsed()) {
      Table tab{{"n", "k", "value"}, {{orc.n, orc.k, binomial(orc.n, orc.k).str()}}};
      res = {tab, false};
    } else if (multi->parsed()) {
      Table tab{{"n", "parts", "value"}, {{orc.n, orc.parts, multinomial(orc.n, parse_list(orc.parts)).str()}}};
      res = {tab, false};
    } else if (sample->parsed()) {
      res = cmd_sample(so, g);
    } else if (enumerate_cmd->parsed()) {
      res = cmd_enumerate(eo);
    } else if (pca->parsed()) {
      res = cmd_pca(po, g);
    } else {
      res = cmd_asymp(ao, g);
    }

    std::ostringstream buf;
    render(buf, res, g.format);
    if (g.output == "-") {
      out << buf.str();
    } else {
      std::ofstream f(g.output, std::ios::binary);
      if (!f) {
        err << "error: cannot open " << g.output << '\n';
        return 1;
      }
      f << buf.str();
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace eightv::cli
