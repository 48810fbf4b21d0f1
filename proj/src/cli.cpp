#include "thinset/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "thinset/dimension.hpp"
#include "thinset/error.hpp"
#include "thinset/serialize.hpp"

namespace thinset::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"chain",  "member", "triple",       "tree",        "window",
                                      "dichotomy", "dim", "cantor-indep", "cantor-digit"};
const std::set<std::string> kTableCommands{"window", "dichotomy", "dim", "cantor-digit"};

struct Context {
  const json& config;
  const Options& options;

  std::string kind() const {
    if (!config.contains("kind")) fail(ErrorCode::ConfigError, "config needs \"kind\"");
    const std::string k = config["kind"].get<std::string>();
    if (k != "falconer" && k != "explicit" && k != "digit" && k != "independent") {
      fail(ErrorCode::ConfigError, "unknown kind '" + k + "'");
    }
    return k;
  }

  mpfr_prec_t precision() const {
    long p = options.precision_bits ? *options.precision_bits : config.value("precision_bits", 128L);
    if (p < 16 || p > kMaxPrecisionBits) fail(ErrorCode::ConfigError, "precision_bits out of range");
    return p;
  }

  std::size_t cap() const {
    std::size_t c = options.cap ? *options.cap : config.value("cap", kDefaultWindowCap);
    if (c == 0) fail(ErrorCode::ConfigError, "cap must be positive");
    return c;
  }

  LogConvention log() const {
    const std::string s = options.log_convention ? *options.log_convention
                                                 : config.value("log_convention", std::string("natural"));
    if (s == "natural") return LogConvention::Natural;
    if (s == "base2") return LogConvention::Base2;
    fail(ErrorCode::ConfigError, "log_convention must be natural or base2");
  }

  std::size_t size(const char* key, std::size_t fallback) const {
    if (!config.contains(key)) return fallback;
    return config[key].get<std::size_t>();
  }

  ScaleChain chain() const {
    const std::string k = kind();
    if (k == "falconer") {
      if (!config.contains("chain")) fail(ErrorCode::ConfigError, "falconer config needs \"chain\"");
      return chain_from_json(config["chain"]);
    }
    if (k == "explicit") {
      if (!config.contains("explicit_depth")) fail(ErrorCode::ConfigError, "explicit config needs \"explicit_depth\"");
      ExplicitChainOptions opts;
      opts.log = log();
      opts.precision = precision();
      if (config.contains("bit_budget")) opts.bit_budget = config["bit_budget"].get<unsigned long>();
      return build_explicit_chain(config["explicit_depth"].get<std::size_t>(), opts);
    }
    fail(ErrorCode::ConfigError, "command needs a falconer or explicit chain, kind is " + k);
  }

  DigitSpec digit() const {
    if (kind() != "digit" || !config.contains("digit")) fail(ErrorCode::ConfigError, "command needs a digit config");
    return digit_spec_from_json(config["digit"]);
  }

  std::vector<mpq_class> s_grid(std::vector<mpq_class> fallback) const {
    if (!config.contains("s_grid")) return fallback;
    std::vector<mpq_class> out;
    for (const auto& v : config["s_grid"]) {
      out.push_back(parse_rational(v));
      if (out.back() <= 0) fail(ErrorCode::ConfigError, "s values must be positive");
    }
    return out;
  }

  std::vector<std::size_t> n_range(std::size_t lo, std::size_t hi) const {
    if (config.contains("n_range")) {
      const json& r = config["n_range"];
      if (!r.is_array() || r.size() != 2) fail(ErrorCode::ConfigError, "n_range is [first, last]");
      lo = r[0].get<std::size_t>();
      hi = r[1].get<std::size_t>();
    }
    if (lo == 0 || lo > hi) fail(ErrorCode::ConfigError, "empty n_range");
    std::vector<std::size_t> out;
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }

  GaugeParams gauge() const {
    GaugeParams p;
    if (config.contains("gauge")) {
      const json& g = config["gauge"];
      if (g.contains("s")) p.s = parse_rational(g["s"]);
      if (g.contains("epsilon")) p.epsilon = parse_rational(g["epsilon"]);
      if (g.contains("C")) p.C = parse_rational(g["C"]);
    }
    validate(p);
    return p;
  }
};

std::string str(const mpz_class& v) { return v.get_str(); }

// Dyadic rationals from either {"terms": ...}, an integer, or "p/2^k".
SparseDyadic dyadic_from_json(const json& j) {
  if (j.is_object()) return sparse_from_json(j);
  const mpq_class q = parse_rational(j);
  const mpz_class den = q.get_den();
  const std::size_t k = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
  if (den != mpz_class(1) << k) fail(ErrorCode::ConfigError, "not a dyadic rational: " + j.dump());
  return SparseDyadic::term(mpz_class(k), q.get_num());
}

Segment window_of(const Context& ctx) {
  Segment w{SparseDyadic{}, SparseDyadic::integer(1)};
  if (ctx.config.contains("window")) {
    const json& j = ctx.config["window"];
    if (!j.contains("lo") || !j.contains("hi")) fail(ErrorCode::ConfigError, "window needs lo and hi");
    w = {dyadic_from_json(j["lo"]), dyadic_from_json(j["hi"])};
  }
  if (compare(w.lo, w.hi) > 0) fail(ErrorCode::ConfigError, "window has lo > hi");
  return w;
}

std::string counts_csv(const std::vector<std::size_t>& counts) {
  std::string out = "level,count\n";
  for (std::size_t j = 0; j < counts.size(); ++j) out += std::to_string(j + 1) + "," + std::to_string(counts[j]) + "\n";
  return out;
}

// ---- commands ---------------------------------------------------------------

Outcome cmd_chain(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  Outcome out;
  out.pass = true;
  json levels = json::array();
  for (std::size_t i = 1; i < chain.depth && chain.has_radius(i) && chain.has_multiplier(i); ++i) {
    json row{{"level", i}, {"branching", branching_at(chain, i)}, {"collapse", collapse_at(chain, i)}};
    const PowerSum bound = branching_lower_bound(chain, i);
    row["lower_bound"] = to_json(bound);
    const mpz_class half = mpz_class(1) << (chain.e_at(i).get_ui() - 1);
    json samples = json::array();
    for (const mpz_class& g : {mpz_class(0), half}) {
      const BranchingCount c = branching_count(chain, i, g);
      bool ok = true;
      if (branching_at(chain, i)) {
        // clipped windows only promise half the interior count
        const mpz_class w = chain.M_at(i) * chain.e_at(i) - chain.rho_at(i);
        const PowerSum need = c.clipped ? PowerSum::pow2(w) + PowerSum::constant(1) : bound;
        ok = c.count >= need;
      }
      out.pass = out.pass && ok;
      samples.push_back({{"g_numerator", str(g)}, {"count", to_json(c)}, {"pass", ok}});
    }
    row["samples"] = samples;
    levels.push_back(row);
  }
  out.result = {{"chain", to_json(chain)}, {"regime", to_json(classify_regime(chain))}, {"levels", levels}};
  if (ctx.kind() == "explicit") {
    GaugeParams corollary;  // epsilon = 1, C = 1/2
    json products = json::array();
    const std::size_t last = std::min(chain.depth, chain.parameter_levels() + 1);
    for (std::size_t n = 2; n <= last; ++n) {
      const ProductBoundReport r =
          product_bound(chain, n, corollary, ExponentMode::Packing2, ctx.log(), ctx.precision());
      out.pass = out.pass && r.holds;
      products.push_back(to_json(r));
    }
    out.result["product_bounds"] = products;
  }
  return out;
}

Outcome cmd_member(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  if (!ctx.config.contains("x")) fail(ErrorCode::ConfigError, "member needs \"x\"");
  const SparseDyadic x = dyadic_from_json(ctx.config["x"]);
  const std::size_t n = ctx.size("n", chain.rho.size());
  const MemberTrace trace = member_depth(chain, x, n);
  Outcome out;
  out.pass = trace.member;
  out.result = {{"x", to_json(x)}, {"n", n}, {"trace", to_json(trace)}};
  return out;
}

Outcome cmd_triple(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  const std::size_t K = ctx.size("K", 3);
  const std::size_t depth = ctx.size("depth", chain.rho.size());
  TripleSumFamily family;
  if (ctx.config.contains("indices")) {
    family = family_from_indices(chain, ctx.config["indices"].get<std::vector<std::size_t>>());
  } else {
    family = select_triple_indices(chain, ctx.size("k_max", K));
  }
  const TripleSumReport report = verify_triple_sum(chain, family, K, depth);
  Outcome out;
  out.pass = report.pass();
  out.result = {{"family", to_json(family)}, {"report", to_json(report)}};
  return out;
}

Outcome cmd_tree(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  std::vector<std::string> words;
  if (ctx.config.contains("bits")) {
    words = ctx.config["bits"].get<std::vector<std::string>>();
  } else {
    const std::size_t L = ctx.size("word_length", 4);
    if (L > 16) fail(ErrorCode::ConfigError, "word_length above 16");
    for (std::size_t w = 0; w < (std::size_t{1} << L); ++w) {
      std::string s;
      for (std::size_t b = L; b-- > 0;) s += ((w >> b) & 1) ? '1' : '0';
      words.push_back(s);
    }
  }
  std::optional<std::size_t> start;
  if (ctx.config.contains("start_level")) start = ctx.config["start_level"].get<std::size_t>();

  Outcome out;
  out.pass = true;
  json paths = json::array();
  std::vector<TreeInterval> deepest;
  for (const std::string& w : words) {
    const TreePath p = binary_tree_point(chain, w, start);
    const MemberTrace t = member_depth(chain, p.representative, p.intervals.back().level);
    out.pass = out.pass && t.member;
    json pj = to_json(p);
    pj["representative_member"] = t.member;
    paths.push_back(pj);
    deepest.push_back(p.intervals.back());
  }
  bool disjoint = true;
  std::set<std::size_t> lengths;
  for (const auto& w : words) lengths.insert(w.size());
  if (lengths.size() == 1) {
    std::sort(deepest.begin(), deepest.end(),
              [](const TreeInterval& a, const TreeInterval& b) { return compare(a.left, b.left) < 0; });
    for (std::size_t k = 1; k < deepest.size(); ++k) {
      const SparseDyadic right = deepest[k - 1].left + SparseDyadic::pow2(deepest[k - 1].radius_exponent);
      if (compare(right, deepest[k].left) >= 0) disjoint = false;
    }
  }
  out.pass = out.pass && disjoint;
  out.result = {{"paths", paths}, {"deepest_disjoint", disjoint}};
  return out;
}

Outcome cmd_window(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  const std::size_t n = ctx.size("n", chain.rho.size());
  const Segment window = window_of(ctx);
  const WindowEnumeration en = enumerate_window_levels(chain, n, window, ctx.cap());
  json cells = json::array();
  for (const WindowCell& c : en.levels.back()) cells.push_back(to_json(c.interval));
  Outcome out;
  out.pass = true;
  out.result = {{"n", n}, {"window", {to_json(window.lo), to_json(window.hi)}}, {"counts", en.counts()},
                {"intervals", cells}};
  out.csv = counts_csv(en.counts());
  return out;
}

Outcome cmd_dichotomy(const Context& ctx) {
  const ScaleChain chain = ctx.chain();
  const std::size_t n = ctx.size("n", chain.rho.size());
  const DichotomyReport r = dichotomy_probe(chain, n, window_of(ctx), ctx.cap());
  Outcome out;
  out.pass = r.monotone && r.single_descendant;
  out.result = {{"n", n}, {"report", to_json(r)}};
  out.csv = counts_csv(r.counts);
  return out;
}

std::vector<mpz_class> d_grid(const Context& ctx) {
  std::vector<mpz_class> grid;
  if (ctx.config.contains("d_grid")) {
    for (const auto& v : ctx.config["d_grid"]) grid.push_back(parse_integer(v));
  } else {
    grid = {4, 10, 20, 30};
  }
  return grid;
}

// Level-n cylinders of the digit set: all 2^n partial sums, width 2^{-(g(n+1)-1)}.
std::vector<Segment> digit_cylinders(const DigitSpec& spec, std::size_t n) {
  if (n > 16) fail(ErrorCode::CapExceeded, "more than 2^16 cylinders");
  const SparseDyadic width = SparseDyadic::pow2(spec.g_at(n + 1) - 1);
  std::vector<Segment> segs;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    SparseDyadic p;
    for (std::size_t k = 0; k < n; ++k) {
      if ((mask >> k) & 1) p = p + spec.a(k + 1);
    }
    segs.push_back({p, p + width});
  }
  return segs;
}

Outcome cmd_dim(const Context& ctx) {
  const std::string kind = ctx.kind();
  const std::vector<mpq_class> s_default{mpq_class(1, 2), mpq_class(1), mpq_class(2)};
  Outcome out;
  if (kind == "independent") {
    fail(ErrorCode::ConfigError, "dim on an independent tree: use cantor-indep");
  }
  std::vector<Segment> segments;
  DimensionTable table;
  if (kind == "digit") {
    const DigitSpec spec = ctx.digit();
    const std::vector<std::size_t> range = ctx.n_range(1, spec.N_max - 1);
    table = dimension_report(spec, ctx.s_grid(s_default), range, ctx.precision());
    segments = digit_cylinders(spec, range.back());
  } else {
    const ScaleChain chain = ctx.chain();
    ChainReportOptions opts;
    opts.params = ctx.gauge();
    opts.log = ctx.log();
    opts.cap = ctx.cap();
    opts.precision = ctx.precision();
    const std::vector<std::size_t> range = ctx.n_range(1, chain.rho.size());
    table = dimension_report(chain, ctx.s_grid(s_default), range, opts);
    const WindowEnumeration en =
        enumerate_window_levels(chain, range.back(), {SparseDyadic{}, SparseDyadic::integer(1)}, opts.cap);
    segments = cell_segments(en.levels.back());
  }
  const PackingCoveringReport pc = packing_vs_covering_check(segments, d_grid(ctx));
  out.pass = pc.pass;
  out.result = {{"table", to_json(table)}, {"packing_vs_covering", to_json(pc)}};
  out.csv = to_csv(table);
  return out;
}

Outcome cmd_cantor_indep(const Context& ctx) {
  if (ctx.kind() != "independent" || !ctx.config.contains("independent")) {
    fail(ErrorCode::ConfigError, "cantor-indep needs an independent config");
  }
  const json& j = ctx.config["independent"];
  const std::size_t n_max = j.value("n_max", std::size_t{2});
  const unsigned long H = j.value("H", 2ul);
  const std::size_t m_max = j.value("m_max", std::size_t{3});
  std::optional<std::size_t> count;
  if (j.contains("form_count")) count = j["form_count"].get<std::size_t>();
  std::vector<mpq_class> rho;
  if (j.contains("rho")) {
    for (const auto& v : j["rho"]) rho.push_back(parse_rational(v));
  } else {
    // rho_n = 10^{-2n}, comfortably below the tenfold decay requirement
    mpq_class r = 1;
    for (std::size_t n = 0; n < n_max; ++n) rho.push_back(r /= 100);
  }
  const std::vector<RationalForm> forms = enumerate_forms(H, m_max, count);
  const CantorTree tree = build_independent_tree(n_max, rho, forms);
  const TreeCheck check = verify_tree(tree, forms);
  const std::vector<mpq_class> samples = leaf_samples(tree);
  const QuadrupleResult quad = quadruple_scan(samples, std::less<mpq_class>());

  Outcome out;
  json forms_json = json::array();
  for (const auto& f : forms) forms_json.push_back(to_json(f));
  json samples_json = json::array();
  for (const auto& s : samples) samples_json.push_back(s.get_str());
  out.result = {{"forms", forms_json},   {"tree", to_json(tree)},   {"verify", {{"pass", check.pass},
                {"tuples_checked", check.tuples_checked}, {"failure", check.failure}}},
                {"samples", samples_json}, {"quadruple", to_json(quad)}};
  bool relation_free = true;
  if (samples.size() <= 8) {
    const RelationResult rel =
        relation_scan(samples, j.value("relation_H", H), j.value("relation_m_max", std::min<std::size_t>(m_max, 4)));
    relation_free = !rel.relation.has_value();
    out.result["relation"] = to_json(rel);
  } else {
    out.result["relation"] = "skipped: more than 8 samples";
  }
  out.pass = check.pass && !quad.indices && relation_free;
  const std::vector<mpq_class> s_grid = ctx.s_grid({mpq_class(1, 2), mpq_class(1), mpq_class(2)});
  json gauge = json::array();
  for (const TreeGaugeRow& row : tree_gauge_costs(tree, s_grid, ctx.precision())) {
    json costs = json::array();
    for (const Bracket& b : row.costs) costs.push_back(to_json(b));
    gauge.push_back({{"n", row.n}, {"d", str(row.d)}, {"costs", costs}});
  }
  out.result["gauge_costs"] = gauge;
  return out;
}

Outcome cmd_cantor_digit(const Context& ctx) {
  const DigitSpec spec = ctx.digit();
  const std::size_t N = ctx.size("separation_N", spec.N_max);
  const std::size_t index_cap = ctx.size("index_cap", std::min<std::size_t>(6, spec.N_max));
  const SeparationReport sep = separation_check(spec, N);
  const TripleSumsetReport triple = verify_triple_sumset(spec, index_cap);
  const std::vector<mpq_class> s_grid = ctx.s_grid({mpq_class(1, 2), mpq_class(1), mpq_class(2)});
  const DiagnosticTable diag =
      dimension_zero_diagnostic(spec, s_grid, ctx.n_range(1, spec.N_max - 1), ctx.precision());

  Outcome out;
  out.pass = sep.pass && triple.pass();
  out.result = {{"spec", to_json(spec)}, {"separation", to_json(sep)}, {"triple_sumset", to_json(triple)},
                {"diagnostic", to_json(diag)}};
  if (ctx.config.contains("members")) {
    json members = json::array();
    for (const auto& m : ctx.config["members"]) {
      const SparseDyadic x = dyadic_from_json(m);
      members.push_back({{"x", to_json(x)}, {"result", to_json(member_K(spec, x))}});
    }
    out.result["members"] = members;
  }
  std::string csv = "n";
  for (const auto& s : diag.s_grid) csv += ",s=" + s.get_str() + ",err";
  csv += "\n";
  for (const DiagnosticRow& row : diag.rows) {
    csv += std::to_string(row.n);
    for (const DiagnosticCell& c : row.cells) csv += "," + midpoint_string(c.value, 12) + "," + radius_string(c.value);
    csv += "\n";
  }
  out.csv = csv;
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::ConfigError, "cannot write " + path.string());
  f << text;
}

}  // namespace

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::ConfigError, path + ": cannot open");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    json j = json::parse(text);
    if (!j.is_object()) fail(ErrorCode::ConfigError, path + ": top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::ConfigError,
         path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

Outcome execute(const std::string& command, const json& config, const Options& options) {
  const Context ctx{config, options};
  try {
    if (command == "chain") return cmd_chain(ctx);
    if (command == "member") return cmd_member(ctx);
    if (command == "triple") return cmd_triple(ctx);
    if (command == "tree") return cmd_tree(ctx);
    if (command == "window") return cmd_window(ctx);
    if (command == "dichotomy") return cmd_dichotomy(ctx);
    if (command == "dim") return cmd_dim(ctx);
    if (command == "cantor-indep") return cmd_cantor_indep(ctx);
    if (command == "cantor-digit") return cmd_cantor_digit(ctx);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, e.what());
  }
  fail(ErrorCode::ConfigError, "unknown command '" + command + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Exact finite-depth checks for thin lattice and Cantor sets", "thinset"};
  Options opts;
  long precision = 0;
  std::size_t cap = 0;
  std::string log;
  app.add_option("command", opts.command, "chain|member|triple|tree|window|dichotomy|dim|cantor-indep|cantor-digit")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", opts.config_path, "JSON experiment config")->required();
  app.add_option("--out", opts.out_dir, "report directory");
  auto* prec_opt = app.add_option("--precision-bits", precision, "interval precision (default 128)");
  auto* cap_opt = app.add_option("--cap", cap, "enumeration cap");
  auto* log_opt = app.add_option("--log-convention", log, "natural|base2")->check(CLI::IsMember({"natural", "base2"}));
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*prec_opt) opts.precision_bits = precision;
  if (*cap_opt) opts.cap = cap;
  if (*log_opt) opts.log_convention = log;

  try {
    const json config = load_config(opts.config_path);
    const Outcome outcome = execute(opts.command, config, opts);
    json report{{"schema", kSchema},
                {"version", kVersion},
                {"command", opts.command},
                {"config_hash", config_hash(config)},
                {"timestamp", utc_timestamp()},
                {"pass", outcome.pass},
                {"result", outcome.result}};
    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path dir(opts.out_dir);
    write_file(dir / (opts.command + ".json"), report.dump(2) + "\n");
    if (outcome.csv) write_file(dir / (opts.command + ".csv"), *outcome.csv);
    std::cout << opts.command << ": " << (outcome.pass ? "pass" : "FAIL") << "\n";
    return outcome.pass ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "thinset: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "thinset: ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "thinset: ConfigError: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace thinset::cli
