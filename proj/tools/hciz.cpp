// hciz: coefficient tables, verification suites and Monte Carlo checks.

#include <hciz/hciz_finite.hpp>
#include <hciz/large_n.hpp>
#include <hciz/toda_ladder.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace hciz;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr const char* kCacheVersion = "1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int max_weight = 4;
  int weight = -1;
  int n = -1;
  int q = -1;
  std::string suite;
  std::string theta;
  std::string theta_tilde;
  std::string a;
  std::string b;
  long samples = 100000;
  std::uint64_t seed = 1;
  int precision = 50;
  std::string format = "tsv";
  std::string cache;
  int jobs = 1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<Rational> parse_list(const std::string& s, const char* what) {
  std::vector<Rational> out;
  try {
    for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad ") + what + ": " + e.what());
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

// "1=1/2,2=1/3"
std::map<int, Rational> parse_assignments(const std::string& s, const char* what) {
  std::map<int, Rational> out;
  if (s.empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    int q = 0;
    try {
      std::size_t used = 0;
      q = std::stoi(item.substr(0, eq), &used);
      if (used != eq) throw std::invalid_argument("index");
      out[q] = parse_rational(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    }
    if (q < 1) throw UsageError(std::string(what) + " indices start at 1");
  }
  return out;
}

// ---------------------------------------------------------------- expand-f

std::optional<fs::path> cache_file(const Config& cfg, int total_weight) {
  const std::string name = "F-character-w" + std::to_string(total_weight) + ".tsv";
  if (!cfg.cache.empty()) {
    const fs::path p(cfg.cache);
    return fs::is_directory(p) ? p / name : p;
  }
  if (const char* dir = std::getenv("HCIZ_CACHE_DIR"); dir && *dir) return fs::path(dir) / name;
  return std::nullopt;
}

std::string cache_header(int total_weight) {
  return "# hciz-cache route=character weight=" + std::to_string(total_weight) + " version=" + kCacheVersion;
}

std::string checksum_line(const std::string& body) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "# fnv1a64=" << std::hex << std::setw(16) << std::setfill('0') << h << "\n";
  return out.str();
}

std::optional<RationalSeries> read_cache(const fs::path& path, int total_weight) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  if (header != cache_header(total_weight)) {
    std::cerr << "warning: cache " << path.string() << " has a mismatched header; recomputing\n";
    return std::nullopt;
  }
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    const auto footer = body.rfind("# fnv1a64=");
    if (footer == std::string::npos) throw std::invalid_argument("missing checksum");
    if (checksum_line(body.substr(0, footer)) != body.substr(footer)) throw std::invalid_argument("checksum mismatch");
    body.resize(footer);
    RationalSeries f = parse_canonical_text(body, total_weight);
    if (to_canonical_text(f) != body) throw std::invalid_argument("lines out of canonical order");
    if (auto defect = free_energy_defect(f)) throw std::invalid_argument(*defect);
    return f;
  } catch (const std::exception& e) {
    std::cerr << "warning: cache " << path.string() << " is corrupt (" << e.what() << "); recomputing\n";
    return std::nullopt;
  }
}

void write_cache(const fs::path& path, int total_weight, const RationalSeries& f) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    const std::string body = to_canonical_text(f);
    out << cache_header(total_weight) << "\n" << body << checksum_line(body);
    if (!out) {
      std::cerr << "warning: could not write cache " << path.string() << "\n";
      return;
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) std::cerr << "warning: could not write cache " << path.string() << ": " << ec.message() << "\n";
}

void emit(const RationalSeries& f, const std::string& format, std::ostream& out) {
  if (format == "tsv") {
    out << to_canonical_text(f);
  } else if (format == "json-lines") {
    for (const auto& [m, c] : f.terms()) {
      const nlohmann::ordered_json rec{{"key", m.key()}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}};
      out << rec.dump() << "\n";
    }
  } else {
    std::size_t width = 8;
    for (const auto& [m, c] : f.terms()) width = std::max(width, m.key().size());
    out << std::left << std::setw(static_cast<int>(width)) << "monomial" << "  coefficient\n";
    for (const auto& [m, c] : f.terms()) out << std::setw(static_cast<int>(width)) << m.key() << "  " << c.get_str() << "\n";
  }
}

int cmd_expand_f(const Config& cfg) {
  if (cfg.max_weight < 1) throw UsageError("--max-weight must be >= 1");
  // Monomials of F pair theta-weight w with theta~-weight w.
  const int total = 2 * cfg.max_weight;
  const auto path = cache_file(cfg, total);
  std::optional<RationalSeries> f;
  if (path && fs::exists(*path)) f = read_cache(*path, total);
  if (!f) {
    f = assemble_F(total, cfg.jobs);
    if (path) write_cache(*path, total, *f);
  }
  emit(*f, cfg.format, std::cout);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

class Report {
 public:
  void check(const std::string& name, const std::string& params, bool pass, const std::string& detail = "") {
    ok_ = ok_ && pass;
    std::cout << (pass ? "PASS  " : "FAIL  ") << name << "  " << params;
    if (!detail.empty()) std::cout << "  " << detail;
    std::cout << "\n";
  }
  void series(const std::string& name, const std::string& params, const RationalSeries& residual) {
    if (residual.is_zero()) return check(name, params, true, "residual 0");
    const auto& [m, c] = *residual.terms().begin();
    check(name, params, false, "first nonzero residual " + m.key() + " -> " + to_string(c));
  }
  void lattice(const std::string& name, const std::string& params, const ResidualReport& r) {
    check(name, params + " window=" + std::to_string(r.window), r.zero, r.zero ? "residual 0" : "residual at " + r.describe());
  }
  int exit_code() const { return ok_ ? kExitOk : kExitFail; }

 private:
  bool ok_ = true;
};

int or_default(int v, int d) { return v < 0 ? d : v; }
std::string kv(const std::string& k, int v) { return k + "=" + std::to_string(v); }

void suite_toda(const Config& cfg, Report& rep) {
  const int n = or_default(cfg.n, 3), w = or_default(cfg.weight, 4);
  for (int k = 1; k <= n; ++k) rep.series("toda", kv("n", k) + " " + kv("weight", w), toda_residual(k, w));
}

void suite_kp(const Config& cfg, Report& rep) {
  const int n = or_default(cfg.n, 2), w = or_default(cfg.weight, 4);
  for (int k = 1; k <= n; ++k) rep.series("kp", kv("N", k) + " " + kv("weight", w), kp_residual(k, w));
}

void suite_lax(const Config& cfg, Report& rep) {
  const int qmax = or_default(cfg.q, 2), w = or_default(cfg.weight, 3), interior = or_default(cfg.n, 3);
  for (int q = 1; q <= qmax; ++q)
    for (Flow f : {Flow::t, Flow::t_tilde})
      for (LaxSide s : {LaxSide::u, LaxSide::u_tilde}) {
        const std::string name = std::string("lax ") + (s == LaxSide::u ? "U" : "U~") + (f == Flow::t ? " d/dt_" : " d/dt~_") +
                                 std::to_string(q);
        rep.lattice(name, kv("interior", interior) + " " + kv("weight", w), lax_residual(q, f, s, interior, w));
      }
}

void suite_string(const Config& cfg, Report& rep) {
  const int w = or_default(cfg.weight, 3), interior = or_default(cfg.n, 3);
  rep.lattice("string t=0", kv("interior", interior) + " weight=0", string_residual(interior, 0, {0, 0}));
  rep.lattice("string t1 only", kv("interior", interior) + " " + kv("weight", w), string_residual(interior, w, {1, 0}));
  rep.lattice("string", kv("interior", interior) + " " + kv("weight", w), string_residual(interior, w));
}

void suite_dkp(const Config& cfg, Report& rep) {
  const int w = or_default(cfg.weight, 8);
  rep.series("dkp chi=2psi^4", "ell=3 " + kv("weight", w), dkp_residual(3, w));
  const bool control = !dkp_residual(1, std::max(w, 2)).is_zero();
  rep.check("dkp control", "ell=1 " + kv("weight", std::max(w, 2)), control, control ? "residual nonzero as expected" : "residual vanished");
}

void suite_scaltoda(const Config& cfg, Report& rep) {
  const int w = or_default(cfg.weight, 4);
  rep.series("scaltoda", kv("weight", w), scaltoda_residual(assemble_F(w + 2, cfg.jobs)));
  const auto diag = scaltodab_residual(std::max(w, 8));
  rep.check("scaltoda diagonal", kv("order", std::max(w, 8)), diag.is_zero(), diag.is_zero() ? "residual 0" : "residual nonzero");
}

void suite_routes(const Config& cfg, Report& rep) {
  const int w = or_default(cfg.weight, 5);
  const RationalSeries f = assemble_F(2 * w, cfg.jobs);
  const auto defect = free_energy_defect(f);
  rep.check("free energy invariants", kv("weight", w), !defect, defect.value_or(""));
  const auto bad = route_mismatches(f, w);
  rep.check("derivative formulas vs character sum", kv("weight", w), bad.empty(),
            bad.empty() ? "" : std::to_string(bad.size()) + " mismatches, first " + bad.front());
  const auto fd = diagonal_free_energy(w);
  bool diag = true;
  for (int n = 1; n <= w; ++n)
    diag = diag && f.coefficient(Monomial::variable(0, 1, n) * Monomial::variable(1, 1, n)) == fd[n];
  rep.check("diagonal vs cubic", kv("weight", w), diag);
}

void suite_cumulants(const Config& cfg, Report& rep) {
  const int q = or_default(cfg.q, 12);
  if (q < 1) throw UsageError("--q must be >= 1");
  auto run = [&](const std::string& label, const std::string& text, const char* flag, int group) {
    const auto values = parse_assignments(text, flag);
    const ThetaValues th = values.empty() ? formal_thetas(group, q, q) : numeric_thetas(values, q);
    const auto direct = free_cumulants_direct(th, q);
    const auto inverted = free_cumulants_inversion(th, q);
    int first_bad = -1;
    for (int k = 1; k <= q && first_bad < 0; ++k)
      if (!(direct[k] == inverted[k])) first_bad = k;
    rep.check("cumulants direct vs inversion", kv("q", q) + (values.empty() ? " formal " + label : " " + label + "=" + text),
              first_bad < 0, first_bad < 0 ? "" : "first difference at cumulant " + std::to_string(first_bad));
  };
  run("theta~", cfg.theta_tilde, "--theta-tilde", 1);
  if (!cfg.theta.empty()) run("theta", cfg.theta, "--theta", 0);
}

int cmd_verify(const Config& cfg) {
  static const std::map<std::string, void (*)(const Config&, Report&)> suites{
      {"toda", suite_toda},     {"kp", suite_kp},         {"lax", suite_lax},       {"string", suite_string},
      {"dkp", suite_dkp},       {"scaltoda", suite_scaltoda}, {"routes", suite_routes}, {"cumulants", suite_cumulants},
  };
  const auto it = suites.find(cfg.suite);
  if (it == suites.end()) {
    std::string names;
    for (const auto& [k, v] : suites) names += (names.empty() ? "" : ", ") + k;
    throw UsageError("unknown suite '" + cfg.suite + "' (choose from " + names + ")");
  }
  Report rep;
  try {
    it->second(cfg, rep);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return rep.exit_code();
}

// ---------------------------------------------------------------- mc

int cmd_mc(const Config& cfg) {
  if (cfg.a.empty() || cfg.b.empty()) throw UsageError("mc needs --a and --b");
  SpectrumPair s{parse_list(cfg.a, "--a"), parse_list(cfg.b, "--b")};
  if (s.a.size() != s.b.size()) throw UsageError("--a and --b must have the same length");
  if (cfg.n >= 0 && static_cast<std::size_t>(cfg.n) != s.a.size()) throw UsageError("--n does not match the spectra");
  if (cfg.samples < 2) throw UsageError("--samples must be >= 2");
  if (cfg.precision < 10) throw UsageError("--precision must be >= 10");
  PrecisionScope scope(static_cast<unsigned>(cfg.precision));
  Real reference;
  try {
    reference = hciz_determinant(s, static_cast<unsigned>(cfg.precision));
  } catch (const DegenerateSpectrum& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto r = hciz_monte_carlo(s, cfg.samples, cfg.seed, cfg.jobs);
  const double ref = static_cast<double>(reference);
  const double z = z_score(r.estimate, r.stderr_, ref);
  std::cout << std::setprecision(17);
  std::cout << "N          " << s.n() << "\n";
  std::cout << "samples    " << r.samples << "\n";
  std::cout << "estimate   " << r.estimate << "\n";
  std::cout << "stderr     " << r.stderr_ << "\n";
  std::cout << "reference  " << std::setprecision(std::min(cfg.precision, 40)) << reference << "\n";
  std::cout << std::setprecision(6) << "|z|        " << std::abs(z) << "\n";
  return std::abs(z) <= 4 ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact series and numerics for the unitary-group integral exp(N tr A U B U^+)"};
  app.require_subcommand(1);
  Config cfg;

  auto* expand = app.add_subcommand("expand-f", "coefficients of the planar free energy F");
  expand->add_option("--max-weight", cfg.max_weight, "largest theta-weight (and theta~-weight) of a monomial")
      ->capture_default_str();
  expand->add_option("--format", cfg.format, "text, tsv or json-lines")
      ->check(CLI::IsMember({"text", "tsv", "json-lines"}))
      ->capture_default_str();
  expand->add_option("--cache", cfg.cache, "cache file or directory (default: $HCIZ_CACHE_DIR)");
  expand->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", cfg.suite, "toda, kp, lax, string, dkp, scaltoda, routes or cumulants")->required();
  verify->add_option("--weight", cfg.weight, "truncation weight");
  verify->add_option("--n", cfg.n, "lattice index, N, or interior window size");
  verify->add_option("--q", cfg.q, "largest flow or cumulant index");
  verify->add_option("--theta", cfg.theta, "moment values q=val,...");
  verify->add_option("--theta-tilde", cfg.theta_tilde, "moment values q=val,...");
  verify->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* mc = app.add_subcommand("mc", "Monte Carlo over Haar unitaries against the determinant formula");
  mc->add_option("--n", cfg.n, "matrix size");
  mc->add_option("--a", cfg.a, "eigenvalues of A, comma separated rationals");
  mc->add_option("--b", cfg.b, "eigenvalues of B, comma separated rationals");
  mc->add_option("--samples", cfg.samples, "number of samples")->capture_default_str();
  mc->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  mc->add_option("--precision", cfg.precision, "decimal digits for the determinant")->capture_default_str();
  mc->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (expand->parsed()) return cmd_expand_f(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_mc(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFail;
  }
}
