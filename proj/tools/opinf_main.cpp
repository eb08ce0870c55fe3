// opinf: command-line front end for the polygon-inflation toolkit.
//
// One binary, subcommand style.  Machine output is UTF-8 JSON with stable key
// order (or RFC-4180 CSV for tabular data); every JSON document carries a
// schema_version and, unless --no-manifest is given, a provenance manifest.
// Exit codes: 0 ok, 2 usage/bad input, 3 not converged / budget exceeded,
// 4 no certificate.

#include "CLI11.hpp"
#include "json.hpp"

#include "opinf/certificate.hpp"
#include "opinf/constraints.hpp"
#include "opinf/local.hpp"
#include "opinf/manifest.hpp"
#include "opinf/opi.hpp"
#include "opinf/polygon.hpp"
#include "opinf/slp.hpp"
#include "opinf/version.hpp"
#include "opinf/words.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using opinf::Direction;
using opinf::Mode;
using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNoCertificate = 4;

double now_seconds() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

// All numeric output is printed with 9 significant digits; rounding the
// double through the text form keeps JSON numbers short and bit-stable.
double num9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string str9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int env_threads() {
  const char* s = std::getenv("OPINF_THREADS");
  if (!s || !*s) return 0;
  const long v = std::strtol(s, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 0;
}

json manifest_json(const opinf::RunManifest& m) {
  json j;
  j["tool"] = m.tool;
  j["version"] = m.version;
  j["schema"] = m.schema;
  j["command"] = m.command;
  j["arguments"] = m.arguments;
  j["started_utc"] = m.started_utc;
  j["wall_time_s"] = num9(m.wall_time_s);
  j["input_hash"] = m.input_hash;
  return j;
}

struct OutputOptions {
  std::string out_path;  // empty: stdout
  bool no_manifest = false;
};

void write_text(const OutputOptions& out, const std::string& text) {
  if (out.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out.out_path, std::ios::binary);
  if (!f) throw CLI::RuntimeError("cannot open output file: " + out.out_path, kExitUsage);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_json(const OutputOptions& out, json& doc, opinf::RunManifest manifest,
               double t_start) {
  if (!out.no_manifest) {
    manifest.wall_time_s = now_seconds() - t_start;
    doc["manifest"] = manifest_json(manifest);
  }
  write_text(out, doc.dump(2));
}

// RFC 4180: fields containing comma, quote, or newline are quoted with
// doubled inner quotes; records end in CRLF.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  q += '"';
  return q;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw CLI::RuntimeError("cannot open output file: " + path, kExitUsage);
    }
  }
  void row(const std::vector<std::string>& fields) {
    std::ostream& os = file_.is_open() ? file_ : std::cout;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_field(fields[i]);
    }
    os << "\r\n";
  }

 private:
  std::ofstream file_;
};

// Digit-by-digit decimal integer parse; immune to the library's 0x/0o
// radix-prefix interpretation of leading zeros.
std::optional<opinf::BigInt> parse_int(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  if (i >= s.size()) return std::nullopt;
  opinf::BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return neg ? opinf::BigInt(-v) : v;
}

// Exact decimal or fraction parser: "0.25", "-1/3", "2e-3".
opinf::Rational parse_exact(const std::string& s) {
  const auto bad = [&]() -> opinf::Rational {
    throw CLI::RuntimeError("malformed coordinate: " + s, kExitUsage);
  };
  if (s.empty()) return bad();
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const auto num = parse_int(s.substr(0, slash));
    const auto den = parse_int(s.substr(slash + 1));
    if (!num || !den || *den == 0) return bad();
    return opinf::make_rational(*num, *den);
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) return bad();
      seen_dot = true;
    } else {
      digits += s[i];
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    }
  }
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i >= s.size()) return bad();
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return bad();
      exp10 = exp10 * 10 + (s[i] - '0');
      if (exp10 > 1000) return bad();
    }
    if (eneg) exp10 = -exp10;
  }
  if (i != s.size() || !seen_digit) return bad();
  opinf::BigInt num = parse_int(digits.empty() ? "0" : digits).value();
  if (neg) num = -num;
  opinf::BigInt den(1);
  long shift = exp10 - frac_digits;
  for (; shift > 0; --shift) num *= 10;
  for (; shift < 0; ++shift) den *= 10;
  return opinf::make_rational(num, den);
}

std::vector<opinf::Rational> parse_coords(const std::string& s, std::size_t count) {
  std::vector<opinf::Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_exact(item));
  if (out.size() != count)
    throw CLI::RuntimeError("expected " + std::to_string(count) + " comma-separated values", kExitUsage);
  return out;
}

// --- enumerate ---------------------------------------------------------------

int cmd_enumerate(int n, const OutputOptions& out, const opinf::RunManifest& manifest,
                  double t_start) {
  const opinf::PolygonConstraints cons = opinf::constraints_for(n);
  const opinf::WordOrbits words = opinf::enumerate_word_orbits(n);
  const opinf::OutcomeOrbits outcomes = opinf::enumerate_outcome_orbits(n);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "enumerate";
  j["polygon"] = n;
  json counts;
  counts["correlators"] = words.reps.size();
  counts["outcomes"] = outcomes.reps.size();
  counts["linear"] = cons.linear_count();
  counts["quadratic"] = cons.quadratic_count();
  j["counts"] = counts;

  json corr = json::array();
  for (const opinf::Word& w : words.reps) corr.push_back(opinf::display(w));
  j["correlators"] = corr;

  json lin;
  json zeros = json::array();
  for (const opinf::Word& w : cons.zeros) zeros.push_back(opinf::display(w));
  lin["zeros"] = zeros;
  json eqs = json::array();
  for (const auto& [member, rep] : cons.equalities)
    eqs.push_back(json::array({opinf::display(member), opinf::display(rep)}));
  lin["equalities"] = eqs;
  j["linear"] = lin;

  json quads = json::array();
  for (const auto& t : opinf::quad_triples(n, cons)) {
    json q;
    q["target"] = opinf::display(t[0]);
    q["factors"] = json::array({opinf::display(t[1]), opinf::display(t[2])});
    quads.push_back(q);
  }
  j["quadratic"] = quads;

  emit_json(out, j, manifest, t_start);
  return kExitOk;
}

// --- bound -------------------------------------------------------------------

json bound_json(const opinf::BoundResult& r, const opinf::Model& model) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "bound";
  j["polygon"] = r.n;
  j["mode"] = opinf::mode_name(r.mode);
  j["direction"] = opinf::direction_name(r.direction);
  j["bound"] = num9(r.bound);
  j["status"] = opinf::bound_status_name(r.status);
  j["iterations"] = r.iterations;
  j["epsilon"] = num9(r.final_eps);
  j["residual"] = num9(r.residual);
  j["row_violation"] = num9(r.row_violation);
  json cc;
  cc["variables"] = model.vars.size();
  cc["positivity_rows"] = model.rows.size();
  cc["quadratic_triples"] = model.quads.size();
  j["constraint_counts"] = cc;
  j["wall_time_s"] = num9(r.wall_time_s);
  return j;
}

json state_json(const opinf::SlpState& st, int n, Mode mode, Direction dir) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "checkpoint";
  j["polygon"] = n;
  j["mode"] = opinf::mode_name(mode);
  j["direction"] = opinf::direction_name(dir);
  j["iteration"] = st.iteration;
  j["ebar"] = st.ebar;  // full precision: resume must reproduce the run
  j["xbar"] = st.xbar;
  return j;
}

std::optional<opinf::SlpState> load_state(const std::string& path, int n, Mode mode,
                                          Direction dir) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  json j;
  try {
    f >> j;
  } catch (const std::exception&) {
    throw CLI::RuntimeError("unreadable checkpoint: " + path, kExitUsage);
  }
  if (j.value("kind", "") != "checkpoint" || j.value("polygon", -1) != n ||
      j.value("mode", "") != opinf::mode_name(mode) ||
      j.value("direction", "") != opinf::direction_name(dir))
    throw CLI::RuntimeError("checkpoint does not match this run: " + path, kExitUsage);
  opinf::SlpState st;
  st.iteration = j.at("iteration").get<int>();
  st.ebar = j.at("ebar").get<double>();
  st.xbar = j.at("xbar").get<std::vector<double>>();
  return st;
}

void write_state(const std::string& path, const json& doc) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) return;  // checkpointing is best-effort
    f << doc.dump(2) << '\n';
  }
  std::rename(tmp.c_str(), path.c_str());
}

int cmd_bound(int n, Mode mode, Direction dir, double tol, int max_iterations,
              double time_limit_s, const std::string& checkpoint_path, bool resume,
              const std::string& ledger_path, const OutputOptions& out,
              const opinf::RunManifest& manifest, double t_start) {
  const opinf::Model model = opinf::build_model(n, mode);

  opinf::SlpOptions opts;
  if (tol > 0) opts.eps_tol = tol;
  if (max_iterations > 0) opts.max_iterations = max_iterations;
  opts.time_limit_s = time_limit_s;
  if (!checkpoint_path.empty()) {
    if (resume)
      opts.resume = load_state(checkpoint_path, n, mode, dir);
    opts.on_iteration = [&](const opinf::SlpState& st) {
      write_state(checkpoint_path, state_json(st, n, mode, dir));
    };
  }

  const opinf::BoundResult r = opinf::slp_bound(model, dir, opts);

  json j = bound_json(r, model);
  if (n <= 5) {
    // LP-only polygons admit an exact rational optimum
    const opinf::Rational exact = opinf::exact_linear_bound(model, dir);
    j["exact"] = opinf::to_string(exact);
  }
  if (r.status == opinf::BoundStatus::TimeLimit && !checkpoint_path.empty())
    j["checkpoint"] = checkpoint_path;

  if (!ledger_path.empty()) {
    json line;
    line["schema_version"] = kSchemaVersion;
    line["utc"] = opinf::utc_timestamp();
    line["polygon"] = n;
    line["mode"] = opinf::mode_name(mode);
    line["direction"] = opinf::direction_name(dir);
    line["bound"] = num9(r.bound);
    line["status"] = opinf::bound_status_name(r.status);
    line["iterations"] = r.iterations;
    line["wall_time_s"] = num9(r.wall_time_s);
    std::ofstream ledger(ledger_path, std::ios::app);
    if (ledger) ledger << line.dump() << '\n';
  }

  emit_json(out, j, manifest, t_start);
  return r.status == opinf::BoundStatus::Converged ? kExitOk : kExitNotConverged;
}

// --- certify -----------------------------------------------------------------

json certificate_json(const opinf::Certificate& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "certify";
  j["polygon"] = c.n;
  j["status"] = opinf::cert_status_name(c.status);
  if (c.status != opinf::CertStatus::Ok) {
    j["message"] = c.message;
    return j;
  }
  j["numeric_bound"] = num9(c.numeric_bound);
  j["active_rows"] = c.active_rows;
  j["active_orbits"] = c.active_orbits;
  j["active_sizes"] = c.active_sizes;
  json q = json::array();
  for (const opinf::BigInt& v : c.q) q.push_back(v.str());
  j["q"] = q;
  j["cancelled_correlators"] = c.cancelled_correlators;
  json poly;
  poly["primitive"] = json::array({c.p0.str(), c.p1.str(), c.p2.str()});
  poly["presented"] =
      json::array({opinf::to_string(c.c0), opinf::to_string(c.c1), opinf::to_string(c.c2)});
  j["polynomial"] = poly;
  json root;
  root["kind"] = c.root.is_rational ? "rational" : "surd";
  root["text"] = c.root.str();
  root["value"] = num9(c.root.value());
  j["root"] = root;
  return j;
}

int cmd_certify(int n, bool as_json, const OutputOptions& out,
                const opinf::RunManifest& manifest, double t_start) {
  const opinf::Certificate c = opinf::certify(n);
  json j = certificate_json(c);
  if (as_json || !out.out_path.empty()) {
    emit_json(out, j, manifest, t_start);
  }
  if (!as_json) {
    std::cout << opinf::certificate_text(c);
  }
  return c.status == opinf::CertStatus::Ok ? kExitOk : kExitNoCertificate;
}

// --- matrix ------------------------------------------------------------------

int cmd_matrix(int n, const std::string& out_path) {
  const opinf::CorrelatorMatrix m = opinf::build_matrix(n);
  CsvWriter csv(out_path);
  // Documented layout: the table is the transpose of the correlator-major
  // matrix -- the header row names the correlators ("1", "jj0", ...) and each
  // data row is one canonical outcome representative.
  std::vector<std::string> header;
  header.reserve(m.row_labels.size() + 1);
  header.push_back("outcome");
  for (const std::string& w : m.row_labels) header.push_back(w);
  csv.row(header);
  for (std::size_t o = 0; o < m.col_labels.size(); ++o) {
    std::vector<std::string> row;
    row.reserve(m.row_labels.size() + 1);
    row.push_back(m.col_labels[o]);
    for (std::size_t w = 0; w < m.row_labels.size(); ++w)
      row.push_back(std::to_string(m.entries[w][o]));
    csv.row(row);
  }
  return kExitOk;
}

// --- region ------------------------------------------------------------------

int cmd_region(const std::string& out_path, const std::string& ledger_path) {
  const opinf::RegionGeometry g = opinf::region_geometry();

  // Upper-bound lines per cumulative inflation level: prefer values recorded
  // in the results ledger, fall back to the reproduction runs of this tool.
  std::map<int, double> upper = {{3, 1.0},          {4, 0.5},
                                 {5, 5.0 / 11.0},   {6, 0.404040100},
                                 {7, 0.392034224},  {8, 0.380034573},
                                 {9, 0.374832000}};
  if (!ledger_path.empty()) {
    std::ifstream ledger(ledger_path);
    std::string line;
    while (ledger && std::getline(ledger, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;
      if (j.value("mode", "") != "cumulative" || j.value("direction", "") != "max")
        continue;
      if (j.value("status", "") != "converged") continue;
      const int n = j.value("polygon", 0);
      if (n >= 3 && n <= 12) upper[n] = j.value("bound", 0.0);
    }
  }

  CsvWriter csv(out_path);
  csv.row({"kind", "label", "e2_start", "e3o_start", "e2_end", "e3o_end"});
  const auto seg = [&](const std::string& kind, const std::string& label, double x0,
                       double y0, double x1, double y1) {
    csv.row({kind, label, str9(x0), str9(y0), str9(x1), str9(y1)});
  };

  const auto& v = g.triangle;  // positivity triangle vertices
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    seg("positivity_edge", "edge" + std::to_string(i), opinf::to_double(a[0]), opinf::to_double(a[1]),
        opinf::to_double(b[0]), opinf::to_double(b[1]));
  }
  seg("finner_line", "saturation", opinf::to_double(g.finner_segment[0][0]),
      opinf::to_double(g.finner_segment[0][1]), opinf::to_double(g.finner_segment[1][0]),
      opinf::to_double(g.finner_segment[1][1]));

  // Vertical bound line clipped to the positivity triangle: the triangle's
  // E3o range at fixed E2 comes from intersecting the three edges.
  const auto clip = [&](double x) -> std::optional<std::pair<double, double>> {
    double ymin = 1e30, ymax = -1e30;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x0 = opinf::to_double(v[i][0]), y0 = opinf::to_double(v[i][1]);
      const double x1 = opinf::to_double(v[(i + 1) % v.size()][0]), y1 = opinf::to_double(v[(i + 1) % v.size()][1]);
      if ((x0 - x) * (x1 - x) > 0 || x0 == x1) continue;
      const double t = (x - x0) / (x1 - x0);
      const double y = y0 + t * (y1 - y0);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    if (ymin > ymax) return std::nullopt;
    return std::make_pair(ymin, ymax);
  };
  for (const auto& [n, bound] : upper) {
    if (const auto y = clip(bound))
      seg("bound_line", "n" + std::to_string(n), bound, y->first, bound, y->second);
  }

  seg("point", "noisy", opinf::to_double(g.noisy_point[0]), opinf::to_double(g.noisy_point[1]),
      opinf::to_double(g.noisy_point[0]), opinf::to_double(g.noisy_point[1]));
  seg("point", "special", opinf::to_double(g.special_point[0]), opinf::to_double(g.special_point[1]),
      opinf::to_double(g.special_point[0]), opinf::to_double(g.special_point[1]));
  return kExitOk;
}

// --- scan --------------------------------------------------------------------

int cmd_scan(int k, std::uint64_t samples, std::uint64_t seed, std::uint64_t start_index,
             std::uint64_t max_strategies, const std::string& out_path) {
  if (samples == 0 && k > 2)
    throw CLI::RuntimeError("exhaustive scan is only supported for k <= 2; pass --samples",
                            kExitUsage);
  opinf::ScanOptions opts;
  opts.k = k;
  opts.samples = samples;
  opts.seed = seed;
  opts.start_index = start_index;
  opts.max_strategies = max_strategies;
  opts.threads = env_threads();

  CsvWriter csv(out_path);
  csv.row({"k", "strategy_hash", "e2_avg", "e3_avg", "opi_dev", "finner_margin"});
  const opinf::ScanSummary summary = opinf::scan_local(
      opts, [&](std::uint64_t, const opinf::GridStrategy& s, const opinf::StrategyEval& ev) {
        csv.row({std::to_string(k), std::to_string(opinf::strategy_hash(s)), str9(ev.e2),
                 str9(ev.e3o), str9(ev.opi_dev), str9(ev.margin)});
      });

  std::ostringstream note;
  note << "scanned " << summary.scanned;
  if (summary.total) note << " of " << summary.total;
  note << " strategies; min margin " << str9(summary.min_margin) << "; violations "
       << summary.violations << "; saturating " << summary.saturating;
  if (!summary.complete) note << "; resume at index " << summary.next_index;
  std::cerr << note.str() << '\n';
  return summary.complete ? kExitOk : kExitNotConverged;
}

// --- verify-theorem ----------------------------------------------------------

json strategy_json(const opinf::GridStrategy& s) {
  json j;
  j["k"] = s.k;
  j["hash"] = opinf::strategy_hash(s);
  j["A"] = std::vector<int>(s.A.begin(), s.A.end());
  j["B"] = std::vector<int>(s.B.begin(), s.B.end());
  j["C"] = std::vector<int>(s.C.begin(), s.C.end());
  return j;
}

int cmd_verify_theorem(int k, bool require_opi, std::uint64_t max_strategies,
                       std::uint64_t start_index, const OutputOptions& out,
                       const opinf::RunManifest& manifest, double t_start) {
  const opinf::SaturatingSearch res =
      opinf::search_finner_saturating(k, require_opi, max_strategies, start_index);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify-theorem";
  j["k"] = k;
  j["require_opi"] = require_opi;
  j["status"] = opinf::search_status_name(res.status);
  j["scanned"] = res.scanned;
  if (!res.analysis.empty()) j["analysis"] = res.analysis;
  if (res.status == opinf::SearchStatus::BudgetExceeded) j["next_index"] = res.next_index;
  if (!res.found.empty()) {
    json f = json::array();
    for (const auto& s : res.found) f.push_back(strategy_json(s));
    j["found"] = f;
  }

  switch (res.status) {
    case opinf::SearchStatus::Empty:
      std::cout << "EMPTY\n";
      emit_json(out, j, manifest, t_start);
      return kExitOk;
    case opinf::SearchStatus::Found:
      std::cout << "FOUND " << res.found.size() << "\n";
      emit_json(out, j, manifest, t_start);
      // Finding a saturating OPI strategy would contradict the theorem.
      return require_opi ? 1 : kExitOk;
    case opinf::SearchStatus::BudgetExceeded:
      std::cout << "BUDGET-EXCEEDED\n";
      emit_json(out, j, manifest, t_start);
      return kExitNotConverged;
    case opinf::SearchStatus::Unsupported:
    default:
      std::cout << "UNSUPPORTED\n";
      emit_json(out, j, manifest, t_start);
      return kExitUsage;
  }
}

// --- finner ------------------------------------------------------------------

int cmd_finner(const std::string& p_arg, const std::string& e_arg, const OutputOptions& out,
               const opinf::RunManifest& manifest, double t_start) {
  if (p_arg.empty() == e_arg.empty())
    throw CLI::RuntimeError("pass exactly one of --p p111,p112,p123 or --e e2,e3o",
                            kExitUsage);
  opinf::OpiDistribution p;
  if (!p_arg.empty()) {
    const auto c = parse_coords(p_arg, 3);
    p = opinf::OpiDistribution{c[0], c[1], c[2]};
  } else {
    const auto c = parse_coords(e_arg, 2);
    p = opinf::correlators_to_probs(opinf::OpiCorrelators{c[0], c[1]});
  }
  const opinf::Rational margin = opinf::finner_margin(p);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "finner";
  json pj;
  pj["p111"] = num9(opinf::to_double(p.p111));
  pj["p112"] = num9(opinf::to_double(p.p112));
  pj["p123"] = num9(opinf::to_double(p.p123));
  pj["exact"] = json::array({opinf::to_string(p.p111), opinf::to_string(p.p112), opinf::to_string(p.p123)});
  j["p"] = pj;
  if (p.normalized()) {
    const opinf::OpiCorrelators e = opinf::probs_to_correlators(p);
    json ej;
    ej["e2"] = num9(opinf::to_double(e.e2));
    ej["e3o"] = num9(opinf::to_double(e.e3o));
    ej["exact"] = json::array({opinf::to_string(e.e2), opinf::to_string(e.e3o)});
    j["e"] = ej;
  } else {
    const opinf::Rational sum = 4 * p.p111 + 36 * p.p112 + 24 * p.p123;
    j["normalization_sum"] = opinf::to_string(sum);
  }
  j["normalized"] = p.normalized();
  j["nonnegative"] = p.nonnegative();
  j["finner_margin"] = num9(opinf::to_double(margin));
  j["finner_margin_exact"] = opinf::to_string(margin);
  j["finner_satisfied"] = margin >= 0;
  j["finner_saturated"] = margin == 0;
  emit_json(out, j, manifest, t_start);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  const double t_start = now_seconds();
  std::vector<std::string> arguments(argv + 1, argv + argc);

  CLI::App app{"polygon-inflation toolkit for the four-output triangle network"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  OutputOptions out;
  app.add_option("--out", out.out_path, "write machine output to this file instead of stdout");
  app.add_flag("--no-manifest", out.no_manifest,
               "omit the provenance manifest from JSON output (for golden files)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "word orbits and constraint lists");
  int en_n = 6;
  enumerate->add_option("--n", en_n, "polygon size")->required()->check(CLI::Range(3, 9));

  // bound
  auto* bound = app.add_subcommand("bound", "NSI bound on the two-point correlator");
  int b_n = 6;
  std::string b_mode = "single", b_dir = "max";
  double b_tol = 0, b_time_limit = 0;
  int b_max_iters = 0;
  std::string b_checkpoint, b_ledger = "opinf_results.jsonl";
  bool b_resume = false, b_no_ledger = false, b_no_checkpoint = false;
  bound->add_option("--n", b_n, "polygon size")->required()->check(CLI::Range(3, 9));
  bound->add_option("--mode", b_mode, "single | cumulative")
      ->check(CLI::IsMember({"single", "cumulative"}));
  bound->add_option("--direction", b_dir, "max | min")->check(CLI::IsMember({"max", "min"}));
  bound->add_option("--tol", b_tol, "epsilon convergence tolerance (default 1e-10)");
  bound->add_option("--max-iterations", b_max_iters, "iteration cap (default 200)");
  bound->add_option("--time-limit", b_time_limit, "wall-time limit in seconds (0: none)");
  bound->add_option("--checkpoint", b_checkpoint,
                    "checkpoint file (default opinf_checkpoint_*.json for n >= 8)");
  bound->add_flag("--no-checkpoint", b_no_checkpoint, "disable checkpointing");
  bound->add_flag("--resume", b_resume, "resume from the checkpoint file if present");
  bound->add_option("--ledger", b_ledger, "results ledger to append to (JSON lines)");
  bound->add_flag("--no-ledger", b_no_ledger, "do not append to the results ledger");

  // certify
  auto* certify = app.add_subcommand("certify", "exact algebraic certificate");
  int c_n = 6;
  bool c_json = false;
  certify->add_option("--n", c_n, "polygon size")->required()->check(CLI::Range(3, 9));
  certify->add_flag("--json", c_json, "print JSON instead of the text rendering");

  // matrix
  auto* matrix = app.add_subcommand("matrix", "probability/correlator change-of-basis CSV");
  int m_n = 3;
  matrix->add_option("--n", m_n, "polygon size")->required()->check(CLI::Range(3, 9));

  // region
  auto* region = app.add_subcommand("region", "correlator-plane geometry CSV");
  std::string r_ledger = "opinf_results.jsonl";
  region->add_option("--ledger", r_ledger, "results ledger supplying bound lines");

  // scan
  auto* scan = app.add_subcommand("scan", "grid-strategy scan CSV");
  int s_k = 2;
  std::uint64_t s_samples = 0, s_seed = 1, s_start = 0, s_max = 0;
  scan->add_option("--k", s_k, "grid size")->required()->check(CLI::Range(1, 8));
  scan->add_option("--samples", s_samples, "random sample count (0: exhaustive, k <= 2)");
  scan->add_option("--seed", s_seed, "random seed");
  scan->add_option("--start-index", s_start, "resume index for exhaustive scans");
  scan->add_option("--max-strategies", s_max, "stop after this many strategies");

  // verify-theorem
  auto* verify = app.add_subcommand("verify-theorem", "saturating-strategy search");
  int v_k = 2;
  bool v_allow_non_opi = false;
  std::uint64_t v_max = 0, v_start = 0;
  verify->add_option("--k", v_k, "grid size")->required()->check(CLI::Range(1, 8));
  verify->add_flag("--allow-non-opi", v_allow_non_opi,
                   "search without the symmetry requirement");
  verify->add_option("--max-strategies", v_max, "search budget (0: unbounded)");
  verify->add_option("--start-index", v_start, "resume index");

  // finner
  auto* finner = app.add_subcommand("finner", "inequality margin and coordinate conversion");
  std::string f_p, f_e;
  finner->add_option("--p", f_p, "probabilities p111,p112,p123 (decimals or fractions)");
  finner->add_option("--e", f_e, "correlators e2,e3o (decimals or fractions)");

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
    if (*enumerate) {
      const auto manifest = opinf::make_manifest("enumerate", arguments);
      return cmd_enumerate(en_n, out, manifest, t_start);
    }
    if (*bound) {
      const auto manifest = opinf::make_manifest("bound", arguments);
      const Mode mode = (b_mode == "single") ? Mode::Single : Mode::Cumulative;
      const Direction dir = (b_dir == "max") ? Direction::Max : Direction::Min;
      std::string checkpoint = b_checkpoint;
      if (checkpoint.empty() && b_n >= 8 && !b_no_checkpoint)
        checkpoint = "opinf_checkpoint_n" + std::to_string(b_n) + "_" + b_mode + "_" +
                     b_dir + ".json";
      if (b_no_checkpoint) checkpoint.clear();
      return cmd_bound(b_n, mode, dir, b_tol, b_max_iters, b_time_limit, checkpoint,
                       b_resume, b_no_ledger ? std::string() : b_ledger, out, manifest,
                       t_start);
    }
    if (*certify) {
      const auto manifest = opinf::make_manifest("certify", arguments);
      return cmd_certify(c_n, c_json, out, manifest, t_start);
    }
    if (*matrix) return cmd_matrix(m_n, out.out_path);
    if (*region) return cmd_region(out.out_path, r_ledger);
    if (*scan) return cmd_scan(s_k, s_samples, s_seed, s_start, s_max, out.out_path);
    if (*verify) {
      const auto manifest = opinf::make_manifest("verify-theorem", arguments);
      return cmd_verify_theorem(v_k, !v_allow_non_opi, v_max, v_start, out, manifest,
                                t_start);
    }
    if (*finner) {
      const auto manifest = opinf::make_manifest("finner", arguments);
      return cmd_finner(f_p, f_e, out, manifest, t_start);
    }
  } catch (const CLI::RuntimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
