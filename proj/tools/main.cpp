#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bernstein.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitClass = 4;

constexpr int kSchemaVersion = 1;

const char* kColumnHelp = R"(CSV columns (decimal strings at the working precision):
  rate      n, R_n, A_n, tail_part, bulk_part, poisson_part
              R_n = tail_part + bulk_part; poisson_part is the integral of
              phi/(x^2+1) over [0, A_n]
  en        n, p, E_n, log_E_n, precision_bits, constraint_residual,
            imaginary_mass, lower_bound, upper_bound, relative_gap
              lower/upper bound and gap are the p = inf certificate
  sandwich  n, p, E_n, log_E_n, R_n, ratio   (ratio = -log_E_n / R_n)
              the ratio spread and log-log slopes go to stderr (csv) or
              the summary object (json)
  bounds    n, class, E_n, log_E_n, cheb_bound_log, mergelyan_bound_log,
            best_bound_log   (E_n for p = inf; a bound the growth class does
            not admit is left empty)
  classify  weight, kind, witness_A, witness_eps
  --timing appends wall_time_ms to every row.

n ranges: 8, 8..64, 8..64:4. --dyadic keeps the powers of two in the range;
sandwich is dyadic unless a step is given.
Exit codes: 0 ok, 1 failure, 2 configuration, 3 non-convergence, 4 growth class.)";

struct Options {
  std::string weight;
  std::string p = "2";
  std::string n;
  bool dyadic = false;
  unsigned precision_bits = 0;
  std::string tol = "1e-10";
  std::string out = "csv";
  std::string plot;
  std::string cache_dir;
  int jobs = 1;
  bool timing = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Failure {
  bn_status status;
  std::string message;
};

int exit_code(bn_status s) {
  switch (s) {
    case BN_ERR_CONFIG:
    case BN_ERR_FAMILY:
    case BN_ERR_DOMAIN:
    case BN_ERR_PRECONDITION:
    case BN_ERR_DEGENERATE_INPUT:
    case BN_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    case BN_ERR_NON_CONVERGENCE:
      return kExitNonConvergence;
    case BN_ERR_CLASS:
      return kExitClass;
    default:
      return kExitFailure;
  }
}

using Row = std::vector<std::pair<std::string, std::string>>;

struct ResultPtr {
  bn_result* r = nullptr;
  ~ResultPtr() { bn_result_free(r); }
};

struct WeightPtr {
  bn_weight* w = nullptr;
  ~WeightPtr() { bn_weight_free(w); }
};

struct CachePtr {
  bn_cache* c = nullptr;
  ~CachePtr() { bn_cache_free(c); }
};

Row to_row(const bn_result* r) {
  Row row;
  for (size_t i = 0; i < bn_result_size(r); ++i) {
    row.emplace_back(bn_result_key(r, i), bn_result_value(r, i));
  }
  return row;
}

std::optional<std::string> lookup(const Row& row, const std::string& key) {
  for (const auto& [k, v] : row) {
    if (k == key) return v;
  }
  return std::nullopt;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::vector<int> parse_range(const std::string& text, bool dyadic, bool dyadic_default) {
  if (text.empty()) throw ConfigError("--n is required");
  int lo = 0, hi = 0, step = 1;
  bool has_step = false;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    lo = hi = parse_int(text);
  } else {
    lo = parse_int(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = parse_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
      has_step = true;
      if (step < 1) throw ConfigError("range step must be positive");
    }
    hi = parse_int(rest);
  }
  if (lo < 0) throw ConfigError("degrees must be non-negative");
  const bool use_dyadic = dyadic || (dyadic_default && !has_step && lo != hi);
  std::vector<int> ns;
  if (use_dyadic) {
    for (long long k = 1; k <= hi; k *= 2) {
      if (k >= lo) ns.push_back(static_cast<int>(k));
    }
  } else {
    for (int n = lo; n <= hi; n += step) ns.push_back(n);
  }
  if (ns.empty()) throw ConfigError("empty degree range '" + text + "'");
  return ns;
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
  size_t pos = 0;
  double p = 0;
  try {
    p = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid p '" + s + "'");
  }
  if (pos != s.size() || !(p >= 1)) throw ConfigError("p must be >= 1 or inf, got '" + s + "'");
  return p;
}

double parse_tol(const std::string& s) {
  size_t pos = 0;
  double t = 0;
  try {
    t = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid tolerance '" + s + "'");
  }
  if (pos != s.size() || !(t > 0)) throw ConfigError("tolerance must be positive");
  return t;
}

std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_csv(std::ostream& os, const std::vector<std::string>& cols,
               const std::vector<Row>& rows) {
  for (size_t j = 0; j < cols.size(); ++j) os << (j ? "," : "") << cols[j];
  os << "\n";
  for (const Row& row : rows) {
    for (size_t j = 0; j < cols.size(); ++j) {
      os << (j ? "," : "") << csv_cell(lookup(row, cols[j]).value_or(""));
    }
    os << "\n";
  }
  os.flush();
}

void write_json(std::ostream& os, const std::string& command, const std::string& weight_id,
                const Options& opt, const std::vector<std::string>& cols,
                const std::vector<Row>& rows, const Row* summary) {
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"schema_version", kSchemaVersion},
                     {"tool_version", bn_version()},
                     {"command", command},
                     {"weight", weight_id},
                     {"precision_bits", opt.precision_bits}};
  if (!rows.empty()) {
    if (auto bits = lookup(rows.front(), "precision_bits")) {
      doc["metadata"]["precision_bits"] = std::stoul(*bits);
    }
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Row& row : rows) {
    nlohmann::ordered_json o;
    for (const auto& c : cols) {
      auto v = lookup(row, c);
      o[c] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(o));
  }
  doc["rows"] = std::move(arr);
  if (summary) {
    nlohmann::ordered_json s;
    for (const auto& [k, v] : *summary) s[k] = v;
    doc["summary"] = std::move(s);
  }
  os << doc.dump(2) << "\n";
  os.flush();
}

// Runs task(i) for every index with up to `jobs` workers. Returns the
// completed prefix and the first failure in index order, if any.
template <class Task>
std::pair<std::vector<Row>, std::optional<Failure>> run_sweep(size_t count, int jobs,
                                                              bool timing, Task task) {
  std::vector<std::optional<Row>> rows(count);
  std::vector<std::optional<Failure>> errors(count);
  std::atomic<size_t> next{0};
  std::atomic<size_t> first_fail{count};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      // Later entries cannot be reported once an earlier one has failed.
      if (i > first_fail.load()) continue;
      const auto t0 = std::chrono::steady_clock::now();
      ResultPtr res;
      const bn_status s = task(i, &res.r);
      if (s != BN_OK) {
        errors[i] = Failure{s, bn_last_error()};
        size_t cur = first_fail.load();
        while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
        }
        continue;
      }
      Row row = to_row(res.r);
      if (timing) {
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        std::ostringstream t;
        t.setf(std::ios::fixed);
        t.precision(3);
        t << ms;
        row.emplace_back("wall_time_ms", t.str());
      }
      rows[i] = std::move(row);
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<Row> done;
  for (size_t i = 0; i < count; ++i) {
    if (errors[i]) return {std::move(done), errors[i]};
    if (!rows[i]) break;
    done.push_back(std::move(*rows[i]));
  }
  return {std::move(done), std::nullopt};
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::string svg_number(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

void write_plot(const std::string& path, const std::string& title, const std::vector<int>& ns,
                const std::vector<double>& en, const std::vector<double>& rate) {
  const double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 50;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0;
  for (double v : en) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  for (double v : rate) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  if (!(ymin > 0)) ymin = 1e-3;
  if (!(ymax > ymin)) ymax = ymin * 10;
  const double lx0 = std::log(ns.front()), lx1 = std::log(std::max(ns.back(), ns.front() + 1));
  const double ly0 = std::log(ymin) - 0.05, ly1 = std::log(ymax) + 0.05;
  auto X = [&](double n) { return left + (std::log(n) - lx0) / (lx1 - lx0) * (W - left - right); };
  auto Y = [&](double v) {
    return H - bottom - (std::log(std::max(v, ymin)) - ly0) / (ly1 - ly0) * (H - top - bottom);
  };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write plot to " + path);
  f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">"
    << title << "</text>\n"
    << "<g stroke=\"black\" fill=\"none\">\n"
    << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right
    << "\" y2=\"" << H - bottom << "\"/>\n"
    << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
    << H - bottom << "\"/>\n</g>\n"
    << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int n : ns) {
    f << "<text x=\"" << svg_number(X(n)) << "\" y=\"" << H - bottom + 16
      << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = std::exp(ly0 + (ly1 - ly0) * k / 4);
    f << "<text x=\"" << left - 6 << "\" y=\"" << svg_number(Y(v) + 4)
      << "\" text-anchor=\"end\">" << svg_number(v) << "</text>\n";
  }
  f << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\">n (log scale)</text>\n</g>\n";

  auto series = [&](const std::vector<double>& ys, const char* colour, const char* label,
                    int slot) {
    f << "<g>\n<title>" << label << "</title>\n<polyline fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < ns.size(); ++i) {
      f << (i ? " " : "") << svg_number(X(ns[i])) << "," << svg_number(Y(ys[i]));
    }
    f << "\"/>\n";
    for (size_t i = 0; i < ns.size(); ++i) {
      f << "<circle cx=\"" << svg_number(X(ns[i])) << "\" cy=\"" << svg_number(Y(ys[i]))
        << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = top + 20 + 20 * slot;
    f << "<line x1=\"" << W - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 40
      << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << W - right + 46 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n</g>\n";
  };
  series(en, "#1f77b4", "-log E_n", 0);
  series(rate, "#d62728", "R(n)", 1);
  f << "</svg>\n";
}

class Runner {
 public:
  explicit Runner(const Options& o) : opt_(o) {}

  int rate() {
    const std::vector<int> ns = parse_range(opt_.n, opt_.dyadic, false);
    WeightPtr w = weight();
    bn_options o = options();
    auto [rows, err] = run_sweep(ns.size(), opt_.jobs, opt_.timing, [&](size_t i, bn_result** r) {
      return bn_rate(w.w, ns[i], &o, r);
    });
    for (Row& row : rows) {
      for (auto& kv : row) {
        if (kv.first == "R") kv.first = "R_n";
      }
    }
    return finish("rate", bn_weight_id(w.w),
                  columns({"n", "R_n", "A_n", "tail_part", "bulk_part", "poisson_part"}), rows,
                  err, nullptr);
  }

  int en() {
    const std::vector<int> ns = parse_range(opt_.n, opt_.dyadic, false);
    const double p = parse_p(opt_.p);
    WeightPtr w = weight();
    CachePtr cache = open_cache();
    bn_options o = options();
    o.cache = cache.c;
    o.n_max = bn_degree_tier(*std::max_element(ns.begin(), ns.end()));
    auto [rows, err] = run_sweep(ns.size(), opt_.jobs, opt_.timing, [&](size_t i, bn_result** r) {
      return bn_en(w.w, ns[i], p, &o, r);
    });
    return finish("en", bn_weight_id(w.w),
                  columns({"n", "p", "E_n", "log_E_n", "precision_bits", "constraint_residual",
                           "imaginary_mass", "lower_bound", "upper_bound", "relative_gap"}),
                  rows, err, nullptr);
  }

  int sandwich() {
    const std::vector<int> ns = parse_range(opt_.n.empty() ? "8..64" : opt_.n, opt_.dyadic, true);
    const double p = parse_p(opt_.p);
    WeightPtr w = weight();
    CachePtr cache = open_cache();
    bn_options o = options();
    o.cache = cache.c;
    o.n_max = bn_degree_tier(*std::max_element(ns.begin(), ns.end()));
    auto [rows, err] = run_sweep(ns.size(), opt_.jobs, opt_.timing, [&](size_t i, bn_result** r) {
      return bn_sandwich_row(w.w, ns[i], p, &o, r);
    });

    std::optional<Row> summary;
    if (!err && !rows.empty()) {
      std::vector<int> done_ns;
      std::vector<std::string> ratios, neg;
      for (const Row& row : rows) {
        done_ns.push_back(std::stoi(*lookup(row, "n")));
        ratios.push_back(*lookup(row, "ratio"));
        std::string le = *lookup(row, "log_E_n");
        neg.push_back(le.front() == '-' ? le.substr(1) : "-" + le);
      }
      std::vector<const char*> rp, np;
      for (size_t i = 0; i < rows.size(); ++i) {
        rp.push_back(ratios[i].c_str());
        np.push_back(neg[i].c_str());
      }
      ResultPtr s;
      const bn_status st =
          bn_sandwich_summary(done_ns.data(), rp.data(), np.data(), rows.size(), &s.r);
      if (st != BN_OK) {
        err = Failure{st, bn_last_error()};
      } else {
        summary = to_row(s.r);
      }
      if (!opt_.plot.empty()) {
        std::vector<double> en_v, rate_v;
        for (size_t i = 0; i < rows.size(); ++i) {
          en_v.push_back(to_double(neg[i]));
          rate_v.push_back(to_double(*lookup(rows[i], "R_n")));
        }
        write_plot(opt_.plot, std::string(bn_weight_id(w.w)) + ", p = " + opt_.p, done_ns, en_v,
                   rate_v);
      }
    }
    return finish("sandwich", bn_weight_id(w.w),
                  columns({"n", "p", "E_n", "log_E_n", "R_n", "ratio"}), rows, err,
                  summary ? &*summary : nullptr);
  }

  int bounds() {
    const std::vector<int> ns = parse_range(opt_.n, opt_.dyadic, false);
    WeightPtr w = weight();
    CachePtr cache = open_cache();
    bn_options o = options();
    o.cache = cache.c;
    o.n_max = bn_degree_tier(*std::max_element(ns.begin(), ns.end()));
    auto [rows, err] = run_sweep(ns.size(), opt_.jobs, opt_.timing, [&](size_t i, bn_result** r) {
      return bn_bounds(w.w, ns[i], &o, 1, r);
    });
    return finish("bounds", bn_weight_id(w.w),
                  columns({"n", "class", "E_n", "log_E_n", "cheb_bound_log",
                           "mergelyan_bound_log", "best_bound_log"}),
                  rows, err, nullptr);
  }

  int classify() {
    WeightPtr w = weight();
    ResultPtr r;
    std::vector<Row> rows;
    std::optional<Failure> err;
    if (const bn_status s = bn_classify(w.w, &r.r); s != BN_OK) {
      err = Failure{s, bn_last_error()};
    } else {
      Row row{{"weight", bn_weight_id(w.w)}};
      for (auto& kv : to_row(r.r)) row.push_back(kv);
      rows.push_back(std::move(row));
    }
    return finish("classify", bn_weight_id(w.w),
                  columns({"weight", "kind", "witness_A", "witness_eps"}), rows, err, nullptr);
  }

  int cache_info() {
    CachePtr c = open_cache();
    size_t files = 0;
    uint64_t bytes = 0;
    if (bn_cache_info(c.c, &files, &bytes) != BN_OK) return report(BN_ERR_CACHE, bn_last_error());
    std::cout << "dir," << csv_cell(bn_cache_dir(c.c)) << "\nfiles," << files << "\nbytes,"
              << bytes << "\n";
    return 0;
  }

  int cache_clear() {
    CachePtr c = open_cache();
    size_t removed = 0;
    if (bn_cache_clear(c.c, &removed) != BN_OK) return report(BN_ERR_CACHE, bn_last_error());
    std::cout << "removed," << removed << "\n";
    return 0;
  }

 private:
  std::vector<std::string> columns(std::vector<std::string> cols) const {
    if (opt_.timing) cols.emplace_back("wall_time_ms");
    return cols;
  }

  WeightPtr weight() const {
    if (opt_.weight.empty()) throw ConfigError("--weight is required");
    WeightPtr w;
    if (const bn_status s = bn_weight_parse(opt_.weight.c_str(), &w.w); s != BN_OK) {
      throw ConfigError(std::string("invalid weight '") + opt_.weight + "': " + bn_last_error());
    }
    return w;
  }

  CachePtr open_cache() const {
    std::string dir = opt_.cache_dir.empty() ? bn_default_cache_dir() : opt_.cache_dir;
    CachePtr c;
    if (bn_cache_open(dir.c_str(), &c.c) != BN_OK) {
      throw ConfigError(std::string("cannot open cache: ") + bn_last_error());
    }
    return c;
  }

  bn_options options() const {
    bn_options o;
    bn_options_init(&o);
    o.precision_bits = opt_.precision_bits;
    o.tol = parse_tol(opt_.tol);
    if (opt_.jobs < 1) throw ConfigError("--jobs must be positive");
    return o;
  }

  static int report(bn_status s, const std::string& msg) {
    std::cerr << "error (" << bn_status_name(s) << "): " << msg << "\n";
    if (s == BN_ERR_CLASS) {
      std::cerr << "the requested construction does not apply to this growth class; "
                   "run `classify` to see it\n";
    }
    return exit_code(s);
  }

  int finish(const std::string& command, const std::string& weight_id,
             const std::vector<std::string>& cols, const std::vector<Row>& rows,
             const std::optional<Failure>& err, const Row* summary) const {
    if (opt_.out == "json") {
      write_json(std::cout, command, weight_id, opt_, cols, rows, summary);
    } else {
      write_csv(std::cout, cols, rows);
      if (summary) {
        for (const auto& [k, v] : *summary) std::cerr << "# " << k << " = " << v << "\n";
      }
    }
    if (err) return report(err->status, err->message);
    return 0;
  }

  Options opt_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted polynomial approximation: extremal errors, rates and bounds",
               "bernstein"};
  app.footer(kColumnHelp);
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file mirroring the flags");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options opt;
  if (const char* env = std::getenv("BERNSTEIN_CACHE_DIR"); env && *env) opt.cache_dir = env;

  app.add_option("--weight", opt.weight, "power:<nu>, powerlog:<nu>[+<phi0>], rationallog, "
                                         "exppower:<nu> or table:<path>");
  app.add_option("--p", opt.p, "Norm exponent: 2, inf or a decimal >= 1")->capture_default_str();
  app.add_option("--n", opt.n, "Degree or range lo..hi[:step]");
  app.add_flag("--dyadic", opt.dyadic, "Keep only powers of two in the range");
  app.add_option("--precision-bits", opt.precision_bits, "Working precision; 0 selects it from n")
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "Relative solver tolerance")->capture_default_str();
  app.add_option("--out", opt.out, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--plot", opt.plot, "SVG plot path (sandwich)");
  app.add_option("--cache-dir", opt.cache_dir, "Recurrence cache directory "
                                               "(default: BERNSTEIN_CACHE_DIR)");
  app.add_option("--jobs", opt.jobs, "Concurrent sweep entries")->capture_default_str();
  app.add_flag("--timing", opt.timing, "Append wall_time_ms to each row");

  auto* rate = app.add_subcommand("rate", "Rate integral R(n)")->fallthrough();
  auto* en = app.add_subcommand("en", "Extremal error E_n(p, W)")->fallthrough();
  auto* sandwich =
      app.add_subcommand("sandwich", "-log E_n against R(n) with ratio statistics")->fallthrough();
  auto* bounds =
      app.add_subcommand("bounds", "Constructive upper bounds next to E_n(inf)")->fallthrough();
  auto* classify = app.add_subcommand("classify", "Growth class with witnesses")->fallthrough();
  auto* cache = app.add_subcommand("cache", "Recurrence cache maintenance")->fallthrough();
  cache->require_subcommand(1);
  auto* cache_info = cache->add_subcommand("info", "Directory, file count and size")->fallthrough();
  auto* cache_clear = cache->add_subcommand("clear", "Remove cached recurrences")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitConfig;
  }

  Runner runner(opt);
  try {
    if (*rate) return runner.rate();
    if (*en) return runner.en();
    if (*sandwich) return runner.sandwich();
    if (*bounds) return runner.bounds();
    if (*classify) return runner.classify();
    if (*cache_info) return runner.cache_info();
    if (*cache_clear) return runner.cache_clear();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
