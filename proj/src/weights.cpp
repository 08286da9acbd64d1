#include "bernstein/weights.hpp"

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace bernstein {

const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::RationalLog: return "rationallog";
    case Family::PowerLog: return "powerlog";
    case Family::Power: return "power";
    case Family::ExpPower: return "exppower";
    case Family::Tabulated: return "table";
  }
  return "unknown";
}

const char* growth_kind_name(GrowthKind k) noexcept {
  switch (k) {
    case GrowthKind::Unknown: return "Unknown";
    case GrowthKind::Normal: return "Normal";
    case GrowthKind::Rapid: return "Rapid";
    case GrowthKind::Both: return "Both";
  }
  return "Unknown";
}

struct Weight::Impl {
  Family family;
  std::string id;
  std::string nu_text;
  std::string phi0_text;
  long double nu = 0;
  long double phi0 = 0;

  // Tabulated samples with PCHIP knot slopes.
  std::vector<long double> xs, ys, slopes;
  long double tail_exponent = 1;

  // Parameters rounded at each working precision.
  mutable std::mutex mutex;
  mutable std::map<unsigned, std::pair<Real, Real>> constants;

  std::pair<Real, Real> params() const {
    const unsigned bits = working_precision_bits();
    std::lock_guard<std::mutex> lock(mutex);
    auto it = constants.find(bits);
    if (it == constants.end()) {
      Real nu_r = nu_text.empty() ? Real(0) : parse_real(nu_text);
      Real phi0_r = phi0_text.empty() ? Real(0) : parse_real(phi0_text);
      it = constants.emplace(bits, std::make_pair(nu_r, phi0_r)).first;
    }
    return it->second;
  }

  Real table_phi(const Real& x) const {
    const size_t last = xs.size() - 1;
    if (x >= xs[last]) {
      if (x == xs[last]) return Real(ys[last]);
      return Real(ys[last]) * pow(x / Real(xs[last]), Real(tail_exponent));
    }
    auto xl = static_cast<long double>(x);
    size_t i = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), xl) - xs.begin());
    i = std::clamp<size_t>(i, 1, last) - 1;
    // The long double search can be off by one next to a knot.
    if (i + 1 < last && x >= xs[i + 1]) ++i;
    if (i > 0 && x < xs[i]) --i;
    Real x0 = xs[i];
    Real h = Real(xs[i + 1]) - x0;
    Real t = (x - x0) / h;
    Real t2 = t * t;
    Real t3 = t2 * t;
    Real h00 = 2 * t3 - 3 * t2 + 1;
    Real h10 = t3 - 2 * t2 + t;
    Real h01 = -2 * t3 + 3 * t2;
    Real h11 = t3 - t2;
    return h00 * ys[i] + h10 * h * slopes[i] + h01 * ys[i + 1] + h11 * h * slopes[i + 1];
  }

  long double table_phi(long double x) const {
    const size_t last = xs.size() - 1;
    if (x >= xs[last]) return ys[last] * std::pow(x / xs[last], tail_exponent);
    size_t i = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    i = std::clamp<size_t>(i, 1, last) - 1;
    long double h = xs[i + 1] - xs[i];
    long double t = (x - xs[i]) / h;
    long double t2 = t * t;
    long double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ys[i] + (t3 - 2 * t2 + t) * h * slopes[i] +
           (-2 * t3 + 3 * t2) * ys[i + 1] + (t3 - t2) * h * slopes[i + 1];
  }
};

namespace {

long double checked_param(std::string_view text, const char* what) {
  std::string s(text);
  size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Config, std::string(what) + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    fail(ErrorCode::Config, std::string(what) + ": not a number: '" + s + "'");
  }
  return v;
}

std::string trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Weight Weight::rational_log() {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::RationalLog;
  impl->id = "rationallog";
  return Weight(impl);
}

Weight Weight::power_log(std::string_view nu, std::string_view phi0) {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::PowerLog;
  impl->nu_text = trimmed(nu);
  impl->phi0_text = trimmed(phi0);
  impl->nu = checked_param(impl->nu_text, "powerlog exponent");
  impl->phi0 = checked_param(impl->phi0_text, "powerlog offset");
  if (!(impl->nu > -1)) fail(ErrorCode::Config, "powerlog exponent must exceed -1");
  if (impl->phi0 < 0) fail(ErrorCode::Config, "powerlog offset must be non-negative");
  impl->id = "powerlog:" + impl->nu_text + "+" + impl->phi0_text;
  return Weight(impl);
}

Weight Weight::power(std::string_view nu) {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::Power;
  impl->nu_text = trimmed(nu);
  impl->nu = checked_param(impl->nu_text, "power exponent");
  if (!(impl->nu > 1)) fail(ErrorCode::Config, "power exponent must exceed 1");
  impl->id = "power:" + impl->nu_text;
  return Weight(impl);
}

Weight Weight::exp_power(std::string_view nu) {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::ExpPower;
  impl->nu_text = trimmed(nu);
  impl->nu = checked_param(impl->nu_text, "exppower exponent");
  if (!(impl->nu > 0)) fail(ErrorCode::Config, "exppower exponent must be positive");
  impl->id = "exppower:" + impl->nu_text;
  return Weight(impl);
}

Weight Weight::tabulated(std::vector<long double> xs, std::vector<long double> phis) {
  if (xs.size() != phis.size() || xs.size() < 4) {
    fail(ErrorCode::Config, "table: need at least 4 (x, phi) samples");
  }
  if (xs[0] != 0) fail(ErrorCode::Config, "table: first sample must be at x = 0");
  if (phis[0] < 0) fail(ErrorCode::Config, "table: phi(0) must be non-negative");
  for (size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1]) || !(phis[k] > phis[k - 1])) {
      fail(ErrorCode::Config, "table: x and phi must both be strictly increasing");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->family = Family::Tabulated;
  std::ostringstream key;
  key.precision(21);
  for (size_t k = 0; k < xs.size(); ++k) key << xs[k] << ' ' << phis[k] << '\n';
  std::ostringstream id;
  id << "table:" << std::hex << fnv1a(key.str());
  impl->id = id.str();

  std::vector<long double> px = xs;
  std::vector<long double> py = phis;
  boost::math::interpolators::pchip<std::vector<long double>> spline(std::move(px),
                                                                      std::move(py));
  impl->slopes.resize(xs.size());
  for (size_t k = 0; k < xs.size(); ++k) impl->slopes[k] = spline.prime(xs[k]);
  const size_t n = xs.size() - 1;
  long double slope = std::log(phis[n] / phis[n - 1]) / std::log(xs[n] / xs[n - 1]);
  impl->tail_exponent = std::max(1.0L, slope);
  impl->xs = std::move(xs);
  impl->ys = std::move(phis);
  return Weight(impl);
}

Weight Weight::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open weight table '" + path + "'");
  std::vector<long double> xs, ys;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      fail(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    xs.push_back(checked_param(a, "table x"));
    ys.push_back(checked_param(b, "table phi"));
  }
  return tabulated(std::move(xs), std::move(ys));
}

Weight Weight::parse(std::string_view spec) {
  std::string s = trimmed(spec);
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  std::string arg = colon == std::string::npos ? std::string() : s.substr(colon + 1);
  std::transform(head.begin(), head.end(), head.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto need_arg = [&] {
    if (arg.empty()) fail(ErrorCode::Config, "weight '" + s + "' needs a parameter");
  };
  if (head == "rationallog") {
    if (!arg.empty()) fail(ErrorCode::Config, "rationallog takes no parameter");
    return rational_log();
  }
  if (head == "powerlog") {
    need_arg();
    // "nu" or "nu+phi0", the latter being the form ids are printed in.
    if (auto plus = arg.find('+', 1); plus != std::string::npos) {
      return power_log(arg.substr(0, plus), arg.substr(plus + 1));
    }
    return power_log(arg);
  }
  if (head == "power") {
    need_arg();
    return power(arg);
  }
  if (head == "exppower") {
    need_arg();
    return exp_power(arg);
  }
  if (head == "table") {
    need_arg();
    return load_table(arg);
  }
  fail(ErrorCode::Config, "unknown weight family '" + head +
                              "' (expected power, powerlog, rationallog, exppower, table)");
}

Family Weight::family() const { return impl_->family; }
const std::string& Weight::id() const { return impl_->id; }
const std::string& Weight::nu_text() const { return impl_->nu_text; }
long double Weight::nu() const { return impl_->nu; }

Real Weight::phi(const Real& x) const {
  if (x < 0) fail(ErrorCode::Domain, "phi: x must be non-negative");
  switch (impl_->family) {
    case Family::RationalLog: return x / log(2 + x);
    case Family::PowerLog: {
      auto [nu, phi0] = impl_->params();
      return x * pow(log(2 + x), nu) + phi0;
    }
    case Family::Power: {
      if (impl_->nu == 2) return x * x;
      if (impl_->nu == 1.5L) return x * sqrt(x);
      if (x == 0) return Real(0);
      return pow(x, impl_->params().first);
    }
    case Family::ExpPower: {
      if (impl_->nu == 1) return exp(x);
      return exp(pow(x, impl_->params().first));
    }
    case Family::Tabulated: return impl_->table_phi(x);
  }
  return Real(0);
}

long double Weight::phi(long double x) const {
  if (x < 0) fail(ErrorCode::Domain, "phi: x must be non-negative");
  switch (impl_->family) {
    case Family::RationalLog: return x / std::log(2 + x);
    case Family::PowerLog: return x * std::pow(std::log(2 + x), impl_->nu) + impl_->phi0;
    case Family::Power: return std::pow(x, impl_->nu);
    case Family::ExpPower: return std::exp(std::pow(x, impl_->nu));
    case Family::Tabulated: return impl_->table_phi(x);
  }
  return 0;
}

Real Weight::a_n(const Real& n) const {
  const Real base = phi0();
  if (n < base) {
    fail(ErrorCode::Domain, "A_n needs n >= phi(0) = " + to_decimal(base, 12) + ", got " +
                                to_decimal(n, 12));
  }
  switch (impl_->family) {
    case Family::Power: return pow(n, 1 / impl_->params().first);
    case Family::ExpPower: return pow(log(n), 1 / impl_->params().first);
    default: break;
  }
  RealFunction f = [this](const Real& x) { return phi(x); };
  Real hi = 1;
  for (int k = 0; phi(hi) < n; ++k) {
    if (k > 4096) fail(ErrorCode::NonConvergence, "A_n: phi does not reach n");
    hi *= 2;
  }
  Real tol = hi * epsilon_power(1.0) * 256;
  return bisect_monotone(f, n, Real(0), hi, tol);
}

const std::vector<long double>& Weight::knots() const { return impl_->xs; }

std::vector<Real> weight_breaks(const Weight& w, const Real& a, const Real& b) {
  if (!(a <= b)) fail(ErrorCode::Domain, "weight_breaks: a > b");
  std::vector<Real> out{a};
  if (a < 1 && b > 1) out.emplace_back(1);
  for (Real x = 2; x < b; x *= 2) {
    if (x > a) out.push_back(x);
  }
  for (long double k : w.knots()) {
    if (Real(k) > a && Real(k) < b) out.emplace_back(k);
  }
  out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Real log_w_alpha(const Weight& w, const Real& alpha, const Real& x) {
  Real ax = abs(x);
  Real out = w.phi(ax);
  if (alpha != 0) out += alpha / 2 * log1p(x * x);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Real> log_grid(const Real& lo, const Real& hi, int points) {
  if (!(lo > 0) || !(hi > lo) || points < 2) {
    fail(ErrorCode::Domain, "log_grid: need 0 < lo < hi and at least 2 points");
  }
  std::vector<Real> out(points);
  Real llo = log(lo);
  Real step = (log(hi) - llo) / (points - 1);
  for (int k = 0; k < points; ++k) out[k] = exp(llo + step * k);
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

// Smallest index from which every pairwise test passes (size() if none).
template <typename Test>
size_t pass_from(size_t size, Test&& ok_at) {
  size_t start = 0;
  for (size_t i = 0; i < size; ++i) {
    if (!ok_at(i)) start = i + 1;
  }
  return start;
}

}  // namespace

GrowthClass classify_growth(const Weight& w, const std::vector<Real>& grid) {
  const size_t n = grid.size();
  if (n < 64) fail(ErrorCode::Domain, "classify_growth: grid needs at least 64 points");
  if (grid.front() > 1 || grid.back() < Real(1e6)) {
    fail(ErrorCode::Domain, "classify_growth: grid must span [1, 1e6]");
  }
  const Real slack = Real(1e-12);
  std::vector<Real> phi(n), t(n);
  for (size_t i = 0; i < n; ++i) {
    phi[i] = w.phi(grid[i]);
    t[i] = log(grid[i]);
  }

  // Normal: phi/x^2 non-increasing and phi(e^t) convex.
  std::vector<Real> g(n);
  for (size_t i = 0; i < n; ++i) g[i] = phi[i] / (grid[i] * grid[i]);
  size_t normal_start = pass_from(n - 1, [&](size_t i) {
    return g[i + 1] <= g[i] + slack * abs(g[i]);
  });
  // A failure at pair (i, i+1) is reported at i, so the start index is i + 1.
  size_t convex_start = 0;
  for (size_t i = 1; i + 1 < n; ++i) {
    Real d = (t[i] - t[i - 1]) * phi[i + 1] + (t[i + 1] - t[i]) * phi[i - 1] -
             (t[i + 1] - t[i - 1]) * phi[i];
    if (d < -slack * abs(phi[i]) * (t[i + 1] - t[i - 1])) convex_start = i;
  }
  normal_start = std::max(normal_start, convex_start);

  // Rapid: phi/x^{1+eps} non-decreasing for the largest eps that works.
  size_t rapid_start = n;
  Real rapid_eps = 0;
  for (Real eps : {Real(1), Real(0.5), Real(0.25), Real(0.125)}) {
    std::vector<Real> h(n);
    for (size_t i = 0; i < n; ++i) h[i] = phi[i] / pow(grid[i], 1 + eps);
    size_t start = pass_from(n - 1, [&](size_t i) { return h[i + 1] >= h[i] - slack * abs(h[i]); });
    if (start < n / 2) {
      rapid_start = start;
      rapid_eps = eps;
      break;
    }
  }

  GrowthClass out;
  const bool normal = normal_start < n / 2;
  const bool rapid = rapid_start < n / 2;
  if (normal && rapid) {
    out.kind = GrowthKind::Both;
    out.witness_A = grid[std::max(normal_start, rapid_start)];
  } else if (normal) {
    out.kind = GrowthKind::Normal;
    out.witness_A = grid[normal_start];
  } else if (rapid) {
    out.kind = GrowthKind::Rapid;
    out.witness_A = grid[rapid_start];
  }
  if (rapid) out.witness_eps = rapid_eps;
  return out;
}

GrowthClass classify_growth(const Weight& w) {
  return classify_growth(w, log_grid(Real(1), Real(1e6), 256));
}

Real hall_partial(const Weight& w, const Real& T) {
  if (T < 0) fail(ErrorCode::Domain, "hall_partial: T must be non-negative");
  if (T == 0) return Real(0);
  auto spec = QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels);
  return integrate([&w](const Real& t) { return w.phi(t) / (1 + t * t); },
                   weight_breaks(w, Real(0), T), spec);
}

}  // namespace bernstein
