#include "entropy_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "entropy_lab/asymptotics.hpp"
#include "entropy_lab/covering.hpp"
#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"
#include "entropy_lab/sequence_model.hpp"
#include "entropy_lab/spectra.hpp"
#include "entropy_lab/validation.hpp"

namespace entropy_lab {
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- bundle I/O

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct PlotData {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

std::string csv_cell(const Json& cell) {
  if (cell.is_number_float()) return format_g17(cell.get<double>());
  if (cell.is_number()) return cell.dump();
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_null()) return "";
  std::string s = cell.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

class BundleWriter {
 public:
  BundleWriter(fs::path root, TableFormat format)
      : root_(std::move(root)), format_(format) {
    std::error_code ec;
    fs::create_directories(root_ / "tables", ec);
    if (!ec) fs::create_directories(root_ / "plotdata", ec);
    if (ec)
      fail(ErrorKind::kIo, "cannot create output directory " + root_.string() +
                               ": " + ec.message());
  }

  void table(const Table& t) {
    std::string text;
    if (format_ == TableFormat::kCsv) {
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        text += (i ? "," : "") + t.columns[i];
      text += '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
          text += (i ? "," : "") + csv_cell(row[i]);
        text += '\n';
      }
    } else {
      Json rows = Json::array();
      for (const auto& row : t.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
        rows.push_back(std::move(obj));
      }
      text = rows.dump(2) + "\n";
    }
    emit_table("tables/" + t.name + "." + to_string(format_), text);
  }

  // Raw text already in its final encoding.
  void emit_table(const std::string& relative, std::string_view text) {
    write_file(root_ / relative, text);
    tables_.push_back({relative, sha256_hex(text)});
  }

  // A file some other writer produced inside the bundle.
  void adopt_table(const std::string& relative) {
    tables_.push_back({relative, sha256_hex(read_file(root_ / relative))});
  }

  void plot(const PlotData& p) {
    std::string text = p.x_label + "," + p.y_label + "\n";
    for (const auto& [x, y] : p.points)
      text += format_g17(x) + "," + format_g17(y) + "\n";
    const std::string relative = "plotdata/" + p.name + ".csv";
    write_file(root_ / relative, text);
    plots_.push_back({relative, sha256_hex(text)});
  }

  const fs::path& root() const { return root_; }
  TableFormat format() const { return format_; }

  ReportBundle finish(Json summary) {
    Json files = Json::array();
    for (const auto& f : tables_)
      files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"kind", "table"}});
    for (const auto& f : plots_)
      files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"kind", "plotdata"}});
    summary["files"] = std::move(files);
    write_file(root_ / "summary.json", summary.dump(2) + "\n");
    return ReportBundle{std::move(summary), tables_, plots_};
  }

 private:
  fs::path root_;
  TableFormat format_;
  std::vector<BundleFile> tables_;
  std::vector<BundleFile> plots_;
};

// ------------------------------------------------------------------ schemas

ParamSpec req(std::string name, ParamType type, std::string help) {
  return ParamSpec{std::move(name), type, true, nullptr, std::move(help)};
}
ParamSpec opt(std::string name, ParamType type, Json def, std::string help) {
  return ParamSpec{std::move(name), type, false, std::move(def), std::move(help)};
}

const std::vector<ParamSpec>& schema_for(Command c) {
  using T = ParamType;
  static const std::vector<ParamSpec> ellipsoid{
      req("c1", T::kNumber, "leading eigenvalue coefficient"),
      req("alpha1", T::kNumber, "leading decay exponent"),
      opt("c2", T::kNumber, 0.0, "second-order coefficient"),
      opt("alpha2", T::kNumber, nullptr, "second-order exponent (default alpha1)"),
      opt("eps", T::kNumber, nullptr, "evaluate the entropy at this radius"),
      opt("m", T::kInteger, nullptr, "evaluate the entropy number at this index"),
  };
  static const std::vector<ParamSpec> counting{
      req("kappa1", T::kNumber, "leading counting coefficient"),
      req("beta1", T::kNumber, "leading counting exponent"),
      opt("kappa2", T::kNumber, 0.0, "second-order counting coefficient"),
      opt("beta2", T::kNumber, nullptr, "second-order exponent (default beta1)"),
      opt("eps", T::kNumber, nullptr, "evaluate the entropy at this radius"),
      opt("m", T::kInteger, nullptr, "evaluate the entropy number at this index"),
  };
  static const std::vector<ParamSpec> carl{
      opt("spectrum", T::kString, "harmonic", "harmonic, geometric or a CSV file"),
      req("m", T::kInteger, "entropy number index"),
      opt("n_max", T::kInteger, nullptr,
          "search limit for N (default 100000, or the file length)"),
  };
  static const std::vector<ParamSpec> invert{
      req("kappa1", T::kNumber, "leading coefficient"),
      req("beta1", T::kNumber, "leading exponent"),
      opt("kappa2", T::kNumber, 0.0, "second coefficient"),
      opt("beta2", T::kNumber, nullptr, "second exponent, below beta1"),
      opt("n", T::kNumber, 1e6, "value at which to invert"),
  };
  static const std::vector<ParamSpec> cover{
      opt("axes", T::kNumberList, nullptr, "comma-separated semi-axes"),
      opt("spectrum", T::kString, nullptr, "harmonic, geometric or a CSV file"),
      opt("n_axes", T::kInteger, 64, "number of builtin spectrum values used"),
      req("eps", T::kNumber, "covering radius"),
      opt("tau", T::kNumber, 0.5, "truncation split in (0, 1)"),
      opt("rogers_c", T::kNumber, kDefaultRogersC, "ball-covering constant"),
      opt("greedy_step", T::kNumber, nullptr,
          "grid step of the greedy oracle (default eps/8)"),
  };
  static const std::vector<ParamSpec> lps{
      opt("sigma", T::kNumber, 1.0, "half-bandwidth"),
      opt("r", T::kNumber, 20.0, "half-length of the time interval"),
      opt("nodes", T::kInteger, 600, "quadrature nodes"),
      opt("quadrature", T::kString, "gauss-legendre", "gauss-legendre or trapezoid"),
      opt("gamma", T::kNumberList, Json::array({0.2, 0.5, 0.8}),
          "counting thresholds in (0, 1)"),
      opt("eps", T::kNumber, 0.5, "radius for the entropy sandwich"),
      opt("tau", T::kNumber, 0.5, "truncation split for the entropy sandwich"),
  };
  static const std::vector<ParamSpec> sobolev{
      req("dim", T::kInteger, "space dimension"),
      req("order_k", T::kInteger, "smoothness order k"),
      opt("interval_length", T::kNumber, nullptr, "side of the cube (0, L)^d"),
      opt("sides", T::kNumberList, nullptr, "box side lengths"),
      opt("weyl_order", T::kString, "one-term", "one-term or two-term"),
      opt("gamma", T::kNumber, nullptr, "check the lattice count of the box"),
      opt("eps", T::kNumber, nullptr, "evaluate the entropy at this radius"),
  };
  static const std::vector<ParamSpec> validate{
      opt("suite", T::kString, "fast", "fast or full"),
  };
  switch (c) {
    case Command::kEllipsoid: return ellipsoid;
    case Command::kCounting: return counting;
    case Command::kCarl: return carl;
    case Command::kInvert: return invert;
    case Command::kCover: return cover;
    case Command::kLps: return lps;
    case Command::kSobolev: return sobolev;
    case Command::kValidate: return validate;
  }
  throw std::logic_error("unhandled command");
}

[[noreturn]] void bad_param(Command c, const std::string& key,
                            const std::string& why) {
  fail(ErrorKind::kSchema, to_string(c) + ": parameter '" + key + "' " + why);
}

double parse_number(Command c, const std::string& key, const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) bad_param(c, key, "must be a number");
  const std::string s = v.get<std::string>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x))
    bad_param(c, key, "must be a finite number, got '" + s + "'");
  return x;
}

std::int64_t parse_integer(Command c, const std::string& key, const Json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  const double x = parse_number(c, key, v);
  if (x != std::floor(x) || std::abs(x) > 9e15)
    bad_param(c, key, "must be an integer, got " + format_g17(x));
  return static_cast<std::int64_t>(x);
}

Json parse_list(Command c, const std::string& key, const Json& v) {
  Json out = Json::array();
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(parse_number(c, key, e));
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(c, key, item));
  } else {
    out.push_back(parse_number(c, key, v));
  }
  if (out.empty()) bad_param(c, key, "must list at least one number");
  return out;
}

// ------------------------------------------------------------------ helpers

double num(const Json& p, const char* key) { return p.at(key).get<double>(); }
std::int64_t integer(const Json& p, const char* key) {
  return p.at(key).get<std::int64_t>();
}
bool has(const Json& p, const char* key) { return !p.at(key).is_null(); }

std::vector<double> number_list(const Json& p, const char* key) {
  std::vector<double> out;
  for (const auto& v : p.at(key)) out.push_back(v.get<double>());
  return out;
}

std::size_t positive_size(Command c, const Json& p, const char* key) {
  const std::int64_t v = integer(p, key);
  if (v < 1) bad_param(c, key, "must be >= 1");
  return static_cast<std::size_t>(v);
}

std::string regime_name(Regime r) {
  return r == Regime::kPowerLaw ? "power-law" : "two-term";
}

template <class V>
Json expansion_json(const TwoTermExpansion<V>& e) {
  return Json{{"A", tagged(e.A, Provenance::kFormula)},
              {"a", tagged(e.a, Provenance::kFormula)},
              {"B", tagged(e.B, Provenance::kFormula)},
              {"b", tagged(e.b, Provenance::kFormula)}};
}

template <class V>
void expansion_rows(Table& t, const std::string& label,
                    const TwoTermExpansion<V>& e) {
  t.rows.push_back({label, "A", e.A});
  t.rows.push_back({label, "a", e.a});
  t.rows.push_back({label, "B", e.B});
  t.rows.push_back({label, "b", e.b});
}

PlotData entropy_curve(const std::string& name, const EntropyExpansion& e) {
  PlotData p{name, "eps", "entropy_bits", {}};
  for (int k = 8; k <= 48; ++k) {
    const double eps = std::pow(10.0, -static_cast<double>(k) / 8.0);
    p.points.emplace_back(eps, e(eps));
  }
  return p;
}

PlotData entropy_number_curve(const std::string& name,
                              const EntropyNumberExpansion& e) {
  PlotData p{name, "m", "entropy_number", {}};
  for (int j = 0; j <= 20; ++j) {
    const double m = std::ldexp(1.0, j);
    p.points.emplace_back(m, e(m));
  }
  return p;
}

double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

SpectrumSample load_spectrum(const std::string& name, std::size_t count) {
  if (name == "harmonic" || name == "geometric") {
    const bool harmonic = name == "harmonic";
    require(harmonic || count <= 1074, ErrorKind::kPrecondition,
            "geometric spectrum underflows beyond n = 1074, requested " +
                std::to_string(count) + " values");
    std::vector<double> values(count);
    for (std::size_t n = 1; n <= count; ++n)
      values[n - 1] = harmonic ? 1.0 / static_cast<double>(n)
                               : std::ldexp(1.0, -static_cast<int>(n));
    return SpectrumSample(std::move(values), SpectrumSource::kAnalytic,
                          {{"builtin", name}});
  }
  require(fs::exists(name), ErrorKind::kIo,
          "spectrum '" + name + "' is neither a builtin (harmonic, geometric) "
          "nor an existing file");
  return read_spectrum_csv(name);
}

// ----------------------------------------------------------------- commands

struct Context {
  Command command;
  const Json& p;
  const RunConfig& cfg;
  Json& results;
  BundleWriter& out;
};

void run_ellipsoid(Context& cx) {
  const Json& p = cx.p;
  const double alpha1 = num(p, "alpha1");
  const EigenvalueModel model(num(p, "c1"), alpha1, num(p, "c2"),
                              has(p, "alpha2") ? num(p, "alpha2") : alpha1);
  const auto h = entropy_from_eigenvalue_model(model);
  const auto e = entropy_numbers_from_eigenvalue_model(model);

  cx.results["regime"] = regime_name(model.regime());
  cx.results["entropy_expansion"] = expansion_json(h);
  cx.results["entropy_number_expansion"] = expansion_json(e);
  if (has(p, "eps"))
    cx.results["entropy_at_eps"] =
        tagged(eval_expansion(h, num(p, "eps")), Provenance::kFormula);
  if (has(p, "m")) {
    const auto m = static_cast<double>(positive_size(cx.command, p, "m"));
    cx.results["entropy_number_at_m"] =
        tagged(eval_expansion(e, m), Provenance::kFormula);
  }

  Table t{"coefficients", {"expansion", "coefficient", "value"}, {}};
  expansion_rows(t, "entropy", h);
  expansion_rows(t, "entropy_number", e);
  cx.out.table(t);
  cx.out.plot(entropy_curve("entropy_vs_eps", h));
  cx.out.plot(entropy_number_curve("entropy_number_vs_m", e));
}

void run_counting(Context& cx) {
  const Json& p = cx.p;
  const double beta1 = num(p, "beta1");
  const CountingModel cm(num(p, "kappa1"), beta1, num(p, "kappa2"),
                         has(p, "beta2") ? num(p, "beta2") : beta1);
  const auto h = entropy_from_counting_model(cm);
  const auto e = entropy_numbers_from_counting_model(cm);
  const EigenvalueModel em = counting_to_eigenvalue_model(cm);
  const auto h_via = entropy_from_eigenvalue_model(em);
  const auto e_via = entropy_numbers_from_eigenvalue_model(em);

  double gap = 0.0;
  for (auto [x, y] : {std::pair{h.A, h_via.A}, {h.a, h_via.a}, {h.B, h_via.B},
                      {h.b, h_via.b}, {e.A, e_via.A}, {e.a, e_via.a},
                      {e.B, e_via.B}, {e.b, e_via.b}})
    gap = std::max(gap, relative_gap(x, y));

  cx.results["regime"] = regime_name(cm.regime());
  cx.results["beta_star"] = tagged(cm.beta_star(), Provenance::kFormula);
  cx.results["eigenvalue_model"] = {
      {"c1", tagged(em.c1(), Provenance::kFormula)},
      {"alpha1", tagged(em.alpha1(), Provenance::kFormula)},
      {"c2", tagged(em.c2(), Provenance::kFormula)},
      {"alpha2", tagged(em.alpha2(), Provenance::kFormula)}};
  cx.results["entropy_expansion"] = expansion_json(h);
  cx.results["entropy_number_expansion"] = expansion_json(e);
  cx.results["route_max_relative_gap"] = tagged(gap, Provenance::kFormula);
  if (has(p, "eps"))
    cx.results["entropy_at_eps"] =
        tagged(eval_expansion(h, num(p, "eps")), Provenance::kFormula);
  if (has(p, "m")) {
    const auto m = static_cast<double>(positive_size(cx.command, p, "m"));
    cx.results["entropy_number_at_m"] =
        tagged(eval_expansion(e, m), Provenance::kFormula);
  }

  Table t{"coefficients", {"expansion", "coefficient", "value"}, {}};
  expansion_rows(t, "entropy", h);
  expansion_rows(t, "entropy_number", e);
  expansion_rows(t, "entropy_via_eigenvalues", h_via);
  expansion_rows(t, "entropy_number_via_eigenvalues", e_via);
  cx.out.table(t);
  cx.out.plot(entropy_curve("entropy_vs_eps", h));
  cx.out.plot(entropy_number_curve("entropy_number_vs_m", e));
}

void run_carl(Context& cx) {
  const Json& p = cx.p;
  const std::string name = p.at("spectrum").get<std::string>();
  const bool builtin = name == "harmonic" || name == "geometric";
  const std::size_t m = positive_size(cx.command, p, "m");

  std::size_t n_max = 100000;
  if (has(p, "n_max")) n_max = positive_size(cx.command, p, "n_max");
  const SpectrumSample sample =
      builtin ? load_spectrum(name, n_max) : load_spectrum(name, 0);
  if (!builtin && !has(p, "n_max")) n_max = sample.size();

  const CarlBoundResult r = carl_supremum(sample, m, n_max);
  cx.results["carl_supremum"] = tagged(r.value, Provenance::kSpectrum);
  cx.results["n_star"] =
      tagged(static_cast<std::int64_t>(r.n_star), Provenance::kSpectrum);
  cx.results["evaluated_n"] =
      tagged(static_cast<std::int64_t>(r.evaluated_n), Provenance::kSpectrum);
  cx.results["boundary_hit"] = r.boundary_hit;
  if (name == "harmonic") {
    const auto model = EigenvalueModel::power_law(1.0, 1.0);
    const double asymptotic = carl_asymptotic(model, m);
    const auto e = entropy_numbers_from_eigenvalue_model(model);
    const double first = e.A * std::pow(static_cast<double>(m), -e.a);
    cx.results["carl_asymptotic"] = tagged(asymptotic, Provenance::kFormula);
    cx.results["leading_term"] = tagged(first, Provenance::kFormula);
    cx.results["leading_term_over_supremum"] =
        tagged(first / r.value, Provenance::kSpectrum);
  }

  PlotData curve{"carl_objective", "N", "objective", {}};
  const auto values = sample.values();
  const double m_ln2 = static_cast<double>(m) * std::numbers::ln2;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= r.evaluated_n; ++n) {
    log_sum += std::log(values[n - 1]);
    curve.points.emplace_back(static_cast<double>(n),
                              std::exp((log_sum - m_ln2) / static_cast<double>(n)));
  }
  cx.out.plot(curve);

  Table t{"carl", {"m", "n_max", "value", "n_star", "boundary_hit"}, {}};
  t.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n_max),
                    r.value, static_cast<std::int64_t>(r.n_star), r.boundary_hit});
  cx.out.table(t);
}

void run_invert(Context& cx) {
  const Json& p = cx.p;
  const double kappa1 = num(p, "kappa1"), beta1 = num(p, "beta1");
  const double kappa2 = num(p, "kappa2"), n = num(p, "n");
  require(n > 0.0, ErrorKind::kPrecondition, "invert: n must be positive");
  if (kappa2 != 0.0 && !has(p, "beta2"))
    bad_param(cx.command, "beta2", "is required when kappa2 is nonzero");

  const PowerTerm first = invert_first_order(kappa1, beta1);
  cx.results["first_order"] = {
      {"coefficient", tagged(first.coefficient, Provenance::kFormula)},
      {"exponent", tagged(first.exponent, Provenance::kFormula)},
      {"value", tagged(first(n), Provenance::kFormula)}};

  Table t{"inversion", {"n", "first_order", "second_order", "bisection"}, {}};
  PlotData curve{"second_order_relative_error", "n", "relative_error", {}};
  if (has(p, "beta2")) {
    const double beta2 = num(p, "beta2");
    const TwoTermInversion second = invert_second_order(kappa1, kappa2, beta1, beta2);
    const double exact = counting_root_bisection(kappa1, kappa2, beta1, beta2, n);
    const double remainder = std::abs(exact - second(n));
    cx.results["second_order"] = {
        {"second_coefficient", tagged(second.second.coefficient, Provenance::kFormula)},
        {"second_exponent", tagged(second.second.exponent, Provenance::kFormula)},
        {"value", tagged(second(n), Provenance::kFormula)}};
    cx.results["bisection_root"] = tagged(exact, Provenance::kOracle);
    cx.results["remainder_over_second_term"] =
        tagged(remainder / std::abs(second.second(n)), Provenance::kOracle);
    for (int k = 2; k <= 8; ++k) {
      const double x = std::pow(10.0, k);
      const double root = counting_root_bisection(kappa1, kappa2, beta1, beta2, x);
      t.rows.push_back({x, first(x), second(x), root});
      curve.points.emplace_back(x, std::abs(second(x) - root) / root);
    }
  } else {
    const double exact = first(n);  // kappa2 = 0: the first-order root is exact
    cx.results["bisection_root"] = tagged(exact, Provenance::kFormula);
    for (int k = 2; k <= 8; ++k) {
      const double x = std::pow(10.0, k);
      t.rows.push_back({x, first(x), nullptr, first(x)});
      curve.points.emplace_back(x, 0.0);
    }
  }
  cx.out.table(t);
  cx.out.plot(curve);
}

void run_cover(Context& cx) {
  const Json& p = cx.p;
  std::vector<double> axes;
  if (has(p, "axes")) {
    if (has(p, "spectrum"))
      bad_param(cx.command, "spectrum", "cannot be combined with --axes");
    axes = number_list(p, "axes");
  } else if (has(p, "spectrum")) {
    const std::string name = p.at("spectrum").get<std::string>();
    const SpectrumSample s = load_spectrum(name, positive_size(cx.command, p, "n_axes"));
    const std::size_t limit = (name == "harmonic" || name == "geometric")
                                  ? s.size()
                                  : std::min<std::size_t>(
                                        s.size(), positive_size(cx.command, p, "n_axes"));
    for (std::size_t i = 0; i < limit; ++i)
      if (s.values()[i] > 0.0) axes.push_back(s.values()[i]);
  } else {
    bad_param(cx.command, "axes", "or --spectrum must be given");
  }
  for (double a : axes)
    if (!(a > 0.0)) bad_param(cx.command, "axes", "must all be positive");
  std::sort(axes.begin(), axes.end(), std::greater<>());

  const double eps = num(p, "eps"), tau = num(p, "tau");
  const double rogers_c = num(p, "rogers_c");
  const CoveringBounds b = sandwich_entropy(axes, eps, tau, rogers_c);
  cx.results["dimension"] =
      tagged(static_cast<std::int64_t>(axes.size()), Provenance::kFormula);
  cx.results["axes_hash"] = axes_hash(axes);
  cx.results["lower_bits"] = tagged(b.lower_log2, Provenance::kFormula);
  cx.results["upper_bits"] = tagged(b.upper_log2, Provenance::kFormula);
  cx.results["lower_method"] = b.lower_method;
  cx.results["upper_method"] = b.upper_method;
  cx.results["lower_dims"] =
      tagged(static_cast<std::int64_t>(b.lower_dims), Provenance::kFormula);
  cx.results["upper_dims"] =
      tagged(static_cast<std::int64_t>(b.upper_dims), Provenance::kFormula);

  long long greedy = -1;
  if (axes.size() == 1) {
    const double step = has(p, "greedy_step") ? num(p, "greedy_step") : eps / 8.0;
    greedy = static_cast<long long>(
        greedy_cover_count(Ellipsoid(axes, Field::kComplex), eps, step));
    const double bits = std::log2(static_cast<double>(greedy));
    cx.results["greedy"] = {
        {"count", tagged(static_cast<std::int64_t>(greedy), Provenance::kOracle)},
        {"bits", tagged(bits, Provenance::kOracle)},
        {"grid_step", tagged(step, Provenance::kFormula)},
        {"within_bounds", b.lower_log2 <= bits && bits <= b.upper_log2}};
  }

  std::vector<OracleRow> rows;
  PlotData curve{"upper_bits_vs_tau", "tau", "upper_bits", {}};
  const std::string hash = axes_hash(axes);
  for (int i = 1; i <= 9; ++i) {
    const double t = 0.1 * static_cast<double>(i);
    const CoveringBounds bt = sandwich_entropy(axes, eps, t, rogers_c);
    rows.push_back({hash, eps, t, bt.lower_log2, bt.upper_log2, greedy});
    curve.points.emplace_back(t, bt.upper_log2);
  }
  if (cx.out.format() == TableFormat::kCsv) {
    cx.out.emit_table("tables/tau_sensitivity.csv", oracle_rows_csv(rows));
  } else {
    Table t{"tau_sensitivity",
            {"axes_hash", "epsilon", "tau", "lower_bits", "upper_bits", "greedy_count"},
            {}};
    for (const auto& r : rows)
      t.rows.push_back({r.axes_hash, r.epsilon, r.tau, r.lower_bits, r.upper_bits,
                        r.greedy_count < 0 ? Json(nullptr)
                                           : Json(static_cast<std::int64_t>(r.greedy_count))});
    cx.out.table(t);
  }
  cx.out.plot(curve);
}

void run_lps(Context& cx) {
  const Json& p = cx.p;
  LPSConfig cfg;
  cfg.sigma = num(p, "sigma");
  cfg.r = num(p, "r");
  cfg.nodes = positive_size(cx.command, p, "nodes");
  cfg.quadrature = quadrature_from_string(p.at("quadrature").get<std::string>());
  const SpectrumSample s = lps_eigenvalues(cfg, cx.cfg.threads);

  const auto& params = s.params();
  cx.results["eigenvalue_count"] =
      tagged(static_cast<std::int64_t>(s.size()), Provenance::kSpectrum);
  cx.results["raw_min"] = tagged(std::stod(params.at("raw_min")), Provenance::kSpectrum);
  cx.results["raw_max"] = tagged(std::stod(params.at("raw_max")), Provenance::kSpectrum);
  cx.results["jacobi_sweeps"] =
      tagged(static_cast<std::int64_t>(std::stoll(params.at("jacobi_sweeps"))),
             Provenance::kSpectrum);
  cx.results["shannon_number"] =
      tagged(2.0 * cfg.sigma * cfg.r / kPi, Provenance::kFormula);

  const double theory_rate = 2.0 * cfg.sigma / kPi;
  Table rates{"counting_rates", {"gamma", "count", "rate", "theory_rate"}, {}};
  Json counting = Json::array();
  for (double g : number_list(p, "gamma")) {
    const double rate = lps_counting_rate(s, cfg.r, g);
    const auto count = static_cast<std::int64_t>(empirical_counting(s, g));
    rates.rows.push_back({g, count, rate, theory_rate});
    counting.push_back({{"gamma", tagged(g, Provenance::kFormula)},
                        {"count", tagged(count, Provenance::kSpectrum)},
                        {"rate", tagged(rate, Provenance::kSpectrum)},
                        {"theory_rate", tagged(theory_rate, Provenance::kFormula)}});
  }
  cx.results["counting"] = std::move(counting);

  const double eps = num(p, "eps"), tau = num(p, "tau");
  std::vector<double> axes;
  for (double v : s.values())
    if (v > 0.0) axes.push_back(v);
  const CoveringBounds b = sandwich_entropy(axes, eps, tau);
  const double per = 2.0 * cfg.r;
  cx.results["entropy_rate"] = {
      {"lower", tagged(b.lower_log2 / per, Provenance::kSpectrum)},
      {"upper", tagged(b.upper_log2 / per, Provenance::kSpectrum)},
      {"theory", tagged(lps_entropy_rate(2.0 * cfg.sigma, 2.0, 1, eps) / 2.0,
                        Provenance::kFormula)}};

  write_spectrum_csv(s, cx.out.root() / "tables" / "spectrum.csv");
  cx.out.adopt_table("tables/spectrum.csv");
  cx.out.adopt_table("tables/spectrum.json");
  cx.out.table(rates);

  PlotData curve{"eigenvalues", "index", "lambda", {}};
  for (std::size_t n = 1; n <= s.size(); ++n)
    curve.points.emplace_back(static_cast<double>(n), s.lambda(n));
  cx.out.plot(curve);
}

void run_sobolev(Context& cx) {
  const Json& p = cx.p;
  const std::int64_t dim = integer(p, "dim");
  if (dim < 1) bad_param(cx.command, "dim", "must be >= 1");
  std::vector<double> sides;
  if (has(p, "sides")) {
    sides = number_list(p, "sides");
    if (static_cast<std::int64_t>(sides.size()) != dim)
      bad_param(cx.command, "sides", "must list exactly --dim lengths");
  } else if (has(p, "interval_length")) {
    sides.assign(static_cast<std::size_t>(dim), num(p, "interval_length"));
  } else {
    bad_param(cx.command, "interval_length", "or --sides must be given");
  }
  const std::int64_t k = integer(p, "order_k");
  if (k < 1 || k > 1000) bad_param(cx.command, "order_k", "must lie in [1, 1000]");

  const BoxDomain box(sides);
  const SobolevConfig cfg(static_cast<int>(k), box);
  const WeylOrder order = weyl_order_from_string(p.at("weyl_order").get<std::string>());
  const CountingModel cm = sobolev_counting_model(cfg, order);
  const EntropyExpansion h = sobolev_entropy(cfg, order);
  const EntropyExpansion h_counting = entropy_from_counting_model(cm);

  cx.results["geometry"] = {
      {"volume", tagged(cfg.domain.volume, Provenance::kFormula)},
      {"boundary_area", tagged(cfg.domain.boundary_area, Provenance::kFormula)}};
  cx.results["counting_model"] = {
      {"kappa1", tagged(cm.kappa1(), Provenance::kFormula)},
      {"beta1", tagged(cm.beta1(), Provenance::kFormula)},
      {"kappa2", tagged(cm.kappa2(), Provenance::kFormula)},
      {"beta2", tagged(cm.beta2(), Provenance::kFormula)}};
  cx.results["entropy_expansion"] = expansion_json(h);
  cx.results["leading_coefficient"] = tagged(h.A, Provenance::kFormula);
  cx.results["counting_route_max_relative_gap"] = tagged(
      std::max({relative_gap(h.A, h_counting.A), relative_gap(h.a, h_counting.a),
                relative_gap(h.B, h_counting.B), relative_gap(h.b, h_counting.b)}),
      Provenance::kFormula);
  if (has(p, "eps"))
    cx.results["entropy_at_eps"] =
        tagged(eval_expansion(h, num(p, "eps")), Provenance::kFormula);

  if (has(p, "gamma")) {
    const double gamma = num(p, "gamma");
    const auto count = box_laplacian_counting(box, gamma, cx.cfg.threads);
    const auto d = static_cast<double>(dim);
    const double one = cm.kappa1() * std::pow(gamma, d / 2.0);
    Json lattice{{"count", tagged(static_cast<std::int64_t>(count), Provenance::kSpectrum)},
                 {"weyl_one_term", tagged(one, Provenance::kFormula)},
                 {"residual_one_term",
                  tagged(static_cast<double>(count) - one, Provenance::kSpectrum)}};
    if (dim >= 2) {
      const double kappa2 = -omega(static_cast<int>(dim) - 1) * cfg.domain.boundary_area /
                            (4.0 * std::pow(2.0 * kPi, d - 1.0));
      const double two = one + kappa2 * std::pow(gamma, (d - 1.0) / 2.0);
      lattice["weyl_two_term"] = tagged(two, Provenance::kFormula);
      lattice["residual_two_term"] =
          tagged(static_cast<double>(count) - two, Provenance::kSpectrum);
    }
    cx.results["laplacian_lattice"] = std::move(lattice);
  }

  Table t{"coefficients", {"expansion", "coefficient", "value"}, {}};
  expansion_rows(t, "entropy", h);
  cx.out.table(t);
  cx.out.plot(entropy_curve("entropy_vs_eps", h));
}

void run_validate(Context& cx) {
  const Suite suite = suite_from_string(cx.p.at("suite").get<std::string>());
  const auto outcomes = run_criteria(suite, cx.cfg.seed, cx.cfg.threads);
  Json criteria = Json::array();
  Table t{"criteria", {"id", "name", "status", "detail"}, {}};
  bool all_passed = true;
  for (const auto& o : outcomes) {
    const std::string status = !o.ran ? "skipped" : o.passed ? "pass" : "fail";
    all_passed = all_passed && (!o.ran || o.passed);
    Json entry{{"id", o.id}, {"name", o.name}, {"status", status},
               {"detail", o.detail}, {"metrics", o.metrics}};
    if (suite == Suite::kFull) entry["wall_clock_seconds"] = o.seconds;
    criteria.push_back(std::move(entry));
    t.rows.push_back({o.id, o.name, status, o.detail});
  }
  cx.results["suite"] = to_string(suite);
  cx.results["all_run_criteria_passed"] = all_passed;
  cx.results["criteria"] = std::move(criteria);
  cx.out.table(t);
}

}  // namespace

// ------------------------------------------------------------------- public

std::string to_string(Command command) {
  switch (command) {
    case Command::kEllipsoid: return "ellipsoid";
    case Command::kCounting: return "counting";
    case Command::kCarl: return "carl";
    case Command::kInvert: return "invert";
    case Command::kCover: return "cover";
    case Command::kLps: return "lps";
    case Command::kSobolev: return "sobolev";
    case Command::kValidate: return "validate";
  }
  return "unknown";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> all{
      Command::kEllipsoid, Command::kCounting, Command::kCarl, Command::kInvert,
      Command::kCover,     Command::kLps,      Command::kSobolev, Command::kValidate};
  return all;
}

Command command_from_string(const std::string& name) {
  for (Command c : all_commands())
    if (to_string(c) == name) return c;
  fail(ErrorKind::kSchema, "unknown command '" + name + "'");
}

std::string to_string(TableFormat format) {
  return format == TableFormat::kJson ? "json" : "csv";
}

TableFormat table_format_from_string(const std::string& name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "json") return TableFormat::kJson;
  fail(ErrorKind::kSchema, "unknown format '" + name + "' (expected json or csv)");
}

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kFormula: return "formula";
    case Provenance::kOracle: return "oracle";
    case Provenance::kSpectrum: return "spectrum";
  }
  return "unknown";
}

Json tagged(double value, Provenance provenance) {
  return Json{{"value", value}, {"provenance", to_string(provenance)}};
}

Json tagged(std::int64_t value, Provenance provenance) {
  return Json{{"value", value}, {"provenance", to_string(provenance)}};
}

const std::vector<ParamSpec>& command_schema(Command command) {
  return schema_for(command);
}

Json validate_params(Command command, const Json& params) {
  require(params.is_object() || params.is_null(), ErrorKind::kSchema,
          to_string(command) + ": parameters must be a key-value object");
  const auto& schema = schema_for(command);
  if (params.is_object()) {
    for (const auto& [key, value] : params.items()) {
      const bool known = std::any_of(schema.begin(), schema.end(),
                                     [&](const ParamSpec& s) { return s.name == key; });
      if (!known) bad_param(command, key, "is not recognized");
    }
  }
  Json out = Json::object();
  for (const auto& spec : schema) {
    const bool given = params.is_object() && params.contains(spec.name) &&
                       !params.at(spec.name).is_null();
    if (!given) {
      if (spec.required) bad_param(command, spec.name, "is required");
      out[spec.name] = spec.default_value;
      continue;
    }
    const Json& v = params.at(spec.name);
    switch (spec.type) {
      case ParamType::kNumber: out[spec.name] = parse_number(command, spec.name, v); break;
      case ParamType::kInteger: out[spec.name] = parse_integer(command, spec.name, v); break;
      case ParamType::kNumberList: out[spec.name] = parse_list(command, spec.name, v); break;
      case ParamType::kString:
        if (!v.is_string()) bad_param(command, spec.name, "must be a string");
        out[spec.name] = v;
        break;
    }
  }
  return out;
}

ReportBundle run(const RunConfig& config) {
  require(config.threads >= 1, ErrorKind::kSchema, "threads must be >= 1");
  const Json params = validate_params(config.command, config.params);
  BundleWriter out(config.output_dir, config.format);

  Json summary = Json::object();
  summary["tool"] = "entropy-lab";
  summary["command"] = to_string(config.command);
  summary["config"] = {{"seed", config.seed},
                       {"threads", config.threads},
                       {"format", to_string(config.format)}};
  summary["inputs"] = params;
  Json results = Json::object();
  Context cx{config.command, params, config, results, out};
  switch (config.command) {
    case Command::kEllipsoid: run_ellipsoid(cx); break;
    case Command::kCounting: run_counting(cx); break;
    case Command::kCarl: run_carl(cx); break;
    case Command::kInvert: run_invert(cx); break;
    case Command::kCover: run_cover(cx); break;
    case Command::kLps: run_lps(cx); break;
    case Command::kSobolev: run_sobolev(cx); break;
    case Command::kValidate: run_validate(cx); break;
  }
  summary["results"] = std::move(results);
  return out.finish(std::move(summary));
}

int exit_code_for(const std::exception& error) {
  if (const auto* e = dynamic_cast<const Error*>(&error))
    return e->is_admissibility_violation() ? 2 : 1;
  return 1;
}

}  // namespace entropy_lab
