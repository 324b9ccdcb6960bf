#include "entropy_lab/sequence_model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"

namespace entropy_lab {
namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string describe(const char* a, double x, const char* b, double y) {
  std::ostringstream ss;
  ss << a << '=' << format_g17(x) << ", " << b << '=' << format_g17(y);
  return ss.str();
}

}  // namespace

EigenvalueModel::EigenvalueModel(double c1, double alpha1, double c2,
                                 double alpha2)
    : c1_(c1), alpha1_(alpha1), c2_(c2), alpha2_(alpha2) {
  require(positive_finite(c1), ErrorKind::kRegime,
          "eigenvalue model: c1 must be positive, got " + format_g17(c1));
  require(positive_finite(alpha1) && positive_finite(alpha2),
          ErrorKind::kRegime, "eigenvalue model: exponents must be positive (" +
                                  describe("alpha1", alpha1, "alpha2", alpha2) +
                                  ")");
  require(std::isfinite(c2), ErrorKind::kRegime,
          "eigenvalue model: c2 must be finite");

  const std::string where = describe("alpha1", alpha1, "alpha2", alpha2);
  if (alpha2 == alpha1) {
    require(c2 == 0.0, ErrorKind::kRegimeBoundary,
            "eigenvalue model: alpha1 == alpha2 requires c2 == 0 (c2=" +
                format_g17(c2) + ")");
    regime_ = Regime::kPowerLaw;
    return;
  }
  if (alpha2 == alpha1 + 0.5) {
    fail(ErrorKind::kRegimeBoundary,
         "eigenvalue model: alpha2 == alpha1 + 1/2 is not covered (" + where +
             ")");
  }
  require(alpha1 < alpha2 && alpha2 < alpha1 + 0.5, ErrorKind::kRegime,
          "eigenvalue model: need alpha1 < alpha2 < alpha1 + 1/2 (" + where +
              ")");
  regime_ = Regime::kTwoTerm;
}

CountingModel::CountingModel(double kappa1, double beta1, double kappa2,
                             double beta2)
    : kappa1_(kappa1), beta1_(beta1), kappa2_(kappa2), beta2_(beta2) {
  require(positive_finite(kappa1), ErrorKind::kRegime,
          "counting model: kappa1 must be positive, got " + format_g17(kappa1));
  require(positive_finite(beta1) && positive_finite(beta2), ErrorKind::kRegime,
          "counting model: exponents must be positive (" +
              describe("beta1", beta1, "beta2", beta2) + ")");
  require(std::isfinite(kappa2), ErrorKind::kRegime,
          "counting model: kappa2 must be finite");

  const std::string where = describe("beta1", beta1, "beta2", beta2);
  if (beta2 == beta1) {
    require(kappa2 == 0.0, ErrorKind::kRegimeBoundary,
            "counting model: beta1 == beta2 requires kappa2 == 0 (kappa2=" +
                format_g17(kappa2) + ")");
    regime_ = Regime::kPowerLaw;
    return;
  }
  if (beta2 == 0.5 * beta1) {
    fail(ErrorKind::kRegimeBoundary,
         "counting model: beta2 == beta1/2 is not covered (" + where + ")");
  }
  require(0.5 * beta1 < beta2 && beta2 < beta1, ErrorKind::kRegime,
          "counting model: need beta1/2 < beta2 < beta1 (" + where + ")");
  regime_ = Regime::kTwoTerm;
}

std::string to_string(SpectrumSource source) {
  switch (source) {
    case SpectrumSource::kAnalytic: return "analytic";
    case SpectrumSource::kNystrom: return "nystrom";
    case SpectrumSource::kLattice: return "lattice";
    case SpectrumSource::kFile: return "file";
  }
  return "file";
}

SpectrumSource spectrum_source_from_string(const std::string& name) {
  if (name == "analytic") return SpectrumSource::kAnalytic;
  if (name == "nystrom") return SpectrumSource::kNystrom;
  if (name == "lattice") return SpectrumSource::kLattice;
  if (name == "file") return SpectrumSource::kFile;
  fail(ErrorKind::kSchema, "unknown spectrum source '" + name + "'");
}

SpectrumSample::SpectrumSample(std::vector<double> values,
                               SpectrumSource source, Params params)
    : values_(std::move(values)), source_(source), params_(std::move(params)) {
  for (double& v : values_) {
    require(std::isfinite(v), ErrorKind::kSpectrumDomain,
            "spectrum contains a non-finite value");
    require(v >= -kClampTolerance, ErrorKind::kSpectrumDomain,
            "spectrum value " + format_g17(v) + " is below -" +
                format_g17(kClampTolerance));
    if (v < 0.0) v = 0.0;
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

double eval_model(const EigenvalueModel& model, std::size_t n) {
  require(n >= 1, ErrorKind::kPrecondition, "eval_model: n must be >= 1");
  const double x = static_cast<double>(n);
  return model.c1() * std::pow(x, -model.alpha1()) +
         model.c2() * std::pow(x, -model.alpha2());
}

std::size_t empirical_counting(const SpectrumSample& sample, double gamma) {
  require(gamma > 0.0, ErrorKind::kPrecondition,
          "empirical_counting: gamma must be positive");
  const auto values = sample.values();
  // Non-increasing order: the first value < gamma ends the prefix.
  const auto it = std::partition_point(values.begin(), values.end(),
                                       [gamma](double v) { return v >= gamma; });
  return static_cast<std::size_t>(it - values.begin());
}

EigenvalueModel counting_to_eigenvalue_model(const CountingModel& cm) {
  const double k1 = cm.kappa1();
  const double b1 = cm.beta1();
  const double c1 = std::pow(k1, 1.0 / b1);
  const double alpha1 = 1.0 / b1;
  if (cm.regime() == Regime::kPowerLaw) return EigenvalueModel::power_law(c1, alpha1);

  const double b2 = cm.beta2();
  const double c2 = std::pow(k1, 1.0 / b1 - b2 / b1) * cm.kappa2() / b1;
  const double alpha2 = 1.0 + 1.0 / b1 - b2 / b1;
  try {
    return EigenvalueModel(c1, alpha1, c2, alpha2);
  } catch (const Error& e) {
    // beta1/2 < beta2 < beta1 maps onto alpha1 < alpha2 < alpha1 + 1/2.
    throw std::logic_error(std::string("counting_to_eigenvalue_model: ") +
                           e.what());
  }
}

TailFit fit_tail_model(const SpectrumSample& sample, IndexWindow window) {
  require(window.first >= 1 && window.first <= window.last,
          ErrorKind::kFitDomain, "fit_tail_model: empty or invalid window");
  require(window.last <= sample.size(), ErrorKind::kFitDomain,
          "fit_tail_model: window ends at " + std::to_string(window.last) +
              " but the sample has " + std::to_string(sample.size()) +
              " values");
  const std::size_t count = window.last - window.first + 1;
  require(count >= 4, ErrorKind::kFitDomain,
          "fit_tail_model: need at least 4 indices, got " +
              std::to_string(count));

  std::vector<double> xs, ys;
  xs.reserve(count);
  ys.reserve(count);
  for (std::size_t n = window.first; n <= window.last; ++n) {
    const double v = sample.lambda(n);
    require(v > 0.0, ErrorKind::kFitDomain,
            "fit_tail_model: lambda_" + std::to_string(n) + " is not positive");
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(v));
  }

  const double inv = 1.0 / static_cast<double>(count);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx *= inv;
  my *= inv;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  require(slope < 0.0, ErrorKind::kFitDomain,
          "fit_tail_model: spectrum is not decaying over the window (slope " +
              format_g17(slope) + ")");

  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  return TailFit{EigenvalueModel::power_law(std::exp(intercept), -slope),
                 std::sqrt(ss * inv), count};
}

SpectrumSample read_spectrum_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::kIo,
          path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "index,lambda", ErrorKind::kSchema,
          path.string() + ": expected header 'index,lambda', got '" + line +
              "'");

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::kSchema,
            path.string() + ":" + std::to_string(line_no) + ": missing comma");
    try {
      std::size_t used = 0;
      const long long index = std::stoll(line.substr(0, comma));
      const std::string rest = line.substr(comma + 1);
      const double lambda = std::stod(rest, &used);
      require(index >= 1, ErrorKind::kSchema,
              path.string() + ":" + std::to_string(line_no) +
                  ": index must be 1-based");
      require(used == rest.size(), ErrorKind::kSchema,
              path.string() + ":" + std::to_string(line_no) +
                  ": trailing characters");
      values.push_back(lambda);
    } catch (const std::logic_error&) {
      fail(ErrorKind::kSchema,
           path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
  }

  SpectrumSource source = SpectrumSource::kFile;
  SpectrumSample::Params params;
  auto sidecar = path;
  sidecar.replace_extension(".json");
  if (std::filesystem::exists(sidecar)) {
    const auto meta = nlohmann::json::parse(read_file(sidecar));
    if (meta.contains("source"))
      source = spectrum_source_from_string(meta.at("source").get<std::string>());
    if (meta.contains("params")) {
      for (const auto& [key, value] : meta.at("params").items())
        params[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return SpectrumSample(std::move(values), source, std::move(params));
}

void write_spectrum_csv(const SpectrumSample& sample,
                        const std::filesystem::path& path) {
  std::string out = "index,lambda\n";
  std::size_t n = 1;
  for (double v : sample.values()) {
    out += std::to_string(n++);
    out += ',';
    out += format_g17(v);
    out += '\n';
  }
  write_file(path, out);

  nlohmann::json meta;
  meta["source"] = to_string(sample.source());
  meta["params"] = nlohmann::json::object();
  for (const auto& [key, value] : sample.params()) meta["params"][key] = value;
  auto sidecar = path;
  sidecar.replace_extension(".json");
  write_file(sidecar, meta.dump(2) + "\n");
}

}  // namespace entropy_lab
