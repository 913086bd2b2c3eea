#include "axeval/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "axeval/errors.hpp"
#include "axeval/rng.hpp"

namespace axeval {

namespace {

double sigmoid(double z) {
  if (z >= 0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_two_classes(const std::vector<int>& labels) {
  bool has0 = false, has1 = false;
  for (int y : labels) (y == 0 ? has0 : has1) = true;
  if (!has0 || !has1)
    throw DataError("fit requires both classes present in labels");
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> Model::gradient(std::span<const double>) const {
  throw CapabilityError("model does not expose an analytic gradient");
}

std::vector<double> FunctionModel::gradient(std::span<const double> x) const {
  if (!grad_) throw CapabilityError("model does not expose an analytic gradient");
  return grad_(x);
}

LinearModel::LinearModel(std::vector<double> coefficients, double intercept)
    : coefficients_(std::move(coefficients)), intercept_(intercept) {
  for (double c : coefficients_)
    if (!std::isfinite(c)) throw DataError("non-finite linear coefficient");
  if (!std::isfinite(intercept_)) throw DataError("non-finite intercept");
}

double LinearModel::score(std::span<const double> x) const {
  double z = intercept_;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) z += coefficients_[j] * x[j];
  return sigmoid(z);
}

std::vector<double> LinearModel::gradient(std::span<const double> x) const {
  double z = intercept_;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) z += coefficients_[j] * x[j];
  const double s = sigmoid(z);
  const double d = s * (1.0 - s);
  std::vector<double> g(coefficients_.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = d * coefficients_[j];
  return g;
}

MlpModel::MlpModel(std::vector<double> w1, std::vector<double> b1,
                   std::vector<double> w2, double b2, std::size_t n_in,
                   std::size_t hidden)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2),
      n_in_(n_in), hidden_(hidden) {
  if (w1_.size() != hidden_ * n_in_ || b1_.size() != hidden_ || w2_.size() != hidden_)
    throw ConfigError("mlp: parameter shapes do not match architecture");
}

double MlpModel::score(std::span<const double> x) const {
  double z2 = b2_;
  for (std::size_t h = 0; h < hidden_; ++h) {
    double z1 = b1_[h];
    const double* row = w1_.data() + h * n_in_;
    for (std::size_t j = 0; j < n_in_; ++j) z1 += row[j] * x[j];
    z2 += w2_[h] * std::tanh(z1);
  }
  return sigmoid(z2);
}

std::vector<double> MlpModel::gradient(std::span<const double> x) const {
  std::vector<double> hpre(hidden_);
  double z2 = b2_;
  for (std::size_t h = 0; h < hidden_; ++h) {
    double z1 = b1_[h];
    const double* row = w1_.data() + h * n_in_;
    for (std::size_t j = 0; j < n_in_; ++j) z1 += row[j] * x[j];
    hpre[h] = z1;
    z2 += w2_[h] * std::tanh(z1);
  }
  const double s = sigmoid(z2);
  const double ds = s * (1.0 - s);
  std::vector<double> g(n_in_, 0.0);
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double th = std::tanh(hpre[h]);
    const double c = ds * w2_[h] * (1.0 - th * th);
    const double* row = w1_.data() + h * n_in_;
    for (std::size_t j = 0; j < n_in_; ++j) g[j] += c * row[j];
  }
  return g;
}

std::vector<double> model_gradient(const Model& m, std::span<const double> x) {
  return m.gradient(x);
}

std::shared_ptr<const LinearModel> fit_logistic(const Dataset& ds,
                                                const std::vector<int>& labels) {
  if (labels.size() != ds.rows()) throw DataError("label count mismatch");
  check_two_classes(labels);
  const std::size_t nu = ds.rows();
  const std::size_t n = ds.cols();
  const double reg = 1e-4;

  std::vector<double> beta(n, 0.0);
  double b0 = 0.0;
  std::vector<double> grad(n + 1);

  auto eval = [&](const std::vector<double>& b, double b0v,
                  std::vector<double>* g) {
    double loss = 0.0;
    if (g) std::fill(g->begin(), g->end(), 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
      const auto x = ds.std_row(i);
      double z = b0v;
      for (std::size_t j = 0; j < n; ++j) z += b[j] * x[j];
      // log(1+exp(z)) - y z, numerically stable
      loss += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) -
              labels[i] * z;
      if (g) {
        const double r = sigmoid(z) - labels[i];
        (*g)[n] += r;
        for (std::size_t j = 0; j < n; ++j) (*g)[j] += r * x[j];
      }
    }
    loss /= static_cast<double>(nu);
    double l2 = 0.0;
    for (double bj : b) l2 += bj * bj;
    loss += 0.5 * reg * l2;
    if (g) {
      for (std::size_t j = 0; j <= n; ++j) (*g)[j] /= static_cast<double>(nu);
      for (std::size_t j = 0; j < n; ++j) (*g)[j] += reg * b[j];
    }
    return loss;
  };

  double step = 1.0;
  double loss = eval(beta, b0, &grad);
  for (int iter = 0; iter < 10000; ++iter) {
    double gnorm = 0.0;
    for (double gj : grad) gnorm += gj * gj;
    gnorm = std::sqrt(gnorm);
    if (gnorm <= 1e-6) break;

    // backtracking line search
    std::vector<double> nb(n);
    double nb0 = 0.0;
    double nloss = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) nb[j] = beta[j] - step * grad[j];
      nb0 = b0 - step * grad[n];
      nloss = eval(nb, nb0, nullptr);
      if (nloss <= loss - 1e-4 * step * gnorm * gnorm || step < 1e-12) break;
      step *= 0.5;
    }
    beta.swap(nb);
    b0 = nb0;
    loss = eval(beta, b0, &grad);
    step *= 1.25;
  }
  return std::make_shared<LinearModel>(std::move(beta), b0);
}

std::shared_ptr<const MlpModel> fit_mlp(const Dataset& ds,
                                        const std::vector<int>& labels,
                                        std::size_t hidden, std::uint64_t seed) {
  if (labels.size() != ds.rows()) throw DataError("label count mismatch");
  if (hidden < 1) throw ConfigError("mlp: hidden width must be >= 1");
  check_two_classes(labels);
  const std::size_t nu = ds.rows();
  const std::size_t n = ds.cols();
  const double reg = 1e-4;

  Rng rng(seed);
  const std::size_t np = hidden * n + hidden + hidden + 1;
  std::vector<double> p(np);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(n));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t i = 0; i < hidden * n; ++i) p[i] = rng.uniform(-s1, s1);
  for (std::size_t i = hidden * n; i < hidden * n + hidden; ++i) p[i] = 0.0;
  for (std::size_t i = hidden * n + hidden; i < np - 1; ++i)
    p[i] = rng.uniform(-s2, s2);
  p[np - 1] = 0.0;

  auto* w1 = p.data();
  auto* b1 = p.data() + hidden * n;
  auto* w2 = p.data() + hidden * n + hidden;
  auto* b2 = p.data() + np - 1;

  std::vector<double> grad(np), m1(np, 0.0), m2(np, 0.0), th(hidden);
  const double lr = 0.02, bb1 = 0.9, bb2 = 0.999, eps = 1e-8;

  for (int iter = 1; iter <= 3000; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
      const auto x = ds.std_row(i);
      double z2 = *b2;
      for (std::size_t h = 0; h < hidden; ++h) {
        double z1 = b1[h];
        const double* row = w1 + h * n;
        for (std::size_t j = 0; j < n; ++j) z1 += row[j] * x[j];
        th[h] = std::tanh(z1);
        z2 += w2[h] * th[h];
      }
      const double r = sigmoid(z2) - labels[i];  // dLoss/dz2 for log-loss
      grad[np - 1] += r;
      for (std::size_t h = 0; h < hidden; ++h) {
        grad[hidden * n + hidden + h] += r * th[h];
        const double c = r * w2[h] * (1.0 - th[h] * th[h]);
        grad[hidden * n + h] += c;
        const double* row = w1 + h * n;
        (void)row;
        for (std::size_t j = 0; j < n; ++j) grad[h * n + j] += c * x[j];
      }
    }
    double gnorm = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      grad[i] /= static_cast<double>(nu);
      if (i < np - 1) grad[i] += reg * p[i];
      gnorm += grad[i] * grad[i];
    }
    if (std::sqrt(gnorm) <= 1e-6) break;
    const double c1 = 1.0 - std::pow(bb1, iter);
    const double c2 = 1.0 - std::pow(bb2, iter);
    for (std::size_t i = 0; i < np; ++i) {
      m1[i] = bb1 * m1[i] + (1 - bb1) * grad[i];
      m2[i] = bb2 * m2[i] + (1 - bb2) * grad[i] * grad[i];
      p[i] -= lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
    }
  }

  std::vector<double> w1v(w1, w1 + hidden * n), b1v(b1, b1 + hidden),
      w2v(w2, w2 + hidden);
  return std::make_shared<MlpModel>(std::move(w1v), std::move(b1v),
                                    std::move(w2v), *b2, n, hidden);
}

double ScaffoldedModel::score(std::span<const double> x) const {
  const bool real = detector_.predict_point(x) == 1;
  return real ? static_cast<double>(biased_label(x))
              : static_cast<double>(innocuous_label(x));
}

ModelPtr build_scaffold(const Dataset& ds, std::size_t protected_index,
                        std::size_t foil_index, AttackTarget target,
                        double perturb_width, std::uint64_t seed) {
  const std::size_t n = ds.cols();
  const std::size_t nu = ds.rows();
  if (protected_index >= n || foil_index >= n)
    throw ConfigError("scaffold: feature index out of range");
  if (protected_index == foil_index)
    throw ConfigError("scaffold: protected and foil features must differ");
  if (ds.constant_columns()[protected_index])
    throw DataError("scaffold: protected column is constant");

  std::vector<double> pcol(nu), fcol(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    pcol[i] = ds.std_at(i, protected_index);
    fcol[i] = ds.std_at(i, foil_index);
  }
  const double pmed = median_of(pcol);
  const double fmed = median_of(fcol);

  const std::vector<double> bg = ds.std_mean();
  Rng rng(seed);
  auto make_synthetic = [&](std::size_t i, std::vector<double>& out) {
    const auto x = ds.std_row(i);
    out.assign(x.begin(), x.end());
    if (target == AttackTarget::kLime) {
      for (std::size_t j = 0; j < n; ++j) out[j] += rng.normal(0.0, perturb_width);
    } else {
      // mean-substitution hybrid over a random proper coalition
      std::size_t dropped = 0;
      do {
        dropped = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (rng.uniform01() < 0.5) {
            out[j] = bg[j];
            ++dropped;
          } else {
            out[j] = x[j];
          }
        }
      } while (dropped == 0);
    }
  };

  // detector training set: real rows (target 1) + one synthetic per row (0)
  std::vector<double> train;
  train.reserve(2 * nu * n);
  std::vector<int> targets;
  targets.reserve(2 * nu);
  for (std::size_t i = 0; i < nu; ++i) {
    const auto x = ds.std_row(i);
    train.insert(train.end(), x.begin(), x.end());
    targets.push_back(1);
  }
  std::vector<double> buf;
  for (std::size_t i = 0; i < nu; ++i) {
    make_synthetic(i, buf);
    train.insert(train.end(), buf.begin(), buf.end());
    targets.push_back(0);
  }
  KnnModel detector(std::move(train), n, std::move(targets), 5);

  ScaffoldedModel::BuildReport report;
  ScaffoldedModel model(protected_index, foil_index, pmed, fmed,
                        std::move(detector), report);
  std::size_t real_ok = 0, synth_ok = 0;
  for (std::size_t i = 0; i < nu; ++i) {
    const auto x = ds.std_row(i);
    if (model.label(x) == model.biased_label(x)) ++real_ok;
    make_synthetic(i, buf);
    if (model.label(buf) == model.innocuous_label(buf)) ++synth_ok;
  }
  model.report_.real_fidelity = static_cast<double>(real_ok) / nu;
  model.report_.synthetic_fidelity = static_cast<double>(synth_ok) / nu;
  return std::make_shared<ScaffoldedModel>(std::move(model));
}

void save_model(const Model& m, const Dataset& ds, const std::string& path) {
  nlohmann::json j;
  j["column_names"] = ds.column_names();
  j["standardization"] = {{"mean", ds.mean()}, {"stddev", ds.stddev()}};
  if (const auto* lm = dynamic_cast<const LinearModel*>(&m)) {
    j["type"] = "linear";
    j["parameters"] = {{"coefficients", lm->coefficients()},
                       {"intercept", lm->intercept()}};
  } else if (const auto* mlp = dynamic_cast<const MlpModel*>(&m)) {
    j["type"] = "mlp";
    j["parameters"] = {{"w1", mlp->w1()}, {"b1", mlp->b1()}, {"w2", mlp->w2()},
                       {"b2", mlp->b2()}, {"hidden", mlp->hidden()},
                       {"inputs", mlp->w1().size() / mlp->hidden()}};
  } else {
    throw CapabilityError("only linear and mlp models are serializable");
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

ModelPtr load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("invalid model JSON in " + path + ": " + e.what());
  }
  const std::string type = j.at("type");
  const auto& p = j.at("parameters");
  if (type == "linear") {
    return std::make_shared<LinearModel>(
        p.at("coefficients").get<std::vector<double>>(),
        p.at("intercept").get<double>());
  }
  if (type == "mlp") {
    return std::make_shared<MlpModel>(
        p.at("w1").get<std::vector<double>>(),
        p.at("b1").get<std::vector<double>>(),
        p.at("w2").get<std::vector<double>>(), p.at("b2").get<double>(),
        p.at("inputs").get<std::size_t>(), p.at("hidden").get<std::size_t>());
  }
  throw DataError("unknown model type: " + type);
}

}  // namespace axeval
