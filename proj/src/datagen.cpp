#include "sparsesm/datagen.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace sparsesm {

namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Gaussian: return "gaussian";
    case Family::StudentT: return "student-t";
    case Family::ScaleMixture: return "scale-mixture";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::Gaussian;
  if (name == "student-t" || name == "t") return Family::StudentT;
  if (name == "scale-mixture" || name == "mn") return Family::ScaleMixture;
  throw Error(ErrorCode::InvalidConfig, "unknown distribution family '" + name + "'");
}

void SimDesign::validate() const {
  if (n0 < 1 || K < 1 || p < 1) throw Error(ErrorCode::InvalidArgument, "design needs n0, K, p >= 1");
  if (s_p < 0 || s_p > p) throw Error(ErrorCode::InvalidArgument, "design needs 0 <= s_p <= p");
  if (!std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "design shift must be finite");
  if (family == Family::StudentT && !(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "t degrees of freedom must be positive");
  if (family == Family::ScaleMixture && (!is_probability(mix_prob) || !(mix_factor > 0.0))) {
    throw Error(ErrorCode::InvalidArgument, "scale mixture needs prob in [0,1] and factor > 0");
  }
  if (!(covariance.rho > -1.0 && covariance.rho < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "AR(1) correlation must lie in (-1, 1)");
  }
  if (covariance.kind == CovarianceSpec::Kind::HeteroscedasticAr1) {
    if (covariance.block_scales.empty()) throw Error(ErrorCode::InvalidArgument, "heteroscedastic design needs block scales");
    for (double d : covariance.block_scales) {
      if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "block scales must be positive");
    }
  }
  if (contamination) {
    const auto& c = *contamination;
    if (!is_probability(c.epsilon) || !is_probability(c.epsilon_noise)) {
      throw Error(ErrorCode::InvalidArgument, "contamination probabilities must lie in [0,1]");
    }
    if (!(c.row_sigma > 0.0) || !(c.cell_sd > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "contamination noise scales must be positive");
    }
  }
}

SimDesign SimDesign::sparse_mean_design(int p, int n0, double delta, Family family) {
  SimDesign d;
  d.p = p;
  d.n0 = n0;
  d.K = 3;
  d.s_p = p / 20;
  d.delta = delta;
  d.family = family;
  d.nu = 3.0;
  d.covariance = CovarianceSpec{CovarianceSpec::Kind::Ar1, 0.9, {1.0, 4.0, 9.0}};
  return d;
}

SimDesign SimDesign::weakly_sparse_design(int p, int n0, Family family, double nu) {
  SimDesign d;
  d.p = p;
  d.n0 = n0;
  d.K = 3;
  d.s_p = p / 4;
  d.delta = 1.2;
  d.family = family;
  d.nu = nu;
  d.covariance = CovarianceSpec{CovarianceSpec::Kind::HeteroscedasticAr1, 0.85, {1.0, 4.0, 9.0}};
  return d;
}

CenterSet make_means(const SimDesign& design) {
  CenterSet mu = CenterSet::Zero(design.K, design.p);
  for (int k = 1; k < design.K; ++k) {
    const double magnitude = design.delta * static_cast<double>((k + 1) / 2);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    mu.row(k).head(design.s_p).setConstant(sign * magnitude);
  }
  return mu;
}

Matrix make_covariance(const CovarianceSpec& spec, int p) {
  Matrix sigma(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(spec.rho, std::abs(i - j));
  }
  if (spec.kind == CovarianceSpec::Kind::HeteroscedasticAr1) {
    const auto blocks = static_cast<int>(spec.block_scales.size());
    Vector root(p);
    for (int j = 0; j < p; ++j) {
      // coordinate j+1 belongs to block b when b p/B < j+1 <= (b+1) p/B
      int b = 0;
      while (b + 1 < blocks && static_cast<double>(j + 1) * blocks > static_cast<double>(b + 1) * p) ++b;
      root[j] = std::sqrt(spec.block_scales[static_cast<std::size_t>(b)]);
    }
    sigma = root.asDiagonal() * sigma * root.asDiagonal();
  }
  return sigma;
}

SimOutput sample(const SimDesign& design, const RngSpec& rng) {
  design.validate();
  const CenterSet mu = make_means(design);
  const Matrix sigma = make_covariance(design.covariance, design.p);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "design covariance is not positive definite");
  const Matrix L = llt.matrixL();

  const int n = design.n0 * design.K;
  Matrix X(n, design.p);
  std::vector<int> truth(static_cast<std::size_t>(n));
  Rng gen(rng.child(0));
  Vector z(design.p);
  for (int k = 0; k < design.K; ++k) {
    for (int r = 0; r < design.n0; ++r) {
      const int i = k * design.n0 + r;
      for (int j = 0; j < design.p; ++j) z[j] = gen.normal();
      double scale = 1.0;
      if (design.family == Family::StudentT) {
        scale = 1.0 / std::sqrt(gen.chi_square(design.nu) / design.nu);
      } else if (design.family == Family::ScaleMixture) {
        scale = gen.bernoulli(design.mix_prob) ? 1.0 : design.mix_factor;
      }
      X.row(i) = mu.row(k) + scale * (L * z).transpose();
      truth[static_cast<std::size_t>(i)] = k;
    }
  }

  std::vector<Index> informative(static_cast<std::size_t>(design.s_p));
  for (int j = 0; j < design.s_p; ++j) informative[static_cast<std::size_t>(j)] = j;

  DataMatrix data = validate_matrix(std::move(X));
  if (design.contamination) data = contaminate(data, *design.contamination, informative, rng.child(1));
  return SimOutput{std::move(data), Partition(std::move(truth), design.K), std::move(informative)};
}

DataMatrix contaminate(const DataMatrix& X, const ContaminationSpec& spec, const std::vector<Index>& informative,
                       const RngSpec& rng) {
  Matrix out = X.values();
  Rng gen(rng);
  if (spec.kind == ContaminationSpec::Kind::RowWise) {
    for (Index i = 0; i < out.rows(); ++i) {
      if (!gen.bernoulli(spec.epsilon)) continue;
      for (Index j = 0; j < out.cols(); ++j) out(i, j) = spec.row_sigma * gen.normal();
    }
  } else {
    std::vector<bool> is_informative(static_cast<std::size_t>(out.cols()), false);
    for (Index j : informative) {
      if (j < 0 || j >= out.cols()) throw Error(ErrorCode::DimensionMismatch, "informative coordinate out of range");
      is_informative[static_cast<std::size_t>(j)] = true;
    }
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        const double eps = is_informative[static_cast<std::size_t>(j)] ? spec.epsilon : spec.epsilon_noise;
        if (gen.bernoulli(eps)) out(i, j) = spec.cell_sd * gen.normal();
      }
    }
  }
  return validate_matrix(std::move(out));
}

}  // namespace sparsesm
