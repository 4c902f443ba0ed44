#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsesm/core.hpp"
#include "sparsesm/rng.hpp"

namespace sparsesm {

enum class Family { Gaussian, StudentT, ScaleMixture };

struct CovarianceSpec {
  enum class Kind { Ar1, HeteroscedasticAr1 };
  Kind kind = Kind::Ar1;
  double rho = 0.9;
  /// Diagonal scales by thirds of the coordinates (heteroscedastic only).
  std::vector<double> block_scales{1.0, 4.0, 9.0};
};

struct ContaminationSpec {
  enum class Kind { RowWise, CellWise };
  Kind kind = Kind::RowWise;
  /// Row-wise: replacement probability. Cell-wise: probability on informative coordinates.
  double epsilon = 0.0;
  /// Row-wise replacement noise sd.
  double row_sigma = 5.0;
  /// Cell-wise probability on non-informative coordinates.
  double epsilon_noise = 0.10;
  /// Cell-wise replacement noise sd.
  double cell_sd = 3.0;
};

struct SimDesign {
  int n0 = 100;
  int K = 3;
  int p = 200;
  int s_p = 10;
  double delta = 3.0;
  Family family = Family::Gaussian;
  double nu = 3.0;
  /// Scale mixture: the scale is 1 with probability mix_prob, mix_factor otherwise.
  double mix_prob = 0.9;
  double mix_factor = 3.0;
  CovarianceSpec covariance;
  std::optional<ContaminationSpec> contamination;

  void validate() const;

  /// Main simulation design: K=3, s_p=p/20, AR(1) rho=0.9.
  static SimDesign sparse_mean_design(int p = 200, int n0 = 100, double delta = 3.0,
                                      Family family = Family::Gaussian);
  /// Weakly sparse design: s_p=p/4, delta=1.2, D^{1/2} R D^{1/2} with rho=0.85.
  static SimDesign weakly_sparse_design(int p = 200, int n0 = 100, Family family = Family::Gaussian,
                                        double nu = 5.0);
};

struct SimOutput {
  DataMatrix X;
  Partition truth;
  std::vector<Index> informative;
};

/// mu_1 = 0, then alternating +/- shifts of growing magnitude on the first s_p
/// coordinates: +delta, -delta, +2 delta, -2 delta, ...
CenterSet make_means(const SimDesign& design);

Matrix make_covariance(const CovarianceSpec& spec, int p);

SimOutput sample(const SimDesign& design, const RngSpec& rng);

/// Row-wise: each row replaced w.p. epsilon by N(0, row_sigma^2 I).
/// Cell-wise: each cell replaced w.p. epsilon (informative) or epsilon_noise
/// (other coordinates) by N(0, cell_sd^2).
DataMatrix contaminate(const DataMatrix& X, const ContaminationSpec& spec,
                       const std::vector<Index>& informative, const RngSpec& rng);

std::string to_string(Family family);
Family family_from_string(const std::string& name);

}  // namespace sparsesm
