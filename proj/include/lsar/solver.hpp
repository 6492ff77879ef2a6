#ifndef LSAR_SOLVER_HPP
#define LSAR_SOLVER_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lsar/operators.hpp"
#include "lsar/scene.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

struct AdmmParams {
  double rho = 1.0;
  double lambda = 0.0;
  int max_iters = 50;
  double tol = 1e-4;  // stop when ||H_t - H_{t-1}|| / ||H_t|| < tol
  // Evaluates the augmented Lagrangian every iteration; costs one forward
  // projection per iteration.
  bool log_objective = false;
};

void check_params(const AdmmParams& params);

struct AdmmIteration {
  int t = 0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = 0.0;  // ||H - R||
  double relative_change = 0.0;
};

struct AdmmState {
  ImageVolume H;  // primal
  ImageVolume R;  // shrinkage (auxiliary) variable
  ImageVolume M;  // dual (Lagrange multiplier)
  int t = 0;
  bool converged = false;
  std::vector<AdmmIteration> history;
  // ||Psi^dagger Psi H - H|| / ||H|| at exit, only with log_objective.
  double normal_defect = std::numeric_limits<double>::quiet_NaN();
};

struct AdmmResult {
  ImageVolume image;  // the sparse iterate R at exit
  AdmmState state;
};

// Elementwise complex soft threshold (U / |U|) max(|U| - v, 0), zero where U = 0.
cplx soft_threshold(cplx u, double v) noexcept;
std::vector<cplx> soft_threshold(std::span<const cplx> u, double v);
void soft_threshold_inplace(std::span<cplx> u, double v);

// ADMM for  min 1/2 ||Y - Psi H||^2 + lambda ||H||_1  using Psi^dagger Psi ~ I,
// so each iteration is elementwise:
//   H <- (Psi^dagger Y + rho R - M) / (1 + rho)
//   R <- T(H + M / rho; lambda / rho)
//   M <- M + rho (H - R)
// R and M start at zero.
AdmmResult admm_reconstruct(const EchoTensor& echo, const ValidatedScene& scene, const AdmmParams& params);

// Same iteration starting from a precomputed Psi^dagger Y. `op` and `echo` are
// only needed when params.log_objective is set.
AdmmResult admm_iterate(const ImageVolume& backprojected, const AdmmParams& params,
                        const SensingOperator* op = nullptr, const EchoTensor* echo = nullptr);

// L = 1/2 ||Y - Psi H||^2 + lambda ||R||_1 + Re tr(M^H (H - R)) + rho/2 ||H - R||^2
double augmented_lagrangian(const SensingOperator& op, const EchoTensor& echo, const ImageVolume& H,
                            const ImageVolume& R, const ImageVolume& M, double lambda, double rho);

struct LambdaScore {
  double lambda = 0.0;
  double entropy = 0.0;
};

struct LambdaSearchResult {
  double lambda = 0.0;
  AdmmResult result;
  std::vector<LambdaScore> scores;
};

// Log-spaced candidates spanning [lo, hi] * max|Psi^dagger Y|.
std::vector<double> default_lambda_grid(const ImageVolume& backprojected, std::size_t count = 8, double lo = 1e-3,
                                        double hi = 1.0);

// Runs ADMM per candidate (sharing one Psi^dagger Y) and keeps the image of
// minimum entropy; ties go to the smaller lambda. An all-zero image scores +inf.
LambdaSearchResult search_lambda(const EchoTensor& echo, const ValidatedScene& scene, const AdmmParams& params,
                                 std::span<const double> grid);
LambdaSearchResult search_lambda(const ImageVolume& backprojected, const AdmmParams& params,
                                 std::span<const double> grid);

}  // namespace lsar

#endif  // LSAR_SOLVER_HPP
