#include "lsar/solver.hpp"

#include <algorithm>
#include <cmath>

#include "lsar/error.hpp"
#include "lsar/metrics.hpp"

namespace lsar {

namespace {

// Fixed-size chunks keep floating-point reductions independent of the
// number of workers.
constexpr std::size_t kChunk = 4096;

struct StepSums {
  double dh2 = 0.0;  // ||H_t - H_{t-1}||^2
  double h2 = 0.0;   // ||H_t||^2
  double hr2 = 0.0;  // ||H_t - R_t||^2
};

// Every iterate stays collinear with D (soft thresholding keeps the phase and
// H, R, M start at zero), so the iteration runs on real coordinates along
// each voxel's unit phase D / |D|. Signed values are needed: R and M can
// point opposite to D.
struct RealState {
  std::vector<double> d, h, r, m;
  std::vector<cplx> phase;

  explicit RealState(const ImageVolume& D) : d(D.size()), h(D.size()), r(D.size()), m(D.size()), phase(D.size()) {
    for (std::size_t i = 0; i < D.size(); ++i) {
      const double mag = std::abs(D.data()[i]);
      d[i] = mag;
      phase[i] = mag > 0.0 ? D.data()[i] / mag : cplx{};
    }
  }

  void store(const std::vector<double>& v, ImageVolume& out) const {
    for (std::size_t i = 0; i < v.size(); ++i) out.data()[i] = v[i] * phase[i];
  }
};

StepSums admm_step(RealState& st, double rho, double thresh) {
  const std::size_t n = st.d.size();
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<StepSums> partial(n_chunks);
  const double inv = 1.0 / (1.0 + rho);
  const double inv_rho = 1.0 / rho;
  const double* d = st.d.data();
  double* h = st.h.data();
  double* r = st.r.data();
  double* m = st.m.data();

#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < n_chunks; ++c) {
    double dh2 = 0.0, h2 = 0.0, hr2 = 0.0;
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double hv = (d[i] + rho * r[i] - m[i]) * inv;
      const double u = hv + m[i] * inv_rho;
      const double rv = u > thresh ? u - thresh : (u < -thresh ? u + thresh : 0.0);
      m[i] += rho * (hv - rv);
      dh2 += (hv - h[i]) * (hv - h[i]);
      h2 += hv * hv;
      hr2 += (hv - rv) * (hv - rv);
      h[i] = hv;
      r[i] = rv;
    }
    partial[c] = {dh2, h2, hr2};
  }
  StepSums total;
  for (const auto& p : partial) {
    total.dh2 += p.dh2;
    total.h2 += p.h2;
    total.hr2 += p.hr2;
  }
  return total;
}

}  // namespace

void check_params(const AdmmParams& p) {
  if (!(p.rho > 0.0) || !std::isfinite(p.rho)) throw Error(ErrorCode::InvalidParameter, "rho must be > 0");
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) throw Error(ErrorCode::InvalidParameter, "lambda must be >= 0");
  if (p.max_iters < 1) throw Error(ErrorCode::InvalidParameter, "max_iters must be >= 1");
  if (!(p.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tol must be > 0");
}

cplx soft_threshold(cplx u, double v) noexcept {
  const double mag = std::abs(u);
  if (mag <= v || mag == 0.0) return {0.0, 0.0};
  return u * ((mag - v) / mag);
}

std::vector<cplx> soft_threshold(std::span<const cplx> u, double v) {
  if (!(v >= 0.0)) throw Error(ErrorCode::NegativeThreshold, "threshold must be >= 0");
  std::vector<cplx> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = soft_threshold(u[i], v);
  return out;
}

void soft_threshold_inplace(std::span<cplx> u, double v) {
  if (!(v >= 0.0)) throw Error(ErrorCode::NegativeThreshold, "threshold must be >= 0");
  for (auto& x : u) x = soft_threshold(x, v);
}

double augmented_lagrangian(const SensingOperator& op, const EchoTensor& echo, const ImageVolume& H,
                            const ImageVolume& R, const ImageVolume& M, double lambda, double rho) {
  const EchoTensor predicted = op.forward(H);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < echo.size(); ++i) fidelity += std::norm(echo.data()[i] - predicted.data()[i]);
  double l1 = 0.0, coupling = 0.0, penalty = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const cplx diff = H.data()[i] - R.data()[i];
    l1 += std::abs(R.data()[i]);
    coupling += (std::conj(M.data()[i]) * diff).real();
    penalty += std::norm(diff);
  }
  return 0.5 * fidelity + lambda * l1 + coupling + 0.5 * rho * penalty;
}

AdmmResult admm_iterate(const ImageVolume& backprojected, const AdmmParams& params, const SensingOperator* op,
                        const EchoTensor* echo) {
  check_params(params);
  if (params.log_objective && (op == nullptr || echo == nullptr)) {
    throw Error(ErrorCode::InvalidParameter, "objective logging needs the sensing operator and echo");
  }
  if (op && backprojected.extents() != op->scene().image_extents()) {
    throw Error(ErrorCode::DimensionMismatch, "back-projected image does not match the operator grid");
  }

  AdmmState st;
  st.H = ImageVolume(backprojected.extents());
  st.H.axes = backprojected.axes;
  st.R = st.H;
  st.M = st.H;
  const std::size_t n = backprojected.size();
  const double thresh = params.lambda / params.rho;
  RealState real(backprojected);
  const auto materialize = [&] {
    real.store(real.h, st.H);
    real.store(real.r, st.R);
    real.store(real.m, st.M);
  };

  for (int t = 1; t <= params.max_iters; ++t) {
    const StepSums sums = admm_step(real, params.rho, thresh);
    AdmmIteration rec;
    rec.t = t;
    rec.primal_residual = std::sqrt(sums.hr2);
    if (sums.h2 > 0.0) {
      rec.relative_change = std::sqrt(sums.dh2 / sums.h2);
    } else {
      rec.relative_change = sums.dh2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    if (params.log_objective) {
      materialize();
      rec.objective = augmented_lagrangian(*op, *echo, st.H, st.R, st.M, params.lambda, params.rho);
    }
    st.history.push_back(rec);
    st.t = t;
    if (rec.relative_change < params.tol) {
      st.converged = true;
      break;
    }
  }

  materialize();
  if (params.log_objective) {
    const ImageVolume normal = op->adjoint(op->forward(st.H));
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += std::norm(normal.data()[i] - st.H.data()[i]);
    const double den = norm2(st.H);
    st.normal_defect = den > 0.0 ? std::sqrt(num) / den : std::numeric_limits<double>::quiet_NaN();
  }

  AdmmResult out;
  out.image = st.R;
  out.image.provenance = "enhanced (admm)";
  out.state = std::move(st);
  return out;
}

AdmmResult admm_reconstruct(const EchoTensor& echo, const ValidatedScene& scene, const AdmmParams& params) {
  check_params(params);
  const SensingOperator op(scene);
  const ImageVolume backprojected = op.adjoint(echo);
  return admm_iterate(backprojected, params, &op, &echo);
}

std::vector<double> default_lambda_grid(const ImageVolume& backprojected, std::size_t count, double lo, double hi) {
  double peak = 0.0;
  for (const auto& v : backprojected.values()) peak = std::max(peak, std::abs(v));
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo * peak;
    return grid;
  }
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = peak * lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return grid;
}

LambdaSearchResult search_lambda(const ImageVolume& backprojected, const AdmmParams& params,
                                 std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "lambda grid is empty");
  for (double l : grid) {
    if (!(l >= 0.0)) throw Error(ErrorCode::InvalidParameter, "lambda candidates must be >= 0");
  }
  AdmmParams p = params;
  p.log_objective = false;

  LambdaSearchResult best;
  bool have_best = false;
  double best_entropy = 0.0;
  for (double lambda : grid) {
    p.lambda = lambda;
    AdmmResult r = admm_iterate(backprojected, p);
    const double ie = image_entropy(r.image);
    best.scores.push_back({lambda, ie});
    const bool better = !have_best || ie < best_entropy || (ie == best_entropy && lambda < best.lambda);
    if (better) {
      best.lambda = lambda;
      best.result = std::move(r);
      best_entropy = ie;
      have_best = true;
    }
  }
  return best;
}

LambdaSearchResult search_lambda(const EchoTensor& echo, const ValidatedScene& scene, const AdmmParams& params,
                                 std::span<const double> grid) {
  const ImageVolume backprojected = dtfda_reconstruct(echo, scene);
  return search_lambda(backprojected, params, grid);
}

}  // namespace lsar
