#include "rdmtomo/reconstruction.hpp"

#include "rdmtomo/rng.hpp"
#include "rdmtomo/states.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdmtomo {

namespace {

// Index tables mapping (reduced index, environment index) of each kept pair
// to the full basis index, plus the inverse map used by the Jacobian.
struct PairData {
  QubitPair pair;
  std::vector<std::array<int, 4>> idx;     // idx[e][r] -> full index
  std::vector<int> inv_r, inv_e;           // full index -> (r, e)
  Matrix target;
};

struct PairWorkspace {
  int num_qubits = 0;
  int dim = 0;
  int env_dim = 0;
  std::vector<PairData> pairs;
  int rows = 0;  // residual vector length: 32 per pair (Re/Im of 4x4)

  explicit PairWorkspace(const RdmSet& targets) {
    num_qubits = targets.num_qubits;
    if (num_qubits < 2) fail_arg("reconstruction: need at least two qubits");
    dim = 1 << num_qubits;
    env_dim = 1 << (num_qubits - 2);
    for (const auto& [pq, target] : targets.pairs) {
      const auto [i, j] = pq;
      if (i < 0 || j >= num_qubits || i >= j)
        fail_arg("reconstruction: malformed qubit pair in target set");
      if (target.num_qubits != 2) fail_arg("reconstruction: target is not a two-qubit state");
      PairData pd;
      pd.pair = pq;
      pd.target = target.mat;
      pd.idx.resize(env_dim);
      pd.inv_r.resize(dim);
      pd.inv_e.resize(dim);
      std::vector<int> env;
      for (int q = 0; q < num_qubits; ++q)
        if (q != i && q != j) env.push_back(q);
      for (int e = 0; e < env_dim; ++e) {
        for (int r = 0; r < 4; ++r) {
          int full = 0;
          full |= ((r >> 1) & 1) << (num_qubits - 1 - i);
          full |= (r & 1) << (num_qubits - 1 - j);
          for (size_t s = 0; s < env.size(); ++s)
            full |= ((e >> (env.size() - 1 - s)) & 1) << (num_qubits - 1 - env[s]);
          pd.idx[e][r] = full;
          pd.inv_r[full] = r;
          pd.inv_e[full] = e;
        }
      }
      pairs.push_back(std::move(pd));
    }
    if (pairs.empty()) fail_arg("reconstruction: empty target set");
    rows = 32 * static_cast<int>(pairs.size());
  }

  // Residual vector (Re/Im interleaved per marginal entry) of a pure state.
  double residual_pure(const Vector& psi, Eigen::VectorXd& r) const {
    r.resize(rows);
    int row = 0;
    double f = 0.0;
    for (const auto& pd : pairs) {
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
          Complex s = 0.0;
          for (int e = 0; e < env_dim; ++e)
            s += psi(pd.idx[e][a]) * std::conj(psi(pd.idx[e][c]));
          s -= pd.target(a, c);
          r(row++) = s.real();
          r(row++) = s.imag();
          f += std::norm(s);
        }
    }
    return f;
  }

  // Residual vector of a density operator.
  double residual_density(const Matrix& rho, Eigen::VectorXd& r) const {
    r.resize(rows);
    int row = 0;
    double f = 0.0;
    for (const auto& pd : pairs) {
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
          Complex s = 0.0;
          for (int e = 0; e < env_dim; ++e) s += rho(pd.idx[e][a], pd.idx[e][c]);
          s -= pd.target(a, c);
          r(row++) = s.real();
          r(row++) = s.imag();
          f += std::norm(s);
        }
    }
    return f;
  }

  // Jacobian of residual_pure with respect to (Re psi, Im psi). Within one
  // pair every full index q decomposes uniquely as (a, e), and d delta(r, c)
  // picks up conj(psi(T(c,e))) at rows (a, c) and psi(T(r,e)) at rows (r, a).
  void jacobian_pure(const Vector& psi, Eigen::MatrixXd& jac) const {
    jac.setZero(rows, 2 * dim);
    int base = 0;
    for (const auto& pd : pairs) {
      for (int q = 0; q < dim; ++q) {
        const int a = pd.inv_r[q];
        const int e = pd.inv_e[q];
        for (int c = 0; c < 4; ++c) {
          const Complex ket_side = std::conj(psi(pd.idx[e][c]));
          const int row = base + 2 * (4 * a + c);
          jac(row, q) += ket_side.real();
          jac(row, dim + q) += -ket_side.imag();
          jac(row + 1, q) += ket_side.imag();
          jac(row + 1, dim + q) += ket_side.real();

          const Complex bra_side = psi(pd.idx[e][c]);  // here c plays the row r
          const int row2 = base + 2 * (4 * c + a);
          jac(row2, q) += bra_side.real();
          jac(row2, dim + q) += bra_side.imag();
          jac(row2 + 1, q) += bra_side.imag();
          jac(row2 + 1, dim + q) += -bra_side.real();
        }
      }
      base += 32;
    }
  }
};

Vector random_unit_vector(int dim, std::uint64_t seed) {
  GaussianSampler rng(seed);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return v;
}

void fix_global_phase(Vector& psi) {
  Eigen::Index imax = 0;
  psi.cwiseAbs().maxCoeff(&imax);
  const Complex a = psi(imax);
  if (std::abs(a) > 0.0) psi *= std::conj(a) / std::abs(a);
}

struct LmControl {
  double target_f = 0.0;
  int max_iterations = 0;
  double stall_improvement = 1e-12;
  int stall_window = 50;
};

}  // namespace

double rdm_residual(const DensityMatrix& candidate, const RdmSet& targets) {
  if (candidate.num_qubits != targets.num_qubits)
    fail_arg("rdm_residual: dimension mismatch");
  double sum = 0.0;
  for (const auto& [pq, target] : targets.pairs) {
    const DensityMatrix reduced = partial_trace(candidate, {pq.first, pq.second});
    sum += (reduced.mat - target.mat).squaredNorm();
  }
  return std::sqrt(sum);
}

ReconstructionResult reconstruct_pure(const RdmSet& targets, int restarts,
                                      std::uint64_t seed) {
  PureOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  return reconstruct_pure(targets, opts);
}

ReconstructionResult reconstruct_pure(const RdmSet& targets, const PureOptions& opts) {
  if (opts.restarts < 1) fail_arg("reconstruct_pure: restarts must be >= 1");
  const PairWorkspace ws(targets);
  const LmControl ctl{opts.tolerance * opts.tolerance, opts.max_iterations,
                      opts.stall_improvement, opts.stall_window};

  Vector best;
  double best_f = std::numeric_limits<double>::infinity();
  int used = 0;

  Eigen::VectorXd r, rt, g, step;
  Eigen::MatrixXd jac, normal, normal_reg;
  std::vector<double> history;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    Vector psi = random_unit_vector(ws.dim, derive_sample_seed(opts.seed, restart));
    double f = ws.residual_pure(psi, r);
    double lambda = 1e-3;
    history.assign(1, f);

    for (int iter = 0; iter < ctl.max_iterations && f > ctl.target_f; ++iter) {
      ws.jacobian_pure(psi, jac);
      normal = jac.transpose() * jac;
      g = jac.transpose() * r;

      bool accepted = false;
      for (int tries = 0; tries < 30; ++tries) {
        normal_reg = normal;
        for (int i = 0; i < 2 * ws.dim; ++i) normal_reg(i, i) += lambda;
        step = normal_reg.ldlt().solve(-g);
        Vector trial = psi;
        for (int i = 0; i < ws.dim; ++i) trial(i) += Complex(step(i), step(ws.dim + i));
        trial /= trial.norm();  // retraction to the state sphere
        const double ft = ws.residual_pure(trial, rt);
        if (ft < f) {
          psi = std::move(trial);
          r.swap(rt);
          f = ft;
          lambda = std::max(lambda / 3.0, 1e-14);
          accepted = true;
          break;
        }
        lambda *= 4.0;
      }
      if (!accepted) break;  // no descent step exists at any damping

      history.push_back(f);
      if (static_cast<int>(history.size()) > ctl.stall_window + 1) {
        history.erase(history.begin());
        const double before = history.front();
        if (before - f < ctl.stall_improvement * std::max(before, 1e-300)) break;
      }
    }

    ++used;
    if (f < best_f) {
      best_f = f;
      best = psi;
    }
    if (best_f <= ctl.target_f) break;
  }

  fix_global_phase(best);
  ReconstructionResult result{DensityMatrix::from_ket(Ket(ws.num_qubits, best)), 0.0,
                              used, false, opts.seed};
  result.residual = std::sqrt(best_f);
  result.converged = result.residual <= opts.tolerance;
  return result;
}

ReconstructionResult reconstruct_maxent(const RdmSet& targets, double tolerance) {
  MaxentOptions opts;
  opts.tolerance = tolerance;
  return reconstruct_maxent(targets, opts);
}

ReconstructionResult reconstruct_maxent(const RdmSet& targets, const MaxentOptions& opts) {
  const PairWorkspace ws(targets);
  const int n = ws.num_qubits;
  const int d = ws.dim;
  const std::vector<long> strings = pauli_strings_up_to_weight(n, 2);
  const int nparams = static_cast<int>(strings.size());
  std::vector<Matrix> basis;
  basis.reserve(strings.size());
  for (long s : strings) basis.push_back(pauli_string_matrix(n, s));

  struct GibbsPoint {
    Matrix rho, u;
    RealVector eigs, weights;
    double z = 0.0;
  };
  auto gibbs = [&](const RealVector& h) {
    Matrix hmat = Matrix::Zero(d, d);
    for (int k = 0; k < nparams; ++k)
      if (h(k) != 0.0) hmat += h(k) * basis[k];
    const EigResult eig = hermitian_eig(hmat);
    GibbsPoint pt;
    pt.u = eig.eigenvectors;
    pt.eigs = eig.eigenvalues;
    const double shift = pt.eigs.minCoeff();
    pt.weights.resize(d);
    for (int i = 0; i < d; ++i) pt.weights(i) = std::exp(-(pt.eigs(i) - shift));
    pt.z = pt.weights.sum();
    pt.rho = pt.u * (pt.weights / pt.z).asDiagonal() * pt.u.adjoint();
    pt.rho = (pt.rho + pt.rho.adjoint().eval()) / 2.0;
    return pt;
  };

  // d rho in direction B_k through the eigenbasis: dA = U(-B~ o phi)U* with
  // phi the divided difference of exp(-x), then d rho = dA/Z - A Tr(dA)/Z^2.
  Matrix phi(d, d);
  auto jacobian = [&](const GibbsPoint& pt, Eigen::MatrixXd& jac) {
    jac.resize(ws.rows, nparams);
    const double shift = pt.eigs.minCoeff();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double di = pt.eigs(i) - shift;
        const double dj = pt.eigs(j) - shift;
        phi(i, j) = (std::abs(di - dj) < 1e-9)
                        ? std::exp(-(di + dj) / 2.0)
                        : (std::exp(-di) - std::exp(-dj)) / (dj - di);
      }
    const Matrix a_shifted = pt.u * pt.weights.asDiagonal() * pt.u.adjoint();
    for (int k = 0; k < nparams; ++k) {
      const Matrix btilde = pt.u.adjoint() * (basis[k] * pt.u);
      const Matrix da = pt.u * (-btilde.cwiseProduct(phi)) * pt.u.adjoint();
      const double trda = da.trace().real();
      const Matrix drho = da / pt.z - a_shifted * (trda / (pt.z * pt.z));
      int row = 0;
      for (const auto& pd : ws.pairs) {
        for (int a = 0; a < 4; ++a)
          for (int c = 0; c < 4; ++c) {
            Complex s = 0.0;
            for (int e = 0; e < ws.env_dim; ++e) s += drho(pd.idx[e][a], pd.idx[e][c]);
            jac(row++, k) = s.real();
            jac(row++, k) = s.imag();
          }
      }
    }
  };

  RealVector h = RealVector::Zero(nparams);
  GibbsPoint pt = gibbs(h);  // H = 0: the maximally mixed starting point
  Eigen::VectorXd r, rt, g, step;
  double f = ws.residual_density(pt.rho, r);
  const double target_f = opts.tolerance * opts.tolerance;
  double lambda = 1e-3;
  Eigen::MatrixXd jac, normal, normal_reg;
  std::vector<double> history{f};

  for (int iter = 0; iter < opts.max_iterations && f > target_f; ++iter) {
    jacobian(pt, jac);
    normal = jac.transpose() * jac;
    g = jac.transpose() * r;

    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      normal_reg = normal;
      for (int i = 0; i < nparams; ++i) normal_reg(i, i) += lambda;
      step = normal_reg.ldlt().solve(-g);
      const RealVector ht = h + step;
      GibbsPoint trial = gibbs(ht);
      const double ft = ws.residual_density(trial.rho, rt);
      if (ft < f) {
        h = ht;
        pt = std::move(trial);
        r.swap(rt);
        f = ft;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;

    history.push_back(f);
    if (static_cast<int>(history.size()) > 51) {
      history.erase(history.begin());
      const double before = history.front();
      if (before - f < 1e-12 * std::max(before, 1e-300)) break;
    }
  }

  ReconstructionResult result{DensityMatrix(n, pt.rho), 0.0, 1, false, 0};
  result.residual = std::sqrt(f);
  result.converged = result.residual <= opts.tolerance;
  return result;
}

std::optional<DensityMatrix> witness_not_uda(const Ket& psi, const RdmSet& targets) {
  const DensityMatrix rho_psi = DensityMatrix::from_ket(psi);

  // Route 1: the symmetric (c0, c2, c4) family with a separable marginal.
  if (psi.num_qubits == 4) {
    Complex cj[5];
    double in_family = 0.0;
    for (int j = 0; j <= 4; ++j) {
      cj[j] = dicke(4, j).amps.dot(psi.amps);
      in_family += std::norm(cj[j]);
    }
    Complex anchor = cj[0];
    for (int j : {2, 4})
      if (std::abs(cj[j]) > std::abs(anchor)) anchor = cj[j];
    const Complex phase = (std::abs(anchor) > 0.0) ? std::conj(anchor) / std::abs(anchor)
                                                   : Complex(1.0, 0.0);
    const Complex c0 = cj[0] * phase, c2 = cj[2] * phase, c4 = cj[4] * phase;
    const bool family = std::abs(in_family - 1.0) <= 1e-8 &&
                        std::abs(cj[1]) <= 1e-8 && std::abs(cj[3]) <= 1e-8 &&
                        std::abs(c0.imag()) <= 1e-8 && std::abs(c2.imag()) <= 1e-8 &&
                        std::abs(c4.imag()) <= 1e-8;
    if (family) {
      const double norm = std::sqrt(std::norm(c0) + std::norm(c2) + std::norm(c4));
      const SymmetricParams p = SymmetricParams::from_coeffs(
          c0.real() / norm, c2.real() / norm, c4.real() / norm);
      const SymmetricRdmForm form = closed_form_rdm(p);
      if (ppt_test(p).inequalities_hold && form.a > 0.0 && form.b > 0.0) {
        const DensityMatrix rho4 = build_counterexample(separable_decomposition(p));
        if (rdm_residual(rho4, targets) <= 1e-8 &&
            fidelity(rho4, rho_psi) <= 1.0 - 1e-6)
          return rho4;
      }
    }
  }

  // Route 2: max-entropy search over the Gibbs family.
  MaxentOptions mopts;
  mopts.tolerance = 1e-9;
  mopts.max_iterations = 500;
  const ReconstructionResult r = reconstruct_maxent(targets, mopts);
  if (r.residual <= 1e-8 && fidelity(r.state, rho_psi) <= 1.0 - 1e-6) return r.state;
  return std::nullopt;
}

}  // namespace rdmtomo
