#include "beampencil/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beampencil {

namespace {

Eigen::VectorXd jacobi_scaling(const Eigen::MatrixXd& A) {
  Eigen::VectorXd d(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (!(A(i, i) > 0.0))
      throw NumericalError("A has a non-positive diagonal entry; it cannot be positive definite");
    d[i] = 1.0 / std::sqrt(A(i, i));
  }
  return d;
}

struct Factored {
  Eigen::VectorXd d;   // Jacobi scaling
  Eigen::MatrixXd Ls;  // Cholesky factor of D A D
};

Factored factor(const Eigen::MatrixXd& A) {
  Factored f;
  f.d = jacobi_scaling(A);
  Eigen::MatrixXd As = f.d.asDiagonal() * A * f.d.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(As);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Cholesky factorization of A failed: A is not positive definite");
  f.Ls = llt.matrixL();
  return f;
}

/// L_s^{-1} (D M D) L_s^{-T}, symmetrized.
Eigen::MatrixXd congruence(const Factored& f, const Eigen::MatrixXd& M) {
  Eigen::MatrixXd Ms = f.d.asDiagonal() * M * f.d.asDiagonal();
  auto L = f.Ls.triangularView<Eigen::Lower>();
  Eigen::MatrixXd X = L.solve(Ms);
  Eigen::MatrixXd C = L.solve(X.transpose());
  return 0.5 * (C + C.transpose());
}

Spectrum spectrum_impl(const PencilMatrices& m, const Tolerances& tol, bool with_vectors) {
  const Factored f = factor(m.A);
  const Eigen::MatrixXd R = -congruence(f, m.B);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      R, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("symmetric eigen-iteration did not converge");
  const Eigen::VectorXd& mu = es.eigenvalues();  // ascending

  Spectrum s;
  s.mesh = m.mesh;
  s.dofs = m.dofs;
  s.bc = m.bc;
  const double norm = mu.size() ? std::max(std::abs(mu[0]), std::abs(mu[mu.size() - 1])) : 0.0;
  s.mu_floor = tol.mu_floor_rel * norm;

  auto make_entry = [&](Eigen::Index k) {
    SpectralEntry e;
    e.lambda = -1.0 / mu[k];
    if (with_vectors) {
      // x = L^{-T} w with L = D^{-1} L_s, so x = D L_s^{-T} w and x^T A x = |w|^2 = 1.
      Eigen::VectorXd w = es.eigenvectors().col(k);
      Eigen::VectorXd x = f.Ls.transpose().triangularView<Eigen::Upper>().solve(w);
      e.vector = f.d.asDiagonal() * x;
    }
    return e;
  };

  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    if (std::abs(mu[k]) <= s.mu_floor) {
      ++s.kernel_dimension;
      continue;
    }
    if (mu[k] < 0.0) s.positives.push_back(make_entry(k));
  }
  for (Eigen::Index k = mu.size() - 1; k >= 0; --k)
    if (mu[k] > s.mu_floor) s.negatives.push_back(make_entry(k));
  return s;
}

void mark_convergence(std::vector<SpectralEntry>& coarse, const std::vector<SpectralEntry>& fine,
                      double rel, std::size_t& run) {
  run = 0;
  bool leading = true;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    if (k < fine.size()) {
      coarse[k].drift = std::abs(coarse[k].lambda - fine[k].lambda) / std::abs(fine[k].lambda);
      coarse[k].converged = coarse[k].drift <= rel;
    }
    leading = leading && coarse[k].converged;
    if (leading) ++run;
  }
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& v) {
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (v[i] + v[i - 1]);
  return out;
}

}  // namespace

ReducedMatrix reduce(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("reduce: A and B must be square and of equal size");
  const Factored f = factor(A);
  ReducedMatrix out;
  out.R = -congruence(f, B);
  out.L = f.d.cwiseInverse().asDiagonal() * f.Ls;
  const double nb = B.norm();
  const double defect = (out.L * out.R * out.L.transpose() + B).norm();
  out.reconstruction_defect = nb > 0.0 ? defect / nb : defect;
  return out;
}

const SpectralEntry& Spectrum::at(int signed_index) const {
  if (!has(signed_index))
    throw std::out_of_range("no eigenvalue with index " + std::to_string(signed_index));
  const auto n = static_cast<std::size_t>(std::abs(signed_index));
  return signed_index < 0 ? negatives[n - 1] : positives[n - 1];
}

bool Spectrum::has(int signed_index) const {
  if (signed_index == 0) return false;
  const auto n = static_cast<std::size_t>(std::abs(signed_index));
  return signed_index < 0 ? n <= negatives.size() : n <= positives.size();
}

Spectrum pencil_spectrum(const PencilMatrices& m, const Tolerances& tol) {
  return spectrum_impl(m, tol, true);
}

Spectrum compute_spectrum(const ProblemSpec& spec, const Mesh& mesh, const Tolerances& tol) {
  Spectrum coarse = spectrum_impl(assemble_pencil(spec, mesh), tol, true);
  const Spectrum fine = spectrum_impl(assemble_pencil(spec, mesh.refined()), tol, false);
  mark_convergence(coarse.negatives, fine.negatives, tol.converged_drift_rel,
                   coarse.converged_negatives);
  mark_convergence(coarse.positives, fine.positives, tol.converged_drift_rel,
                   coarse.converged_positives);
  coarse.refined_negatives = static_cast<long>(fine.negatives.size());
  coarse.refined_positives = static_cast<long>(fine.positives.size());
  return coarse;
}

namespace {

InertiaResult count_inertia(const Eigen::VectorXd& ev, double rel_tau) {
  InertiaResult out;
  if (ev.size() == 0) return out;
  const double norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  out.tau = rel_tau * norm;
  out.min_abs_eigenvalue = ev.cwiseAbs().minCoeff();
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev[k] < -out.tau) ++out.index;
  out.near_singular = out.min_abs_eigenvalue <= out.tau;
  return out;
}

}  // namespace

InertiaResult symmetric_inertia(const Eigen::MatrixXd& M, const Eigen::VectorXd& s,
                                double rel_tau) {
  Eigen::MatrixXd Ms = s.asDiagonal() * M * s.asDiagonal();
  Ms = 0.5 * (Ms + Ms.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("inertia: eigen-iteration failed");
  return count_inertia(es.eigenvalues(), rel_tau);
}

InertiaResult inertia_index(const PencilMatrices& m, double lambda, const Tolerances& tol) {
  return count_inertia(energy_eigenvalues(m.A, m.A - lambda * m.B), tol.inertia_tau_rel);
}

Eigen::VectorXd energy_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  const Factored f = factor(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(congruence(f, M), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("energy eigenvalues: iteration failed");
  return es.eigenvalues();
}

double EigenfunctionSample::max_abs_y() const {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

double EigenfunctionSample::max_abs_dy() const {
  double m = 0.0;
  for (double v : dy) m = std::max(m, std::abs(v));
  return m;
}

EigenfunctionSample reconstruct_eigenfunction(const Spectrum& spectrum, int signed_index,
                                              const ProblemSpec& spec, std::size_t samples,
                                              bool require_converged) {
  const SpectralEntry& entry = spectrum.at(signed_index);
  if (require_converged && !entry.converged)
    throw NumericalError("eigenvalue " + std::to_string(signed_index) +
                         " is not converged under mesh doubling");
  if (samples < 3) throw std::invalid_argument("need at least 3 samples");

  Eigen::VectorXd global = spectrum.dofs.expand(entry.vector);
  HermiteFunction probe(spectrum.mesh, global);
  if (probe.on_element(0, 0.0).ddy < 0.0) global = -global;

  EigenfunctionSample out;
  out.index = signed_index;
  out.lambda = entry.lambda;
  out.fn = HermiteFunction(spectrum.mesh, std::move(global));
  out.xs.resize(samples);
  out.y.resize(samples);
  out.dy.resize(samples);
  out.ddy.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(samples - 1);
    const HermitePoint v = out.fn(x);
    out.xs[i] = x;
    out.y[i] = v.y;
    out.dy[i] = v.dy;
    out.ddy[i] = v.ddy;
  }

  // w = p y'' + lambda y - lambda c F with F'' = r y, F(0)=F'(0)=0, i.e.
  // F(x) = x \int_0^x r y - \int_0^x t r y(t) dt. w is linear for exact eigenfunctions.
  const double lambda = entry.lambda;
  std::vector<double> ry(samples), xry(samples), q(samples), w(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    ry[i] = spec.r.eval_clamped(out.xs[i]) * out.y[i];
    xry[i] = out.xs[i] * ry[i];
    q[i] = spec.p.eval_clamped(out.xs[i]) * out.ddy[i];
  }
  const auto I1 = cumulative_trapezoid(out.xs, ry);
  const auto I2 = cumulative_trapezoid(out.xs, xry);
  double sx = 0, sw = 0, sxx = 0, sxw = 0, qmax = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = out.xs[i];
    w[i] = q[i] + lambda * out.y[i] - lambda * spec.c * (x * I1[i] - I2[i]);
    sx += x;
    sw += w[i];
    sxx += x * x;
    sxw += x * w[i];
    qmax = std::max(qmax, std::abs(q[i]));
  }
  const double n = static_cast<double>(samples);
  const double slope = (n * sxw - sx * sw) / (n * sxx - sx * sx);
  const double icpt = (sw - slope * sx) / n;
  double dev = 0.0;
  for (std::size_t i = 0; i < samples; ++i)
    dev = std::max(dev, std::abs(w[i] - (icpt + slope * out.xs[i])));
  out.strong_residual = qmax > 0.0 ? dev / qmax : dev;

  if (spectrum.bc == BoundaryKind::ClampedMassEnd) {
    const double ymax = std::max(out.max_abs_y(), 1e-300);
    const double y1 = out.y.back();
    const double flux = recover_end_flux(out.fn, spec.p, [&](std::size_t, double x,
                                                             const HermitePoint& v) {
      return lambda * (-v.ddy + spec.c * spec.r.eval_clamped(x) * v.y);
    });
    out.natural_defect = std::abs(flux + lambda * spec.alpha * y1) / ymax;

    const std::size_t e = spectrum.mesh.n_elements() - 1;
    const double h = spectrum.mesh.width(e);
    const HermitePoint end = out.fn.on_element(e, 1.0);
    const double dp = (spec.p.eval_clamped(1.0) - spec.p.eval_clamped(1.0 - h)) / h;
    const double flux_el = spec.p.eval_clamped(1.0) * end.d3y + dp * end.ddy;
    out.natural_defect_element = std::abs(flux_el + lambda * spec.alpha * y1) / ymax;
  }
  return out;
}

}  // namespace beampencil
