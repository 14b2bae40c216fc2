#include "robust_merton/market.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace robust_merton {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void require_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma > kGammaCeiling) {
    throw Error(ErrorKind::InvalidProfile,
                "gamma must be finite and below 1 - 1e-8, got " + fmt_num(gamma));
  }
}

MarketModel::MarketModel(Matrix sigma, double r, double horizon, double x0)
    : sigma_(std::move(sigma)), r_(r), horizon_(horizon), x0_(x0) {
  const auto d = sigma_.rows();
  const auto m = sigma_.cols();
  if (d < 2) {
    throw Error(ErrorKind::InvalidMarket, "need at least 2 risky assets, got d=" + std::to_string(d));
  }
  if (m < d) {
    throw Error(ErrorKind::InvalidMarket, "Brownian dimension m=" + std::to_string(m) +
                                              " is smaller than d=" + std::to_string(d));
  }
  if (!std::isfinite(r_)) throw Error(ErrorKind::InvalidMarket, "r must be finite");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw Error(ErrorKind::InvalidMarket, "horizon T must be positive, got " + fmt_num(horizon_));
  }
  if (!(x0_ > 0.0) || !std::isfinite(x0_)) {
    throw Error(ErrorKind::InvalidMarket, "initial wealth x0 must be positive, got " + fmt_num(x0_));
  }
  if (!all_finite(sigma_)) throw Error(ErrorKind::InvalidMarket, "sigma has non-finite entries");

  Eigen::JacobiSVD<Matrix> svd(sigma_);
  const Vector& s = svd.singularValues();
  const double s_max = s(0);
  const double s_min = s(s.size() - 1);
  if (!(s_max > 0.0) || !(s_min > kRankTolerance * s_max)) {
    throw Error(ErrorKind::InvalidMarket,
                "sigma is rank deficient (smallest singular value " + fmt_num(s_min) +
                    ", largest " + fmt_num(s_max) + ")");
  }
  covariance_ = sigma_ * sigma_.transpose();
}

InvestorProfile::InvestorProfile(double gamma, double h) : gamma_(gamma), h_(h) {
  require_gamma(gamma_);
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    throw Error(ErrorKind::InvalidProfile, "constraint level h must be positive, got " + fmt_num(h_));
  }
}

UncertaintySet::UncertaintySet(Vector nu, Matrix shape, double kappa)
    : nu_(std::move(nu)), shape_(std::move(shape)), kappa_(kappa) {
  const auto d = nu_.size();
  if (shape_.rows() != d || shape_.cols() != d) {
    throw Error(ErrorKind::InvalidUncertainty, "Gamma must be " + std::to_string(d) + "x" +
                                                   std::to_string(d) + " to match nu");
  }
  if (!nu_.allFinite() || !shape_.allFinite()) {
    throw Error(ErrorKind::InvalidUncertainty, "nu and Gamma must be finite");
  }
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) {
    throw Error(ErrorKind::InvalidRadius, "kappa must be a finite non-negative number, got " +
                                              fmt_num(kappa_));
  }
  const double scale = 1.0 + shape_.cwiseAbs().maxCoeff();
  const double asym = (shape_ - shape_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw Error(ErrorKind::InvalidUncertainty,
                "Gamma is not symmetric (max asymmetry " + fmt_num(asym) + ")");
  }
  shape_ = 0.5 * (shape_ + shape_.transpose()).eval();
  Eigen::LLT<Matrix> llt(shape_);
  if (llt.info() != Eigen::Success || !(llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all()) {
    throw Error(ErrorKind::InvalidUncertainty, "Gamma is not positive definite");
  }
}

UncertaintySet UncertaintySet::with_kappa(double kappa) const { return {nu_, shape_, kappa}; }

double UncertaintySet::mahalanobis_sq(const Vector& mu) const {
  const Vector diff = mu - nu_;
  return diff.dot(shape_.llt().solve(diff));
}

Matrix build_difference_matrix(int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "difference matrix needs d >= 2, got " + std::to_string(d));
  }
  Matrix D = Matrix::Zero(d - 1, d);
  D.leftCols(d - 1).setIdentity();
  D.col(d - 1).setConstant(-1.0);
  return D;
}

ConstraintGeometry build_constraint_geometry(const MarketModel& market) {
  const int d = market.d();
  const Matrix D = build_difference_matrix(d);
  const Matrix& S = market.covariance();

  // (D sigma)^T = Q R, so (D S D^T)^{-1} = R^{-1} R^{-T} and A = B^T B with
  // B = R^{-T} D. Avoids forming D S D^T, whose condition number is squared.
  const Matrix reduced_t = (D * market.sigma()).transpose();
  Eigen::HouseholderQR<Matrix> qr(reduced_t);
  const Matrix R = qr.matrixQR().topRows(d - 1).triangularView<Eigen::Upper>();
  const Vector r_diag = R.diagonal().cwiseAbs();
  if (!(r_diag.minCoeff() > kRankTolerance * r_diag.maxCoeff())) {
    throw Error(ErrorKind::SingularGeometry, "D sigma sigma^T D^T is numerically singular");
  }
  const Matrix B = R.transpose().triangularView<Eigen::Lower>().solve(D);
  Matrix A = B.transpose() * B;
  if (!A.allFinite()) {
    throw Error(ErrorKind::SingularGeometry, "D sigma sigma^T D^T is numerically singular");
  }

  Vector e_d = Vector::Zero(d);
  e_d(d - 1) = 1.0;
  Vector c = e_d - A * (S * e_d);
  return {D, std::move(A), std::move(c)};
}

double IdentityReport::max_deviation() const {
  return std::max({kernel, idempotence, c_orthogonality, c_sum});
}

IdentityReport check_identities(const ConstraintGeometry& geometry, const MarketModel& market,
                                double tol) {
  const Matrix& A = geometry.A;
  const Vector& c = geometry.c;
  const Matrix& S = market.covariance();
  const Vector ones = Vector::Ones(A.rows());

  IdentityReport report;
  report.kernel = (A * ones).cwiseAbs().maxCoeff();
  report.idempotence = (A * S * A - A).cwiseAbs().maxCoeff();
  report.c_orthogonality = (c.transpose() * S * A).cwiseAbs().maxCoeff();
  report.c_sum = std::abs(c.sum() - 1.0);
  report.tolerance = tol;
  return report;
}

double LogSpaceUtility::value() const {
  if (gamma == 0.0) return exponent;
  return gamma > 0.0 ? std::exp(exponent) : -std::exp(exponent);
}

double LogSpaceUtility::certainty_equivalent() const {
  if (gamma == 0.0) return std::exp(exponent);
  return std::exp((std::log(std::abs(gamma)) + exponent) / gamma);
}

LogSpaceUtility expected_utility_log(const MarketModel& market, const Vector& pi, const Vector& mu,
                                     double gamma) {
  require_gamma(gamma);
  const int d = market.d();
  if (pi.size() != d || mu.size() != d) {
    throw Error(ErrorKind::InvalidDimension, "pi and mu must have dimension " + std::to_string(d));
  }
  const double T = market.horizon();
  const double r = market.r();
  const double vol_sq = (market.sigma().transpose() * pi).squaredNorm();
  const double excess = pi.dot(mu) - r * pi.sum();
  const double growth = r + excess - 0.5 * vol_sq;

  if (gamma == 0.0) {
    return {0.0, std::log(market.x0()) + T * growth};
  }
  const double exponent = gamma * std::log(market.x0()) + gamma * T * growth +
                          0.5 * gamma * gamma * T * vol_sq - std::log(std::abs(gamma));
  return {gamma, exponent};
}

double expected_utility_constant(const MarketModel& market, const Vector& pi, const Vector& mu,
                                 double gamma) {
  return expected_utility_log(market, pi, mu, gamma).value();
}

double certainty_equivalent(double value, double gamma) {
  require_gamma(gamma);
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::OutOfRange, "utility value must be finite, got " + fmt_num(value));
  }
  if (gamma == 0.0) return std::exp(value);
  if (gamma > 0.0 && !(value > 0.0)) {
    throw Error(ErrorKind::OutOfRange,
                "power utility with gamma in (0,1) takes positive values only, got " + fmt_num(value));
  }
  if (gamma < 0.0 && !(value < 0.0)) {
    throw Error(ErrorKind::OutOfRange,
                "power utility with gamma < 0 takes negative values only, got " + fmt_num(value));
  }
  return std::pow(gamma * value, 1.0 / gamma);
}

bool bond_only_optimal(const UncertaintySet& uncertainty, double r) {
  const Vector bond_drift = Vector::Constant(uncertainty.d(), r);
  const double k = uncertainty.kappa();
  return uncertainty.mahalanobis_sq(bond_drift) <= k * k;
}

}  // namespace robust_merton
