#include "physprop/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "physprop/errors.hpp"
#include "physprop/homography.hpp"

namespace physprop {

namespace {

Eigen::VectorXd smooth3(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - 1);
    const int hi = std::min(n - 1, i + 1);
    s[i] = y.segment(lo, hi - lo + 1).mean();
  }
  return s;
}

struct Quadratic {
  double a = 0, b = 0, c = 0;
  double operator()(double t) const { return (a * t + b) * t + c; }
  double vertex_value() const { return c - b * b / (4.0 * a); }
};

// Least-squares quadratic through (t_i, y_i); exact when the data lie on one.
Quadratic fit_quadratic(const std::vector<double>& t, const std::vector<double>& y) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = t[i] * t[i];
    a(i, 1) = t[i];
    a(i, 2) = 1.0;
    rhs(i) = y[i];
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  return {sol(0), sol(1), sol(2)};
}

// Least squares for b, c with the quadratic coefficient held fixed.
Quadratic fit_quadratic_shared_curvature(const std::vector<double>& t,
                                         const std::vector<double>& y, double a) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd m(n, 2);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    m(i, 0) = t[i];
    m(i, 1) = 1.0;
    rhs(i) = y[i] - a * t[i] * t[i];
  }
  const Eigen::Vector2d sol = m.colPivHouseholderQr().solve(rhs);
  return {a, sol(0), sol(1)};
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw InsufficientSamplesError("degenerate time axis");
  return sxy / sxx;
}

}  // namespace

NormalizedTrajectory normalize_trajectory(const Eigen::VectorXd& y_pixels,
                                          double noise_sigma) {
  const int n = static_cast<int>(y_pixels.size());
  if (n < 4) throw NoBounceError("series too short for descent plus ascent");

  const Eigen::VectorXd ys = smooth3(y_pixels);
  const double range = ys[0] - ys.minCoeff();
  if (!(range > 0)) throw NoBounceError("no initial descent");

  // First local minimum after the initial descent. A candidate must sit in
  // the lower part of the descent: noise wiggles can only form minima where
  // the fall is still slow (the very top), while the true contact is near
  // the bottom of the range.
  const double descent_gate = ys[0] - 0.6 * range;
  int contact = -1;
  for (int i = 1; i + 1 < n; ++i) {
    if (ys[i] <= ys[i - 1] && ys[i] < ys[i + 1] && ys[i] <= descent_gate) {
      contact = i;
      break;
    }
  }
  if (contact < 0) throw NoBounceError("no ground contact followed by ascent");
  // The smoothed minimum can sit one frame off the raw one; anchor on the raw
  // minimum inside the smoothing window.
  for (int i = std::max(0, contact - 1); i <= std::min(n - 1, contact + 1); ++i)
    if (y_pixels[i] < y_pixels[contact]) contact = i;
  if (contact < 1 || contact + 1 >= n) throw NoBounceError("contact at the series edge");

  int peak = -1;
  for (int i = contact + 1; i + 1 < n; ++i) {
    if (ys[i] >= ys[i - 1] && ys[i] > ys[i + 1]) {
      peak = i;
      break;
    }
  }
  if (peak < 0) throw NoBounceError("no bounce peak after contact");
  for (int i = std::max(contact + 1, peak - 1); i <= std::min(n - 1, peak + 1); ++i)
    if (y_pixels[i] > y_pixels[peak]) peak = i;
  if (!(y_pixels[peak] - y_pixels[contact] > 3.0 * noise_sigma))
    throw NoBounceError("ascent does not exceed the noise floor");

  const double span = y_pixels[0] - y_pixels[contact];
  if (!(span > 0)) throw NoBounceError("drop height not positive in image space");

  NormalizedTrajectory traj;
  traj.values = (y_pixels.array() - y_pixels[contact]) / span;
  traj.drop_idx = 0;
  traj.contact_idx = contact;
  traj.peak_idx = peak;
  traj.pixel_span = span;
  traj.noise_sigma = noise_sigma;
  return traj;
}

namespace {

// Sub-frame recovery of the bounce apex and the ground level. The time unit
// is the frame index (sampling is uniform); every quantity used downstream
// is a ratio, so units cancel.
double refined_height_ratio(const NormalizedTrajectory& traj) {
  const Eigen::VectorXd& v = traj.values;
  const int n = static_cast<int>(v.size());
  const int c = traj.contact_idx;
  const int p = traj.peak_idx;
  const double sigma_n =
      traj.pixel_span > 0 ? traj.noise_sigma / traj.pixel_span : 0.0;

  // Free-fall parabola through the tail of the descent. The samples at c-1
  // and c can straddle the impact, so stop two frames short of the detected
  // contact; fitting only the last stretch keeps the fit local, where the
  // projective image of the fall is quadratic to high order.
  std::vector<double> td, yd;
  const int descent_end = c - 2;
  const int descent_start = std::max(0, descent_end - 11);
  for (int i = descent_start; i <= descent_end; ++i) {
    td.push_back(i);
    yd.push_back(v[i]);
  }
  if (td.size() < 3) throw NoBounceError("descent too short to fit");
  const Quadratic q_descent = fit_quadratic(td, yd);
  if (!(q_descent.a < 0)) throw NoBounceError("descent is not a free fall");

  // First-flight samples: from just past the contact until the flight ends.
  // Past the peak the values must keep falling strictly; the first rise (the
  // next bounce) or flattening (the rest tail) marks the second impact, as
  // does dropping below the contact level. Pre-peak dips are kept.
  const double above = v[c] - 3.0 * sigma_n - 1e-12;
  const double slack = 3.0 * sigma_n + 1e-12;
  const int cap = std::min(n - 1, c + 2 * std::max(1, p - c) + 2);
  std::vector<double> tb, yb;
  for (int j = c + 1; j <= cap; ++j) {
    if (j > p && (v[j] < above || v[j] >= v[j - 1] - slack)) break;
    tb.push_back(j);
    yb.push_back(v[j]);
  }
  if (tb.empty()) throw NoBounceError("bounce has no interior samples");

  Quadratic q_bounce;
  if (tb.size() >= 2) {
    // A trailing sample can belong to the next flight or the rest tail
    // (still descending past the second impact); trim while the worst
    // residual says a point is off the flight parabola.
    for (;;) {
      if (tb.size() >= 4) {
        q_bounce = fit_quadratic(tb, yb);
        if (!(q_bounce.a < 0)) q_bounce = fit_quadratic_shared_curvature(tb, yb, q_descent.a);
      } else {
        // Too few samples to see the curvature; gravity is the same on
        // both sides of the impact, so reuse the descent curvature.
        q_bounce = fit_quadratic_shared_curvature(tb, yb, q_descent.a);
      }
      double max_res = 0;
      for (std::size_t i = 0; i < tb.size(); ++i)
        max_res = std::max(max_res, std::abs(q_bounce(tb[i]) - yb[i]));
      if (max_res <= std::max(5.0 * sigma_n, 1e-9) || tb.size() <= 2) break;
      tb.pop_back();
      yb.pop_back();
    }
  } else {
    // A single interior sample. Short bounces like this finish well before
    // the window ends, so the rest tail gives the ground level; constrain
    // the bounce parabola through the impact point on that level.
    const int k = std::min(5, n - c - 1);
    const double tail = v.tail(k).mean();
    const double tail_spread = v.tail(k).maxCoeff() - v.tail(k).minCoeff();
    if (tail_spread > std::max(6.0 * sigma_n, 1e-9))
      throw NoBounceError("single-sample bounce without a rest tail");
    const double a = q_descent.a;
    const double disc = q_descent.b * q_descent.b - 4 * a * (q_descent.c - tail);
    if (disc < 0) throw NoBounceError("descent never reaches the rest level");
    const double t_c = (-q_descent.b - std::sqrt(disc)) / (2 * a);  // a < 0: larger root
    const double t1 = tb[0];
    if (std::abs(t1 - t_c) < 1e-9) throw NoBounceError("bounce sample sits on the impact");
    const double slope = (yb[0] - tail - a * (t1 - t_c) * (t1 - t_c)) / (t1 - t_c);
    // q_b(t) = a (t - t_c)^2 + slope (t - t_c) + tail, expanded.
    q_bounce = {a, slope - 2 * a * t_c, a * t_c * t_c - slope * t_c + tail};
  }

  // Ground level: where the descent and bounce parabolas intersect near the
  // detected contact.
  double ground = v[c];
  {
    const double da = q_descent.a - q_bounce.a;
    const double db = q_descent.b - q_bounce.b;
    const double dc = q_descent.c - q_bounce.c;
    double t_c = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(da) < 1e-14) {
      if (std::abs(db) > 1e-14) t_c = -dc / db;
    } else {
      const double disc = db * db - 4 * da * dc;
      if (disc >= 0) {
        const double r1 = (-db + std::sqrt(disc)) / (2 * da);
        const double r2 = (-db - std::sqrt(disc)) / (2 * da);
        t_c = std::abs(r1 - c) < std::abs(r2 - c) ? r1 : r2;
      }
    }
    if (std::isfinite(t_c) && std::abs(t_c - c) <= 2.5) ground = q_bounce(t_c);
  }

  const double apex = q_bounce.a < 0 ? q_bounce.vertex_value() : *std::max_element(yb.begin(), yb.end());
  const double denom = 1.0 - ground;  // drop level is 1 by normalization
  if (!(denom > 0.1)) throw NoBounceError("implausible ground level");
  return (apex - ground) / denom;
}

}  // namespace

Estimate estimate_elasticity_ratio(const NormalizedTrajectory& traj) {
  const double ratio = refined_height_ratio(traj);
  if (!(ratio > 0)) throw NoBounceError("non-positive bounce height ratio");
  return {std::sqrt(ratio), Property::kElasticity, Estimator::kRatioOracle};
}

Estimate estimate_elasticity_peak_raw(const NormalizedTrajectory& traj) {
  const double ratio = traj.values[traj.peak_idx];
  if (!(ratio > 0)) throw NoBounceError("non-positive peak value");
  return {std::sqrt(ratio), Property::kElasticity, Estimator::kPeakRaw};
}

Estimate estimate_elasticity_gru(const NormalizedTrajectory& traj, const GruParams& model) {
  const double value = gru_forward(model, traj.values);
  return {value, Property::kElasticity, Estimator::kGru};
}

Estimate estimate_viscosity(const std::vector<double>& areas_px2,
                            const std::vector<double>& times) {
  const int n = static_cast<int>(areas_px2.size());
  if (n < 2 || times.size() != areas_px2.size())
    throw InsufficientSamplesError("area series too short");
  const double a0 = areas_px2[0];
  if (!(a0 > 0)) throw NonPositiveSlopeError("non-positive initial area");

  // Contact = first frame whose (smoothed) area exceeds the initial area by
  // 1 percent, confirmed by the following frame so a single spike cannot
  // trigger it.
  const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(areas_px2.data(), n);
  const Eigen::VectorXd as = smooth3(a);
  const double threshold = 1.01 * as[0];
  int contact = -1;
  for (int i = 1; i < n; ++i) {
    if (as[i] > threshold && (i + 1 >= n || as[i + 1] > threshold)) {
      contact = i;
      break;
    }
  }
  if (contact < 0) throw NonPositiveSlopeError("area never grows past the contact threshold");
  if (n - contact < 5) throw InsufficientSamplesError("fewer than 5 post-contact samples");

  // Normalization reference: the area at the contact instant. Before contact
  // the footprint is the constant column cross-section, so when the
  // pre-contact stretch is flat its mean recovers the contact-frame area
  // exactly; a series already growing from frame 0 has no flat stretch and
  // the first sample is the anchor.
  double ref = a0;
  if (contact >= 2) {
    const Eigen::VectorXd pre = a.head(contact);
    const double spread = pre.maxCoeff() - pre.minCoeff();
    double sigma_est = 0.0;
    for (int i = 1; i < contact; ++i) sigma_est += std::abs(a[i] - a[i - 1]);
    sigma_est = sigma_est / (contact - 1) / std::sqrt(2.0);
    if (spread <= std::max(0.002 * a0, 5.0 * sigma_est)) ref = pre.mean();
  }

  std::vector<double> t_post, a_post;
  for (int i = contact; i < n; ++i) {
    t_post.push_back(times[i]);
    a_post.push_back(areas_px2[i] / ref);
  }
  const double k = ols_slope(t_post, a_post);
  if (!(k > 0)) throw NonPositiveSlopeError("area growth slope is not positive");
  return {1.0 / k, Property::kViscosity, Estimator::kSlopeOracle};
}

namespace {

struct ParabolaFit {
  double alpha = 0;  // quadratic coefficient
  double beta0 = 0;  // velocity at the first frame
  int frames_used = 0;
};

// Shared by the rectified and naive friction paths: pick the dominant motion
// axis, cut the track at the detected stop, fit u(t) = a t^2 + b t + c.
ParabolaFit fit_sliding_parabola(const std::vector<Eigen::Vector2d>& track,
                                 const std::vector<double>& times,
                                 double displacement_threshold) {
  const int n = static_cast<int>(track.size());
  const Eigen::Vector2d total = track[n - 1] - track[0];
  const int axis = std::abs(total.x()) >= std::abs(total.y()) ? 0 : 1;

  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = track[i][axis];

  // Stop = first frame whose displacement from the previous one falls under
  // the threshold; only frames strictly before it are fitted.
  int fit_end = n;
  for (int i = 1; i < n; ++i) {
    if (std::abs(u[i] - u[i - 1]) < displacement_threshold) {
      fit_end = i;
      break;
    }
  }
  const bool stop_detected = fit_end < n;
  if (fit_end < 5) throw InsufficientSamplesError("fewer than 5 frames before the stop");

  const double t0 = times[0];
  auto fit_range = [&](int end) {
    std::vector<double> tc(end), yc(end);
    for (int i = 0; i < end; ++i) {
      tc[i] = times[i] - t0;
      yc[i] = u[i];
    }
    return fit_quadratic(tc, yc);
  };

  Quadratic q = fit_range(fit_end);
  if (!stop_detected && q.a != 0) {
    // The threshold never tripped: either the object is still moving at the
    // window end (nothing to cut) or noise hides the stop. One refinement
    // pass drops frames past the fitted vertex, where the object would
    // already be at rest.
    const double t_vertex = -q.b / (2 * q.a);
    if (t_vertex > 0 && t_vertex < times[n - 1] - t0) {
      int end = 0;
      while (end < n && times[end] - t0 <= t_vertex) ++end;
      if (end >= 5 && end < n) {
        q = fit_range(end);
        fit_end = end;
      }
    }
  }

  return {q.a, q.b, fit_end};
}

double friction_from_fit(const ParabolaFit& fit, double gravity, double time_span) {
  // Deceleration must oppose the motion: alpha and beta of opposite signs.
  if (fit.alpha * fit.beta0 > 0) {
    const double curvature_fraction =
        std::abs(fit.alpha) * time_span / std::max(std::abs(fit.beta0), 1e-12);
    if (curvature_fraction > 0.05)
      throw WrongCurvatureError("acceleration along the motion direction");
  }
  return 2.0 * std::abs(fit.alpha) / gravity;
}

}  // namespace

Estimate estimate_friction(const std::vector<CornerPixels>& corners,
                           const std::vector<double>& times, double cube_size,
                           double gravity) {
  const int n = static_cast<int>(corners.size());
  if (n < 5 || times.size() != corners.size())
    throw InsufficientSamplesError("corner track too short");
  if (has_collinear_triple(corners[0]))
    throw DegenerateConfigurationError("first-frame corners are degenerate");

  // Bird's-eye frame: the first-frame corners map to an axis-aligned square
  // of side cube_size. The top face is rigid and planar, so the same
  // homography rectifies every later frame.
  const double h = 0.5 * cube_size;
  const Quad2 square{Eigen::Vector2d{-h, -h}, Eigen::Vector2d{h, -h},
                     Eigen::Vector2d{h, h}, Eigen::Vector2d{-h, h}};
  const Homography rect = estimate_homography(corners[0], square);

  std::vector<Eigen::Vector2d> centers(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int k = 0; k < 4; ++k) c += apply_homography(rect, corners[i][k]);
    centers[i] = c / 4.0;
  }

  const ParabolaFit fit = fit_sliding_parabola(centers, times, 1e-3 * cube_size);
  const double mu = friction_from_fit(fit, gravity, times[n - 1] - times[0]);
  return {mu, Property::kFriction, Estimator::kParabolaOracle};
}

Estimate estimate_friction_naive(const std::vector<CornerPixels>& corners,
                                 const std::vector<double>& times, double cube_size,
                                 double gravity) {
  const int n = static_cast<int>(corners.size());
  if (n < 5 || times.size() != corners.size())
    throw InsufficientSamplesError("corner track too short");
  if (has_collinear_triple(corners[0]))
    throw DegenerateConfigurationError("first-frame corners are degenerate");

  // Affine shortcut: one global metric scale from the first-frame mean side
  // length, no perspective correction.
  double side = 0;
  for (int k = 0; k < 4; ++k) side += (corners[0][(k + 1) % 4] - corners[0][k]).norm();
  side /= 4.0;
  const double meters_per_px = cube_size / side;

  std::vector<Eigen::Vector2d> centers(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int k = 0; k < 4; ++k) c += corners[i][k];
    centers[i] = c / 4.0 * meters_per_px;
  }

  const ParabolaFit fit = fit_sliding_parabola(centers, times, 1e-3 * cube_size);
  const double mu = friction_from_fit(fit, gravity, times[n - 1] - times[0]);
  return {mu, Property::kFriction, Estimator::kParabolaNaive};
}

double relative_score(double e1, double e2) {
  if (!(e1 > 0) || !(e2 > 0))
    throw NonPositiveEstimateError("relative score needs positive estimates");
  // sigma(log(e1/e2)) simplifies to e1 / (e1 + e2).
  return e1 / (e1 + e2);
}

double relative_score(const Estimate& e1, const Estimate& e2) {
  return relative_score(e1.value, e2.value);
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::kRatioOracle: return "ratio-oracle";
    case Estimator::kPeakRaw: return "peak-raw";
    case Estimator::kGru: return "gru";
    case Estimator::kSlopeOracle: return "slope-oracle";
    case Estimator::kParabolaOracle: return "parabola-oracle";
    case Estimator::kParabolaNaive: return "parabola-naive";
  }
  return "?";
}

Estimator estimator_from_string(const std::string& s) {
  if (s == "ratio-oracle") return Estimator::kRatioOracle;
  if (s == "peak-raw") return Estimator::kPeakRaw;
  if (s == "gru") return Estimator::kGru;
  if (s == "slope-oracle") return Estimator::kSlopeOracle;
  if (s == "parabola-oracle") return Estimator::kParabolaOracle;
  if (s == "parabola-naive") return Estimator::kParabolaNaive;
  throw std::invalid_argument("unknown estimator: " + s);
}

Property property_of(Estimator e) {
  switch (e) {
    case Estimator::kRatioOracle:
    case Estimator::kPeakRaw:
    case Estimator::kGru: return Property::kElasticity;
    case Estimator::kSlopeOracle: return Property::kViscosity;
    case Estimator::kParabolaOracle:
    case Estimator::kParabolaNaive: return Property::kFriction;
  }
  return Property::kElasticity;
}

}  // namespace physprop
