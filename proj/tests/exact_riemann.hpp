#pragma once

#include <cmath>

namespace zfr::testing {

/// Exact solution of the 1-D Euler Riemann problem (two-rarefaction /
/// two-shock pressure function solved by Newton iteration), sampled at x/t.
struct ExactRiemann {
  double gamma = 1.4;
  double rl, ul, pl, rr, ur, pr;

  struct Sample {
    double rho, u, p;
  };

  double f(double p, double rk, double pk, double ck) const {
    if (p > pk) {
      const double A = 2.0 / ((gamma + 1.0) * rk);
      const double B = (gamma - 1.0) / (gamma + 1.0) * pk;
      return (p - pk) * std::sqrt(A / (p + B));
    }
    return 2.0 * ck / (gamma - 1.0) * (std::pow(p / pk, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
  }

  double star_pressure() const {
    const double cl = std::sqrt(gamma * pl / rl), cr = std::sqrt(gamma * pr / rr);
    double p = 0.5 * (pl + pr);
    for (int it = 0; it < 200; ++it) {
      const double h = 1e-7 * p;
      const double g = f(p, rl, pl, cl) + f(p, rr, pr, cr) + ur - ul;
      const double dg = (f(p + h, rl, pl, cl) + f(p + h, rr, pr, cr) - f(p - h, rl, pl, cl) - f(p - h, rr, pr, cr)) /
                        (2.0 * h);
      const double next = std::max(1e-12, p - g / dg);
      if (std::abs(next - p) < 1e-14 * p) return next;
      p = next;
    }
    return p;
  }

  Sample sample(double s) const {
    const double g = gamma;
    const double cl = std::sqrt(g * pl / rl), cr = std::sqrt(g * pr / rr);
    const double ps = star_pressure();
    const double us = 0.5 * (ul + ur) + 0.5 * (f(ps, rr, pr, cr) - f(ps, rl, pl, cl));
    if (s <= us) {
      if (ps > pl) {
        const double SL = ul - cl * std::sqrt((g + 1) / (2 * g) * ps / pl + (g - 1) / (2 * g));
        if (s <= SL) return {rl, ul, pl};
        const double r = rl * ((ps / pl + (g - 1) / (g + 1)) / ((g - 1) / (g + 1) * ps / pl + 1));
        return {r, us, ps};
      }
      const double csl = cl * std::pow(ps / pl, (g - 1) / (2 * g));
      if (s <= ul - cl) return {rl, ul, pl};
      if (s >= us - csl) return {rl * std::pow(ps / pl, 1 / g), us, ps};
      const double u = 2 / (g + 1) * (cl + (g - 1) / 2 * ul + s);
      const double c = 2 / (g + 1) * (cl + (g - 1) / 2 * (ul - s));
      const double r = rl * std::pow(c / cl, 2 / (g - 1));
      return {r, u, pl * std::pow(c / cl, 2 * g / (g - 1))};
    }
    if (ps > pr) {
      const double SR = ur + cr * std::sqrt((g + 1) / (2 * g) * ps / pr + (g - 1) / (2 * g));
      if (s >= SR) return {rr, ur, pr};
      const double r = rr * ((ps / pr + (g - 1) / (g + 1)) / ((g - 1) / (g + 1) * ps / pr + 1));
      return {r, us, ps};
    }
    const double csr = cr * std::pow(ps / pr, (g - 1) / (2 * g));
    if (s >= ur + cr) return {rr, ur, pr};
    if (s <= us + csr) return {rr * std::pow(ps / pr, 1 / g), us, ps};
    const double u = 2 / (g + 1) * (-cr + (g - 1) / 2 * ur + s);
    const double c = 2 / (g + 1) * (cr - (g - 1) / 2 * (ur - s));
    const double r = rr * std::pow(c / cr, 2 / (g - 1));
    return {r, u, pr * std::pow(c / cr, 2 * g / (g - 1))};
  }
};

}  // namespace zfr::testing
