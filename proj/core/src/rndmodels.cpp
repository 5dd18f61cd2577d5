#include "densitybench/rndmodels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "densitybench/optim.hpp"
#include "densitybench/spline.hpp"
#include "densitybench/stats.hpp"

namespace dbench::rnd {

namespace {

// Quoted mids are discounted; implied vols are taken against the
// undiscounted forward value with the diffusion year fraction.
double implied_vol_of_quote(const market::CrossSection& cs, const Horizon& h,
                            const market::QuoteEntry& q) {
  const double undisc = q.mid * std::exp(cs.rate * h.tau_disc);
  return pricing::black76_implied_vol(undisc, cs.futures, q.strike, 0.0,
                                      h.tau_vol, pricing::OptionKind::Call);
}

}  // namespace

double atm_vol(const market::CrossSection& cs, const Horizon& h) {
  if (cs.quotes.size() < 2)
    throw std::invalid_argument("atm_vol: need at least 2 quotes");
  const double F = cs.futures;

  // Exact ATM quote short-circuits the interpolation.
  for (const auto& q : cs.quotes)
    if (q.strike == F) return implied_vol_of_quote(cs, h, q);

  const auto above = std::find_if(cs.quotes.begin(), cs.quotes.end(),
                                  [F](const auto& q) { return q.strike > F; });
  if (above == cs.quotes.begin())
    return implied_vol_of_quote(cs, h, cs.quotes.front());
  if (above == cs.quotes.end())
    return implied_vol_of_quote(cs, h, cs.quotes.back());
  const auto& lo = *std::prev(above);
  const auto& hi = *above;
  const double vlo = implied_vol_of_quote(cs, h, lo);
  const double vhi = implied_vol_of_quote(cs, h, hi);
  const double t = (F - lo.strike) / (hi.strike - lo.strike);
  return vlo + t * (vhi - vlo);
}

ForecastDensity lognormal_rnd(double F, double sigma, double tau_vol,
                              const GridSpec& grid, Date obs_date,
                              Date expiry) {
  if (!(sigma > 0.0) || !(tau_vol > 0.0) || !(F > 0.0))
    throw std::invalid_argument("lognormal_rnd: invalid inputs");
  ForecastDensity d;
  d.grid = grid;
  d.x = grid.points();
  d.f_anchor = F;
  d.obs_date = obs_date;
  d.expiry = expiry;
  const double sd = sigma * std::sqrt(tau_vol);
  const double m = -0.5 * sd * sd;  // martingale mean in log-return space
  d.cdf.resize(d.x.size());
  d.pdf.resize(d.x.size());
  for (std::size_t j = 0; j < d.x.size(); ++j) {
    const double z = (d.x[j] - m) / sd;
    d.cdf[j] = stats::norm_cdf(z);
    d.pdf[j] = stats::norm_pdf(z) / sd;
  }
  return d;
}

namespace {

std::vector<double> decode_params(RndModel m, const std::vector<double>& t) {
  std::vector<double> p;
  switch (m) {
    case RndModel::Heston:
      p = {std::exp(t[0]), std::exp(t[1]), std::exp(t[2]),
           0.999 * std::tanh(t[3]), std::exp(t[4])};
      break;
    case RndModel::Bates:
      p = {std::exp(t[0]), std::exp(t[1]), std::exp(t[2]),
           0.999 * std::tanh(t[3]), std::exp(t[4]),
           std::exp(t[5]), 0.95 * std::tanh(t[6]), std::exp(t[7])};
      break;
    case RndModel::Vg:
      p = {std::exp(t[0]), std::exp(t[1]), t[2]};
      break;
    default:
      throw std::invalid_argument("model has no SRE calibration");
  }
  return p;
}

std::vector<double> encode_params(RndModel m, const std::vector<double>& p) {
  auto atanh_c = [](double x, double c) { return std::atanh(std::clamp(x / c, -0.999999, 0.999999)); };
  switch (m) {
    case RndModel::Heston:
      return {std::log(p[0]), std::log(p[1]), std::log(p[2]),
              atanh_c(p[3], 0.999), std::log(p[4])};
    case RndModel::Bates:
      return {std::log(p[0]), std::log(p[1]), std::log(p[2]),
              atanh_c(p[3], 0.999), std::log(p[4]),
              std::log(std::max(p[5], 1e-6)), atanh_c(p[6], 0.95),
              std::log(std::max(p[7], 1e-6))};
    case RndModel::Vg:
      return {std::log(p[0]), std::log(p[1]), p[2]};
    default:
      throw std::invalid_argument("model has no SRE calibration");
  }
}

bool params_admissible(RndModel m, const std::vector<double>& p) {
  try {
    make_cf(m, p, 100.0, 0.1);  // validation happens in the CF factory
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

}  // namespace

pricing::CharFn make_cf(RndModel model, const std::vector<double>& params,
                        double F, double tau_vol) {
  switch (model) {
    case RndModel::Heston: {
      pricing::HestonParams h{params.at(0), params.at(1), params.at(2),
                              params.at(3), params.at(4)};
      return pricing::cf_heston(h, F, tau_vol);
    }
    case RndModel::Bates: {
      pricing::BatesParams b;
      b.heston = {params.at(0), params.at(1), params.at(2), params.at(3),
                  params.at(4)};
      b.lambda = params.at(5);
      b.mu_j = params.at(6);
      b.nu_j = params.at(7);
      return pricing::cf_bates(b, F, tau_vol);
    }
    case RndModel::Vg: {
      pricing::VGParams v{params.at(0), params.at(1), params.at(2)};
      return pricing::cf_vg(v, F, tau_vol);
    }
    default:
      throw std::invalid_argument("model has no characteristic function");
  }
}

SreFit calibrate_sre(RndModel model, const market::CrossSection& cs,
                     const Horizon& h, const CalibOptions& opts) {
  if (cs.quotes.size() < 8)
    throw std::invalid_argument("calibrate_sre: cross-section below 8 quotes");
  const double F = cs.futures;
  const double disc = std::exp(-cs.rate * h.tau_disc);

  std::vector<double> strikes, mids;
  for (const auto& q : cs.quotes) {
    strikes.push_back(q.strike);
    mids.push_back(q.mid);
  }

  auto sre_of = [&](const std::vector<double>& p,
                    std::vector<double>* per_opt) -> double {
    // VG feasibility and other admissibility constraints are hard: the
    // pricer is never invoked for inadmissible candidates.
    if (!params_admissible(model, p)) return 1e300;
    pricing::CfPricer pricer(make_cf(model, p, F, h.tau_vol), F, 0.0,
                             h.tau_vol, 4.0);
    double s = 0.0;
    if (per_opt) per_opt->clear();
    for (std::size_t i = 0; i < strikes.size(); ++i) {
      const double model_px = disc * pricer.call(strikes[i]);
      const double err = std::abs(mids[i] - model_px) / mids[i];
      if (per_opt) per_opt->push_back(err);
      s += err;
    }
    return s;
  };

  auto objective = [&](const std::vector<double>& t) {
    return sre_of(decode_params(model, t), nullptr);
  };

  // Multi-starts drawn from fixed boxes (loguniform for scale parameters).
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto logu = [&](double lo, double hi) {
    return lo * std::pow(hi / lo, U(rng));
  };
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };

  std::vector<std::vector<double>> starts;
  for (int s = 0; s < opts.n_starts; ++s) {
    std::vector<double> p;
    switch (model) {
      case RndModel::Heston:
        p = {logu(0.5, 10.0), logu(0.005, 0.5), logu(0.05, 2.0),
             uni(-0.95, 0.2), logu(0.005, 0.5)};
        break;
      case RndModel::Bates:
        p = {logu(0.5, 10.0), logu(0.005, 0.5), logu(0.05, 2.0),
             uni(-0.95, 0.2), logu(0.005, 0.5),
             uni(0.01, 3.0), uni(-0.3, 0.1), uni(0.01, 0.5)};
        break;
      case RndModel::Vg:
        p = {logu(0.05, 0.6), logu(0.01, 2.0), uni(-0.5, 0.2)};
        break;
      default:
        throw std::invalid_argument("model has no SRE calibration");
    }
    if (!params_admissible(model, p)) { --s; continue; }
    starts.push_back(encode_params(model, p));
  }

  optim::Result best;
  best.fx = 1e301;
  for (const auto& s0 : starts) {
    optim::NelderMeadOptions nm;
    nm.max_evals = opts.max_evals_per_start;
    nm.f_tol = 1e-9;
    nm.x_tol = 1e-7;
    auto r = optim::nelder_mead(objective, s0, nm);
    if (r.fx < best.fx) best = std::move(r);
  }
  {
    optim::NelderMeadOptions nm;
    nm.max_evals = opts.max_evals_per_start;
    nm.f_tol = 1e-11;
    nm.x_tol = 1e-9;
    nm.init_step = 0.05;
    auto r = optim::nelder_mead(objective, best.x, nm);
    if (r.fx <= best.fx) best = std::move(r);
  }

  SreFit fit;
  fit.model = model;
  fit.params = decode_params(model, best.x);
  fit.n_options = static_cast<int>(strikes.size());
  fit.converged = best.converged;
  fit.sre = sre_of(fit.params, &fit.per_option_errors);
  if (fit.sre >= 1e300)
    throw std::runtime_error("calibrate_sre: no admissible optimum found");
  return fit;
}

ForecastDensity rnd_from_cf(RndModel model, const std::vector<double>& params,
                            double F, double tau_vol, const GridSpec& grid,
                            Date obs_date, Date expiry) {
  ForecastDensity d;
  d.grid = grid;
  d.x = grid.points();
  d.f_anchor = F;
  d.obs_date = obs_date;
  d.expiry = expiry;

  pricing::FourierInverter inv(make_cf(model, params, F, tau_vol));
  std::vector<double> ln_xs(d.x.size());
  const double lnF = std::log(F);
  for (std::size_t j = 0; j < d.x.size(); ++j) ln_xs[j] = lnF + d.x[j];
  d.cdf = inv.cdf_ln_grid(ln_xs);
  repair_cdf(d.cdf);
  d.pdf = pdf_from_cdf(d.x, d.cdf);
  return d;
}

ForecastDensity malz_rnd(const market::CrossSection& cs, const Horizon& h,
                         const GridSpec& grid, double* repair_total) {
  const double F = cs.futures;

  std::vector<double> ks, vols;
  for (const auto& q : cs.quotes) {
    ks.push_back(q.strike);
    vols.push_back(implied_vol_of_quote(cs, h, q));
  }
  CubicSpline vol_curve(ks, vols);  // flat extrapolation at the endpoints

  // Call pricing function on a strike mesh in half-steps of delta = 0.01 F.
  const double delta = 0.01 * F;
  const double step = 0.5 * delta;
  const double mesh_lo = 0.3 * F, mesh_hi = 3.0 * F;
  const int n_mesh = static_cast<int>(std::round((mesh_hi - mesh_lo) / step)) + 1;
  std::vector<double> mesh_k(n_mesh), call_px(n_mesh);
  const double disc = std::exp(-cs.rate * h.tau_disc);
  for (int i = 0; i < n_mesh; ++i) {
    mesh_k[i] = mesh_lo + i * step;
    call_px[i] = disc * pricing::black76_price(F, mesh_k[i], 0.0, h.tau_vol,
                                               vol_curve(mesh_k[i]),
                                               pricing::OptionKind::Call);
  }

  // CDF(x) ~= 1 + e^{r tau} [C(x + delta/2) - C(x - delta/2)] / delta.
  std::vector<double> mesh_cdf(n_mesh, 0.0);
  for (int i = 1; i + 1 < n_mesh; ++i)
    mesh_cdf[i] = 1.0 + (call_px[i + 1] - call_px[i - 1]) / (delta * disc);
  mesh_cdf[0] = mesh_cdf[1];
  mesh_cdf[n_mesh - 1] = mesh_cdf[n_mesh - 2];

  ForecastDensity d;
  d.grid = grid;
  d.x = grid.points();
  d.f_anchor = F;
  d.obs_date = cs.obs_date;
  d.expiry = cs.expiry;
  d.cdf.resize(d.x.size());
  for (std::size_t j = 0; j < d.x.size(); ++j) {
    const double px = F * std::exp(d.x[j]);
    if (px <= mesh_lo) {
      d.cdf[j] = 0.0;
    } else if (px >= mesh_hi) {
      d.cdf[j] = 1.0;
    } else {
      const double pos = (px - mesh_lo) / step;
      const int i = std::min(n_mesh - 2, static_cast<int>(pos));
      const double t = pos - i;
      d.cdf[j] = mesh_cdf[i] + t * (mesh_cdf[i + 1] - mesh_cdf[i]);
    }
  }
  const double adj = repair_cdf(d.cdf);
  if (repair_total) *repair_total = adj;
  d.pdf = pdf_from_cdf(d.x, d.cdf);
  return d;
}

}  // namespace dbench::rnd
