#include "rcwa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rcwa/parallel.hpp"

namespace rcwa {

OptAlgo opt_algo_from_name(const std::string& name) {
  if (name == "momentum") return OptAlgo::Momentum;
  if (name == "adagrad") return OptAlgo::Adagrad;
  if (name == "rmsprop") return OptAlgo::RMSProp;
  if (name == "adam") return OptAlgo::Adam;
  if (name == "radam") return OptAlgo::RAdam;
  throw DomainError("unknown optimizer: " + name);
}

std::string opt_algo_name(OptAlgo algo) {
  switch (algo) {
    case OptAlgo::Momentum: return "momentum";
    case OptAlgo::Adagrad: return "adagrad";
    case OptAlgo::RMSProp: return "rmsprop";
    case OptAlgo::Adam: return "adam";
    case OptAlgo::RAdam: return "radam";
  }
  return "?";
}

void OptimizerState::init(Eigen::Index dim) {
  m = VecR::Zero(dim);
  v = VecR::Zero(dim);
  step = 0;
}

void optimizer_step(OptimizerState& state, VecR& p, const VecR& g) {
  if (state.m.size() != p.size()) state.init(p.size());
  if (g.size() != p.size()) throw ShapeError("gradient and parameter sizes differ");
  state.step += 1;
  const auto t = static_cast<double>(state.step);

  switch (state.algo) {
    case OptAlgo::Momentum:
      state.v = state.momentum * state.v + g;
      p -= state.lr * state.v;
      break;
    case OptAlgo::Adagrad:
      state.v += g.cwiseProduct(g);
      p -= state.lr * g.cwiseQuotient(state.v.cwiseSqrt() +
                                      VecR::Constant(p.size(), state.eps_hat));
      break;
    case OptAlgo::RMSProp:
      state.v = state.rms_decay * state.v + (1.0 - state.rms_decay) * g.cwiseProduct(g);
      p -= state.lr * g.cwiseQuotient(state.v.cwiseSqrt() +
                                      VecR::Constant(p.size(), state.eps_hat));
      break;
    case OptAlgo::Adam: {
      state.m = state.beta1 * state.m + (1.0 - state.beta1) * g;
      state.v = state.beta2 * state.v + (1.0 - state.beta2) * g.cwiseProduct(g);
      const VecR m_hat = state.m / (1.0 - std::pow(state.beta1, t));
      const VecR v_hat = state.v / (1.0 - std::pow(state.beta2, t));
      p -= state.lr * m_hat.cwiseQuotient(v_hat.cwiseSqrt() +
                                          VecR::Constant(p.size(), state.eps_hat));
      break;
    }
    case OptAlgo::RAdam: {
      state.m = state.beta1 * state.m + (1.0 - state.beta1) * g;
      state.v = state.beta2 * state.v + (1.0 - state.beta2) * g.cwiseProduct(g);
      const VecR m_hat = state.m / (1.0 - std::pow(state.beta1, t));
      const double rho_inf = 2.0 / (1.0 - state.beta2) - 1.0;
      const double beta2_t = std::pow(state.beta2, t);
      const double rho = rho_inf - 2.0 * t * beta2_t / (1.0 - beta2_t);
      if (rho > 4.0) {
        const double r = std::sqrt(((rho - 4.0) * (rho - 2.0) * rho_inf) /
                                   ((rho_inf - 4.0) * (rho_inf - 2.0) * rho));
        const VecR v_hat = (state.v / (1.0 - beta2_t)).cwiseSqrt();
        p -= state.lr * r *
             m_hat.cwiseQuotient(v_hat + VecR::Constant(p.size(), state.eps_hat));
      } else {
        // variance length undefined: momentum-style fallback
        p -= state.lr * m_hat;
      }
      break;
    }
  }
}

VecR fd_gradient(const std::function<double(const VecR&)>& f, const VecR& p,
                 const VecR& h, int jobs) {
  if (h.size() != p.size()) throw ShapeError("step and parameter sizes differ");
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0)) throw DomainError("finite-difference steps must be positive");

  const auto n = p.size();
  VecR values(2 * n);
  parallel_for(2 * n, jobs, [&](long task) {
    const Eigen::Index i = task / 2;
    const double sign = (task % 2 == 0) ? 1.0 : -1.0;
    VecR probe = p;
    probe[i] += sign * h[i];
    values[task] = f(probe);
  });

  VecR g(n);
  for (Eigen::Index i = 0; i < n; ++i)
    g[i] = (values[2 * i] - values[2 * i + 1]) / (2.0 * h[i]);
  return g;
}

void FomSpec::validate() const {
  config.validate();
  if (kind == Kind::DeflectionEfficiency) {
    if (std::abs(order_m) > config.order_x || std::abs(order_n) > config.order_y)
      throw DomainError("requested order lies outside the truncation range");
  } else {
    if (wavelengths.size() == 0) throw DomainError("empty wavelength grid");
    for (Eigen::Index i = 0; i < wavelengths.size(); ++i) {
      if (!(wavelengths[i] > 0.0)) throw DomainError("wavelengths must be positive");
      if (i > 0 && !(wavelengths[i] > wavelengths[i - 1]))
        throw DomainError("wavelength grid must be sorted ascending");
    }
    if (target.size() != wavelengths.size())
      throw ShapeError("target spectrum does not match the wavelength grid");
  }
}

SimConfig deflector_config(const DeflectorSetup& setup) {
  SimConfig config;
  config.wavelength = setup.wavelength;
  config.period_x = std::abs(setup.wavelength / std::sin(setup.deflection_deg * pi / 180.0));
  config.period_y = config.period_x;
  config.theta = 0.0;
  config.phi = 0.0;
  config.set_pol(1.0); // TM
  config.n_inc = setup.n_inc;
  config.n_sub = setup.n_sub;
  config.order_x = setup.fto;
  config.order_y = 0;
  config.thickness = {setup.thickness};
  return config;
}

double deflection_efficiency(const DeflectorSetup& setup, const VecR& eps_cells) {
  const SimConfig config = deflector_config(setup);
  MatC row(1, eps_cells.size());
  for (Eigen::Index i = 0; i < eps_cells.size(); ++i) row(0, i) = eps_cells[i];
  const Geometry geometry = new_raster({row});
  const ScatterResult result = solve(geometry, config, setup.mode);
  return result.de_t_at(0, -1); // kx = +lambda/period, the designed direction
}

std::function<double(const VecR&)> deflection_fom(const DeflectorSetup& setup) {
  FomSpec fom;
  fom.kind = FomSpec::Kind::DeflectionEfficiency;
  fom.order_m = -1;
  fom.order_n = 0;
  fom.config = deflector_config(setup);
  fom.validate();
  return [setup](const VecR& eps_cells) { return deflection_efficiency(setup, eps_cells); };
}

VecR binary_push(const VecR& index_pattern, double n_lo, double n_hi) {
  return binary_push(index_pattern, n_lo, n_hi, (n_lo + n_hi) / 2.0);
}

VecR binary_push(const VecR& index_pattern, double n_lo, double n_hi, double threshold) {
  VecR out(index_pattern.size());
  for (Eigen::Index i = 0; i < index_pattern.size(); ++i)
    out[i] = index_pattern[i] >= threshold ? n_hi : n_lo;
  return out;
}

DeflectorRun optimize_deflector(const DeflectorSetup& setup, int epochs, OptAlgo algo,
                                double lr, std::uint64_t seed, int jobs) {
  if (setup.cells < 2) throw DomainError("deflector needs at least 2 cells");
  const double eps_lo = setup.n_groove * setup.n_groove;
  const double eps_hi = setup.n_ridge * setup.n_ridge;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(setup.n_groove, setup.n_ridge);
  VecR p(setup.cells);
  for (int i = 0; i < setup.cells; ++i) {
    const double n = uniform(rng);
    p[i] = n * n;
  }

  const auto fom = deflection_fom(setup);
  const VecR h = VecR::Constant(setup.cells, 1e-3);
  OptimizerState state;
  state.algo = algo;
  state.lr = lr;
  state.init(setup.cells);

  DeflectorRun run;
  run.gray_eff.resize(epochs + 1);
  run.bin_eff.resize(epochs + 1);
  run.eps_history.resize(epochs + 1, setup.cells);
  run.best_binary_eff = -1.0;

  auto record = [&](int epoch) {
    const VecR index = p.cwiseSqrt();
    const VecR binary = binary_push(index, setup.n_groove, setup.n_ridge);
    VecR binary_eps = binary.cwiseProduct(binary);
    run.eps_history.row(epoch) = p;
    run.gray_eff[epoch] = fom(p);
    run.bin_eff[epoch] = fom(binary_eps);
    if (run.bin_eff[epoch] > run.best_binary_eff) {
      run.best_binary_eff = run.bin_eff[epoch];
      run.best_binary_pattern = binary;
      run.best_epoch = epoch;
    }
  };

  for (int epoch = 0; epoch < epochs; ++epoch) {
    record(epoch);
    const VecR g = -fd_gradient(fom, p, h, jobs); // ascend the efficiency
    optimizer_step(state, p, g);
    for (int i = 0; i < setup.cells; ++i) p[i] = std::clamp(p[i], eps_lo, eps_hi);
  }
  record(epochs);

  run.index_pattern = p.cwiseSqrt();
  run.binary_pattern = binary_push(run.index_pattern, setup.n_groove, setup.n_ridge);
  return run;
}

FitSetup ocd_demo_setup() {
  FitSetup setup;
  setup.params = {
      {"l1_o1_length_x", 100.0, 3.0, 101.5}, {"l1_o1_length_y", 80.0, 3.0, 81.5},
      {"l1_o2_length_x", 100.0, 3.0, 98.5},  {"l1_o2_length_y", 80.0, 3.0, 81.5},
      {"l2_o1_length_x", 30.0, 2.0, 31.0},   {"l2_o2_length_x", 50.0, 1.0, 49.5},
      {"l1_thickness", 200.0, 10.0, 205.0},  {"l2_thickness", 300.0, 10.0, 305.0},
  };
  setup.wavelengths = VecR::LinSpaced(32, 600.0, 900.0);
  return setup;
}

std::pair<VectorLayout, std::vector<double>> build_fit_stack(const FitSetup& setup,
                                                             const VecR& p) {
  if (p.size() != 8) throw ShapeError("the fit stack takes 8 parameters");
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (!(p[i] > 0.0)) throw DomainError("shape parameters must be positive");

  const double L = setup.period;
  const cd eps_base = cd(setup.n_base * setup.n_base, 0.0);
  const cd eps_o1 = cd(setup.n_obj1 * setup.n_obj1, 0.0);
  const cd eps_o2 = cd(setup.n_obj2 * setup.n_obj2, 0.0);

  VectorLayer l1;
  l1.base_eps = eps_base;
  l1.rects.push_back(make_rectangle(0.25 * L, 0.5 * L, p[0], p[1], eps_o1));
  l1.rects.push_back(make_rectangle(0.75 * L, 0.5 * L, p[2], p[3], eps_o1));

  VectorLayer l2;
  l2.base_eps = eps_base;
  l2.rects.push_back(make_rectangle(0.25 * L, 0.5 * L, p[4], L, eps_o2));
  l2.rects.push_back(make_rectangle(0.75 * L, 0.5 * L, p[5], L, eps_o2));

  VectorLayout layout = draw({l1, l2}, L, L);
  return {std::move(layout), {p[6], p[7]}};
}

VecR fit_spectrum(const FitSetup& setup, const VecR& p, int jobs) {
  auto [layout, thickness] = build_fit_stack(setup, p);
  const Geometry geometry = layout;

  SimConfig config;
  config.theta = 0.0;
  config.phi = 0.0;
  config.psi = setup.psi;
  config.n_inc = 1.0;
  config.n_sub = setup.n_sub;
  config.period_x = setup.period;
  config.period_y = setup.period;
  config.order_x = setup.order_x;
  config.order_y = setup.order_y;
  config.thickness = thickness;

  VecR spectrum(setup.wavelengths.size());
  parallel_for(setup.wavelengths.size(), jobs, [&](long i) {
    SimConfig c = config;
    c.wavelength = setup.wavelengths[i];
    spectrum[i] = solve(geometry, c, FourierMode::CFS).de_r_at(0, 0);
  });
  return spectrum;
}

std::function<double(const VecR&)> spectrum_mse_fom(const FitSetup& setup,
                                                    const VecR& target, int jobs) {
  FomSpec fom;
  fom.kind = FomSpec::Kind::SpectrumMse;
  fom.wavelengths = setup.wavelengths;
  fom.target = target;
  fom.config.period_x = setup.period;
  fom.config.period_y = setup.period;
  fom.config.order_x = setup.order_x;
  fom.config.order_y = setup.order_y;
  fom.config.psi = setup.psi;
  fom.config.n_sub = setup.n_sub;
  fom.config.wavelength = setup.wavelengths[0];
  fom.validate();
  return [setup, target, jobs](const VecR& p) {
    const VecR s = fit_spectrum(setup, p, 1);
    return (s - target).squaredNorm() / static_cast<double>(target.size());
  };
}

FitRun spectrum_fit(const FitSetup& setup, const VecR& target, OptAlgo algo, double lr,
                    int iterations, std::uint64_t seed, int jobs) {
  const int dim = static_cast<int>(setup.params.size());
  std::mt19937_64 rng(seed);
  VecR p(dim), h(dim);
  for (int i = 0; i < dim; ++i) {
    std::normal_distribution<double> prior(setup.params[i].mean, setup.params[i].stddev);
    p[i] = prior(rng);
    h[i] = 1e-4 * setup.params[i].mean; // step relative to the parameter scale
  }

  const auto fom = spectrum_mse_fom(setup, target, 1);
  OptimizerState state;
  state.algo = algo;
  state.lr = lr;
  state.init(dim);

  FitRun run;
  run.p0 = p;
  run.loss.resize(iterations);
  for (int it = 0; it < iterations; ++it) {
    run.loss[it] = fom(p);
    const VecR g = fd_gradient(fom, p, h, jobs);
    optimizer_step(state, p, g);
    for (int i = 0; i < dim; ++i) p[i] = std::max(p[i], 1e-6); // keep lengths positive
  }
  run.p_final = p;
  return run;
}

} // namespace rcwa
