#include "thermoqfi/estimation.hpp"

#include <cmath>
#include <numbers>

namespace thermoqfi::estimation {

uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    // 53-bit mantissa, strictly inside (0,1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

Rng Rng::for_trial(uint64_t seed, uint64_t trial) {
    // one extra mix so adjacent trials land far apart in the stream
    Rng mixer(seed ^ (0x517cc1b727220a95ull * (trial + 1)));
    return Rng(mixer.next_u64());
}

void ExperimentConfig::validate() const {
    params.validate();
    if (!(t > 0.0)) throw Error("ExperimentConfig: probe time must be > 0");
    if (nu < 1) throw Error("ExperimentConfig: nu must be >= 1");
    if (trials < 100) throw Error("ExperimentConfig: trials must be >= 100");
}

std::vector<Complex> sample_outcomes(const BrownianParams& p, double t, int nu, Rng& rng) {
    if (!(t > 0.0)) throw Error("sample_outcomes: t must be > 0");
    brownian::TrajectoryPoint tp = brownian::trajectory(p, t);
    double sd = std::sqrt((1.0 + tp.nbar_t) / 2.0);
    std::vector<Complex> out;
    out.reserve(nu);
    for (int k = 0; k < nu; ++k)
        out.push_back(tp.alpha_t + Complex(sd * rng.next_gaussian(), sd * rng.next_gaussian()));
    return out;
}

std::optional<double> estimate_beta(const std::vector<Complex>& samples,
                                    const BrownianParams& p, double t) {
    if (samples.empty()) throw Error("estimate_beta: need at least one sample");
    brownian::TrajectoryPoint tp = brownian::trajectory(p, t);
    double sigma = 0.0;
    for (Complex a : samples) sigma += std::norm(a - tp.alpha_t);
    sigma /= static_cast<double>(samples.size());
    double e = std::exp(-p.gamma * t);
    double ninf_hat = (sigma - 1.0 - p.nbar0 * e) / (1.0 - e);
    if (ninf_hat <= 0.0) return std::nullopt;
    return std::log(1.0 + 1.0 / ninf_hat) / p.omega0;
}

double classical_fisher(const BrownianParams& p, double t,
                        const phase_space::GridPolicy& grid_policy) {
    brownian::TrajectoryPoint tp = brownian::trajectory(p, t);
    phase_space::GridPtr grid = grid_policy.make(tp.alpha_t, tp.nbar_t);
    double f = 0.0;
    const auto& pts = grid->points();
    for (int j = 0; j < grid->size(); ++j) {
        double l = brownian::score(p, t, pts[j]);
        f += grid->weights()(j) * l * l * brownian::q_function(p, t, pts[j]);
    }
    return f;
}

EstimateReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const BrownianParams& p = config.params;

    EstimateReport rep;
    rep.beta_true = p.beta();
    rep.dl2 = brownian::delta_l2_closed(p, config.t);
    rep.f_classical = classical_fisher(p, config.t);
    rep.crb_classical = 1.0 / (config.nu * rep.f_classical);
    rep.crb_quantum = 1.0 / (config.nu * rep.dl2);
    rep.rng_algorithm = Rng::algorithm();

    double sum = 0.0, sumsq = 0.0;
    int accepted = 0;
    for (int trial = 0; trial < config.trials; ++trial) {
        Rng rng = Rng::for_trial(config.seed, static_cast<uint64_t>(trial));
        std::vector<Complex> samples = sample_outcomes(p, config.t, config.nu, rng);
        std::optional<double> beta_hat = estimate_beta(samples, p, config.t);
        if (!beta_hat) {
            ++rep.rejected_trials;
            continue;
        }
        sum += *beta_hat;
        sumsq += *beta_hat * *beta_hat;
        ++accepted;
    }
    rep.accepted_trials = accepted;
    if (rep.rejected_trials > config.trials / 5)
        throw UnstableRegimeError("run_experiment: " + std::to_string(rep.rejected_trials) +
                                  " of " + std::to_string(config.trials) +
                                  " trials rejected");
    if (accepted < 2) throw UnstableRegimeError("run_experiment: too few accepted trials");
    rep.beta_hat_mean = sum / accepted;
    rep.var_beta_hat = (sumsq - sum * sum / accepted) / (accepted - 1);
    return rep;
}

}  // namespace thermoqfi::estimation
