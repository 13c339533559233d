#ifndef THERMOQFI_ESTIMATION_HPP
#define THERMOQFI_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermoqfi/brownian.hpp"

namespace thermoqfi::estimation {

using brownian::BrownianParams;
using hilbert::Complex;

// SplitMix64 with a Box-Muller Gaussian layer.  Counter-based seeding keeps
// per-trial streams schedule-independent.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();
    double next_double();  // uniform in (0,1)
    double next_gaussian();

    // stream for one trial: mixes the base seed with the trial index
    static Rng for_trial(uint64_t seed, uint64_t trial);
    static constexpr const char* algorithm() { return "splitmix64+box-muller"; }

  private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct ExperimentConfig {
    BrownianParams params;
    double t = 10.0;       // probe time
    int nu = 100;          // samples per estimate
    int trials = 10000;    // independent estimates
    uint64_t seed = 1;

    void validate() const;
};

struct EstimateReport {
    double beta_true = 0.0;
    double beta_hat_mean = 0.0;
    double var_beta_hat = 0.0;
    double f_classical = 0.0;   // quadrature Sum w L^2 Q
    double dl2 = 0.0;           // closed-form Delta L^2_beta
    double crb_classical = 0.0; // 1/(nu F_cl)
    double crb_quantum = 0.0;   // 1/(nu Delta L^2)
    int rejected_trials = 0;
    int accepted_trials = 0;
    std::string rng_algorithm;
};

// Heterodyne outcomes: alpha_f = alpha_t + u, Re u and Im u independent
// N(0, (1+nbar(t))/2).  The outcome density under d^2alpha/pi is Q_t.
std::vector<Complex> sample_outcomes(const BrownianParams& p, double t, int nu, Rng& rng);

// Analytic MLE for the known Gaussian family; everything but beta is known.
// Returns nullopt when the spread estimate is infeasible (nbar_inf <= 0).
std::optional<double> estimate_beta(const std::vector<Complex>& samples,
                                    const BrownianParams& p, double t);

// classical Fisher information of the Q distribution by grid quadrature
double classical_fisher(const BrownianParams& p, double t,
                        const phase_space::GridPolicy& grid = {});

EstimateReport run_experiment(const ExperimentConfig& config);

}  // namespace thermoqfi::estimation

#endif
