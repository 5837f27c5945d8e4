#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spinvault/errors.hpp"
#include "spinvault/evolve.hpp"
#include "spinvault/krylov.hpp"

namespace spinvault::optimize {

struct Objective {
    enum class Type {
        FloquetF1,             // |<Phi_1| exp(-i h_eff T) |Phi_1>|^2
        FloquetFn,             // same after n periods
        LindbladFn,            // dissipative bright fidelity after n periods
        LindbladFixedHorizon,  // dissipative bright fidelity at fixed total
                               // time `horizon` (nearest whole period)
    };
    Type type = Type::FloquetF1;
    long n = 1;
    double horizon = 0.0;
};

struct GridSpec {
    std::vector<double> t_on_values;  // strictly positive, ascending
    std::vector<double> t_0_values;   // strictly positive, ascending
    Objective objective;

    void validate() const;
};

struct OptimizationResult {
    double best_t_on = 0.0;
    double best_t_0 = 0.0;
    double best_fidelity = 0.0;
    Eigen::MatrixXd surface;  // rows follow t_0_values, cols t_on_values
};

// Evaluates the objective at every (t_0, t_on) cell of the paper protocol
// with the given detuning. Cells are independent and evaluated on
// `n_threads` workers (0 = hardware concurrency); the reduction is
// deterministic: ties break toward smaller t_0, then smaller t_on.
OptimizationResult grid_search(const krylov::KrylovChain& chain, double gamma,
                               double delta, const GridSpec& grid,
                               unsigned n_threads = 0);

struct LifetimeFit {
    double tau = 0.0;       // +inf sentinel for non-decaying unit traces
    double amplitude = 0.0;
    double residual = 0.0;  // RMS of F_i - A exp(-t_i/tau)
};

// Least-squares fit of F(t) = A exp(-t/tau) in log space over the stroboscopic
// samples with F > 0.05 (the t = 0 point is excluded; it carries no decay
// information and biases A). Needs >= 8 samples. A trace pinned at 1 returns
// tau = +inf with zero residual; a best-fit tau < 0 raises NonDecayingTrace.
LifetimeFit fit_lifetime(const evolve::FidelityTrace& trace);

// tau / max(1/sigma, 1/gamma), zero rates excluded; both zero is an error.
double improvement_factor(double tau, double sigma, double gamma);

}  // namespace spinvault::optimize
