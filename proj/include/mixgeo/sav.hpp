#pragma once

#include "mixgeo/aos.hpp"
#include "mixgeo/energy.hpp"
#include "mixgeo/grid.hpp"
#include "mixgeo/run_log.hpp"

namespace mixgeo {

enum class SavOrder { First, Second };

struct SavConfig {
    double gamma = 1.0;   // weight of the linear split operator, >= 0
    double C = 1e7;       // non-negativity shift; image-dependent (see docs)
    SavOrder order = SavOrder::First;
    double tau0 = 0.0;    // <= 0 means "start at tau_min"
    double tau_min = 0.8;
    double tau_max = 1.2;
    double rho = 0.9;         // safety factor in (0, 1]
    double tol_step = 1e-3;   // reference tolerance of the adaptive formula
    bool adaptive = true;     // false pins tau at tau0 for order studies
    int max_iters = 200;
    StoppingRule stop = StoppingRule::relative_change(1e-4);
};

struct SavState {
    ImageGrid u;
    ImageGrid u_prev;  // second order only; bootstrapped to u0
    double r = 0.0;
    double tau = 0.0;
    int iter = 0;
};

/// Internal quantities of one step, for diagnostics and oracle tests.
struct SavStepDiag {
    double q = 0.0;            // (b, u^{n+1}) via the two-solve shortcut
    double b_dot_u_next = 0.0; // (b, u^{n+1}) recomputed from the returned image
    ImageGrid u_unclamped;
};

/// Five-point negative Laplacian with replicated (Neumann) boundaries;
/// symmetric positive semidefinite, annihilates constants.
ImageGrid linear_operator_L(const ImageGrid& u);

/// Solve (I + c gamma L) x = rhs, c = tau (half=false) or tau/2 (half=true),
/// by diagonalizing L in the discrete cosine basis. Exact to round-off.
ImageGrid implicit_solve(const ImageGrid& rhs, double tau, double gamma, bool half);

struct Eps1 {
    double value = 0.0;
    ImageGrid derivative;  // E'(u) - gamma L u
};

/// eps1[u] = E(u) - (gamma/2)(u, Lu) + C and its variation. Throws
/// std::runtime_error when eps1 <= 0 (choose a larger C).
Eps1 eps1_and_derivative(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                         double gamma, double C);
Eps1 eps1_and_derivative_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                    const ImageGrid& alpha, double b, double eta,
                                    double gamma, double C);

/// The quantity the discrete schemes provably dissipate:
/// (gamma/2)(u, Lu) + r^2.
double modified_energy(const ImageGrid& u, double r, double gamma);

SavState sav_step_first(const SavState& state, const ImageGrid& f, const ModelWeights& w,
                        const SavConfig& cfg);
SavState sav_step_first_with_alpha(const SavState& state, const ImageGrid& f,
                                   const ImageGrid& alpha, const ModelWeights& w,
                                   const SavConfig& cfg, SavStepDiag* diag = nullptr);

SavState sav_step_second(const SavState& state, const ImageGrid& f, const ModelWeights& w,
                         const SavConfig& cfg);
SavState sav_step_second_with_alpha(const SavState& state, const ImageGrid& f,
                                    const ImageGrid& alpha, const ModelWeights& w,
                                    const SavConfig& cfg, SavStepDiag* diag = nullptr);

/// max(tau_min, min(rho sqrt(tol/e) tau, tau_max)); e = 0 yields tau_max.
double adapt_tau(double tau, double e, const SavConfig& cfg);

SolveResult sav_run(const ImageGrid& f, const ModelWeights& w, const SavConfig& cfg,
                    const ImageGrid* truth = nullptr);

}  // namespace mixgeo
