#pragma once

#include "mlyap/model.hpp"
#include "mlyap/rng.hpp"
#include "mlyap/types.hpp"

#include <vector>

namespace mlyap {

/// Endpoint of one simulated path together with its additive functional.
struct PathSample {
    State x_final;
    double a_final = 0.0;
    double t = 0.0;
    int n_steps = 0;
    bool blowup = false;  // guard radius exceeded; a_final is then invalid
};

struct BatchResult {
    std::vector<PathSample> samples;
    int n_blowups = 0;
    double wall_seconds = 0.0;
};

/// Euler-Maruyama on the Ito form with left-endpoint accumulation of
///   A_t ~ sum_k Q(x_k) dt + sum_{k,j} qj(x_k) dW_k^j.
/// Periodic coordinates are wrapped mod 2pi each step.  Exceeding the model
/// guard radius sets the blowup flag and stops the path; it never throws.
PathSample simulate_path(const SdeModel& model, const State& x0, double t, int n_steps,
                         RngStream stream);

/// Simulates n_paths paths; path i always consumes policy.stream_for(offset + i),
/// so the result is identical for every worker count.  n_threads = 0 picks the
/// hardware concurrency.
BatchResult simulate_batch(const SdeModel& model, const State& x0, double t, int n_steps,
                           int n_paths, const RngPolicy& policy, int n_threads = 0,
                           std::uint64_t stream_offset = 0);

State state1d(double x);

}  // namespace mlyap
