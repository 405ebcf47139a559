#include "mlyap/pathsim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mlyap {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double wrap_2pi(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

}  // namespace

State state1d(double x) {
    State s(1);
    s[0] = x;
    return s;
}

PathSample simulate_path(const SdeModel& model, const State& x0, double t, int n_steps,
                         RngStream stream) {
    if (t <= 0.0) throw std::invalid_argument("simulate_path: t must be positive");
    if (n_steps < 1) throw std::invalid_argument("simulate_path: n_steps must be >= 1");

    const int d = model.dim;
    const int m = model.channels;
    const double dt = t / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    const double guard = model.guard_radius;

    PathSample out;
    out.t = t;
    out.n_steps = n_steps;

    State x = x0;
    State drift(d), col(d);
    double a = 0.0;

    for (int k = 0; k < n_steps; ++k) {
        model.drift_at(x, drift);
        a += model.q_ito_at(x) * dt;
        State xn = x + dt * drift;
        for (int j = 0; j < m; ++j) {
            const double dw = sqrt_dt * stream.next_normal();
            model.noise_col_at(x, j, col);
            xn += dw * col;
            a += model.qj_at(x, j) * dw;
        }
        for (int i = 0; i < d; ++i)
            if (model.periodic_coord(i)) xn[i] = wrap_2pi(xn[i]);
        x = xn;
        bool bad = !x.allFinite();
        if (!bad)
            for (int i = 0; i < d; ++i)
                if (!model.periodic_coord(i) && std::abs(x[i]) > guard) bad = true;
        if (bad) {
            out.blowup = true;
            out.x_final = x;
            out.a_final = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
    }
    out.x_final = x;
    out.a_final = a;
    return out;
}

BatchResult simulate_batch(const SdeModel& model, const State& x0, double t, int n_steps,
                           int n_paths, const RngPolicy& policy, int n_threads,
                           std::uint64_t stream_offset) {
    if (n_paths < 1) throw std::invalid_argument("simulate_batch: n_paths must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    BatchResult res;
    res.samples.resize(n_paths);

    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min(n_threads, n_paths);

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i)
            res.samples[i] =
                simulate_path(model, x0, t, n_steps, policy.stream_for(stream_offset + i));
    };

    if (n_threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const int chunk = (n_paths + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const int begin = w * chunk;
            const int end = std::min(n_paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& s : res.samples)
        if (s.blowup) ++res.n_blowups;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace mlyap
