#include "core/simulate.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "json.hpp"

namespace fuelstop {

namespace {

// Counter-based stream: splitmix64 over a per-stream key, so any path can be
// reproduced from (seed, stream) alone, in any order.
struct PathRng {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    PathRng(std::uint64_t seed, std::uint64_t stream)
        : state(mix(seed) ^ mix(0xA0761D6478BD642Full * (stream + 1))) {}

    double uniform() {  // (0, 1]
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return double(z >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    bool has_cached = false;
    double cached = 0.0;

    double normal() {
        if (has_cached) {
            has_cached = false;
            return cached;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        cached = r * std::sin(t);
        has_cached = true;
        return r * std::cos(t);
    }
};

struct PathOutcome {
    double cost = 0.0;
    double tail = 0.0;
    bool jumped = false;
    bool truncated = false;
};

struct PolicyCtx {
    double F, G, f0, c;
    double alpha, delta, lambda, dt, sqrt_dt, horizon;
};

PathOutcome run_path(const PolicyCtx& k, double x0, PathRng& rng, double sign) {
    PathOutcome out;
    double y = std::abs(x0);
    double t = 0.0;
    bool fuel_left = true;

    if (y >= k.G) {  // expend everything immediately
        out.cost += k.c;
        y -= k.c;
        fuel_left = false;
        out.jumped = true;
    }
    if ((fuel_left && y <= k.F) || (!fuel_left && y <= k.f0)) {
        out.cost += k.delta * y * y;
        return out;
    }
    while (t < k.horizon) {
        const double yn = std::abs(y + k.sqrt_dt * sign * rng.normal());
        const double ymid = 0.5 * (y + yn);
        out.cost += std::exp(-k.alpha * t) * k.lambda * ymid * ymid * k.dt;
        t += k.dt;
        y = yn;
        const double disc = std::exp(-k.alpha * t);
        if (fuel_left) {
            if (y <= k.F) {
                out.cost += disc * k.delta * y * y;
                return out;
            }
            if (y >= k.G) {
                out.cost += disc * k.c;
                y -= k.c;
                fuel_left = false;
                out.jumped = true;
                if (y <= k.f0) {
                    out.cost += disc * k.delta * y * y;
                    return out;
                }
            }
        } else if (y <= k.f0) {
            out.cost += disc * k.delta * y * y;
            return out;
        }
    }
    // Horizon hit: bound what the policy could still cost from here.
    out.truncated = true;
    const double disc = std::exp(-k.alpha * k.horizon);
    const double y_stop = std::max(k.f0, y);
    out.tail = disc * (k.lambda * (y * y / k.alpha + 1.0 / (k.alpha * k.alpha)) +
                       k.delta * y_stop * y_stop + (fuel_left ? k.c : 0.0));
    return out;
}

// Fixed-shape pairwise reduction, independent of evaluation order.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

void SimConfig::validate(double alpha) const {
    if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
    if (!(horizon >= 10.0 / alpha))
        throw ArgumentError("horizon must be at least 10/alpha so the discount tail is small");
    if (n_paths == 0) throw ArgumentError("n_paths must be positive");
    if (antithetic && n_paths < 2) throw ArgumentError("antithetic sampling needs n_paths >= 2");
    if (!(x0 >= 0.0)) throw ArgumentError("x0 must be nonnegative");
}

SimResult simulate_policy(const Model& m, const BoundaryPoint& bp, const SimConfig& cfg) {
    if (!bp.valid) throw ArgumentError("simulate_policy needs a valid boundary point");
    if (bp.c != cfg.fuel) throw ArgumentError("cfg.fuel must match the boundary point's c");
    cfg.validate(m.alpha());

    PolicyCtx k{bp.F, bp.G, m.f0(), bp.c,
                m.alpha(), m.delta(), m.lambda(), cfg.dt, std::sqrt(cfg.dt), cfg.horizon};

    SimResult res;
    res.n_paths = cfg.n_paths;
    const double gap = bp.G - bp.F;
    res.coarse_dt = cfg.dt >= gap * gap / 16.0;

    const std::uint64_t n = cfg.n_paths;
    std::vector<double> costs(n);
    std::vector<double> tails(n, 0.0);
    std::vector<unsigned char> jumped(n, 0), trunc(n, 0);

    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t p = lo; p < hi; ++p) {
            const std::uint64_t stream = cfg.antithetic ? p / 2 : p;
            const double sign = (cfg.antithetic && (p & 1)) ? -1.0 : 1.0;
            PathRng rng(cfg.seed, stream);
            const PathOutcome o = run_path(k, cfg.x0, rng, sign);
            costs[p] = o.cost;
            tails[p] = o.tail;
            jumped[p] = o.jumped;
            trunc[p] = o.truncated;
        }
    };

    unsigned n_threads = cfg.threads > 0 ? unsigned(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<std::uint64_t>(n_threads, n);
    if (n_threads <= 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::uint64_t chunk = (n + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (std::uint64_t p = 0; p < n; ++p) {
        res.n_jumped += jumped[p];
        res.truncated += trunc[p];
    }
    res.n_stopped_left = n - res.truncated;
    res.tail_bound = pairwise_sum(tails.data(), n) / double(n);
    res.mean_cost = pairwise_sum(costs.data(), n) / double(n);

    // Standard error over independent sampling units: pair means when
    // antithetic, single paths otherwise.
    std::vector<double> units;
    if (cfg.antithetic) {
        units.resize(n / 2);
        for (std::uint64_t i = 0; i < n / 2; ++i)
            units[i] = 0.5 * (costs[2 * i] + costs[2 * i + 1]);
        if (n % 2) units.push_back(costs[n - 1]);
    } else {
        units = std::move(costs);
    }
    const std::size_t nu = units.size();
    const double mean_u = pairwise_sum(units.data(), nu) / double(nu);
    if (nu > 1) {
        for (auto& u : units) {
            const double d = u - mean_u;
            u = d * d;
        }
        const double var = pairwise_sum(units.data(), nu) / double(nu - 1);
        res.std_error = std::sqrt(var / double(nu));
    }
    return res;
}

std::string to_json(const SimConfig& cfg, const SimResult& r) {
    nlohmann::json j;
    j["mean_cost"] = r.mean_cost;
    j["std_error"] = r.std_error;
    j["n_paths"] = r.n_paths;
    j["dt"] = cfg.dt;
    j["horizon"] = cfg.horizon;
    j["n_jumped"] = r.n_jumped;
    j["n_stopped_left"] = r.n_stopped_left;
    j["truncated"] = r.truncated;
    j["tail_bound"] = r.tail_bound;
    return j.dump(2);
}

}  // namespace fuelstop
