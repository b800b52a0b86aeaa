#include "ufa/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ufa/errors.hpp"
#include "ufa/rng.hpp"

namespace ufa::synthetic {

namespace {

double uniform01(SeededRng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::string indexed(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i + 1);
    return buf;
}

double binomial_pmf(std::size_t n, std::size_t k, double p) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) +
                    kk * std::log(p) + (nn - kk) * std::log1p(-p));
}

}  // namespace

Dataset step(std::size_t n_rows, double cut, std::uint64_t seed) {
    SeededRng rng(seed, 0);
    std::vector<Cell> x(n_rows);
    std::vector<std::uint8_t> y(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double v = uniform01(rng);
        x[r] = v;
        y[r] = v < cut ? 1 : 0;
    }
    std::vector<VariableColumn> cols;
    cols.emplace_back("x", std::move(x));
    return Dataset(std::move(cols), BinaryTarget(std::move(y)), "y");
}

Dataset null_signal(std::size_t n_rows, std::size_t n_variables, double rate, std::uint64_t seed) {
    SeededRng rng(seed, 0);
    std::vector<std::vector<Cell>> cells(n_variables, std::vector<Cell>(n_rows));
    std::vector<std::uint8_t> y(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (auto& c : cells) c[r] = uniform01(rng);
        y[r] = uniform01(rng) < rate ? 1 : 0;
    }
    std::vector<VariableColumn> cols;
    for (std::size_t j = 0; j < n_variables; ++j) cols.emplace_back(indexed("x", j), std::move(cells[j]));
    return Dataset(std::move(cols), BinaryTarget(std::move(y)), "y");
}

double planted_intercept(const PlantedConfig& cfg) {
    if (!(cfg.incidence > 0.0 && cfg.incidence < 1.0))
        throw InvalidArgument("incidence must lie strictly between 0 and 1");
    if (!(cfg.redundancy >= 0.0 && cfg.redundancy <= 1.0))
        throw InvalidArgument("redundancy must lie in [0, 1]");
    // m cells copy the latent u (all below the cut together, or none), the
    // other n - m are independent draws.
    const std::size_t n = cfg.n_signal;
    const double c = cfg.signal_cut;
    std::vector<double> weight(n + 1, 0.0);
    for (std::size_t m = 0; m <= n; ++m) {
        const double pm = binomial_pmf(n, m, cfg.redundancy);
        if (pm == 0.0) continue;
        for (std::size_t k = 0; k <= n - m; ++k) {
            const double pk = binomial_pmf(n - m, k, c);
            weight[k + m] += pm * c * pk;
            weight[k] += pm * (1 - c) * pk;
        }
    }
    auto expected = [&](double a) {
        double e = 0;
        for (std::size_t r = 0; r <= n; ++r)
            e += weight[r] * sigmoid(a + cfg.slope * static_cast<double>(r));
        return e;
    };
    double lo = -50, hi = 50;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (expected(mid) < cfg.incidence ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Dataset planted(const PlantedConfig& cfg) {
    if (!(cfg.signal_cut > 0.0 && cfg.signal_cut < 1.0))
        throw InvalidArgument("signal_cut must lie strictly between 0 and 1");
    const double a = planted_intercept(cfg);
    const std::size_t n_vars = cfg.n_signal + cfg.n_noise;
    SeededRng rng(cfg.seed, 0);
    std::vector<std::vector<Cell>> cells(n_vars, std::vector<Cell>(cfg.n_rows));
    std::vector<std::uint8_t> y(cfg.n_rows);
    for (std::size_t r = 0; r < cfg.n_rows; ++r) {
        int risk = 0;
        const double latent = cfg.redundancy > 0.0 ? uniform01(rng) : 0.0;
        for (std::size_t j = 0; j < n_vars; ++j) {
            double v = uniform01(rng);
            if (j < cfg.n_signal && cfg.redundancy > 0.0 && uniform01(rng) < cfg.redundancy) v = latent;
            cells[j][r] = v;
            if (j < cfg.n_signal && v < cfg.signal_cut) ++risk;
        }
        y[r] = uniform01(rng) < sigmoid(a + cfg.slope * risk) ? 1 : 0;
    }
    std::vector<VariableColumn> cols;
    for (std::size_t j = 0; j < n_vars; ++j) {
        const bool signal = j < cfg.n_signal;
        cols.emplace_back(indexed(signal ? "signal_" : "noise_", signal ? j : j - cfg.n_signal),
                          std::move(cells[j]));
    }
    return Dataset(std::move(cols), BinaryTarget(std::move(y)), "y");
}

PlantedConfig rare_event_config(std::uint64_t seed) {
    PlantedConfig cfg;
    cfg.n_rows = 13000;
    cfg.n_signal = 5;
    cfg.n_noise = 25;
    cfg.signal_cut = 0.3;
    cfg.slope = 2.2;
    cfg.incidence = 0.023;
    cfg.seed = seed;
    return cfg;
}

}  // namespace ufa::synthetic
