#include "tracon/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracon/rng.hpp"

namespace tracon {

double exp_sample_seconds(double u, double lambda_per_hr) {
    if (!(u > 0.0 && u <= 1.0))
        throw std::invalid_argument("exp_sample_seconds: u must be in (0, 1]");
    if (!(lambda_per_hr > 0.0))
        throw std::invalid_argument("exp_sample_seconds: lambda must be positive");
    return -std::log(u) / lambda_per_hr * kSecondsPerHour;
}

std::map<std::string, int> sample_rates(std::uint64_t seed,
                                        const std::vector<std::string>& gates,
                                        int lambda_min, int lambda_max) {
    if (lambda_min < 1 || lambda_min > lambda_max)
        throw std::invalid_argument("sample_rates: need 1 <= lambda_min <= lambda_max");
    std::map<std::string, int> rates;
    for (const auto& gate : gates) {
        std::mt19937_64 rng(substream_seed(seed, "rate/" + gate));
        rates[gate] = static_cast<int>(uniform_int(rng, lambda_min, lambda_max));
    }
    return rates;
}

std::vector<double> generate_stream(std::uint64_t seed, std::string_view gate,
                                    double lambda_per_hr, double t_sep, double t_max) {
    std::mt19937_64 rng(substream_seed(seed, "stream/" + std::string(gate)));
    std::vector<double> times;
    double tau = 0.0;  // recursion seed, not an emitted aircraft
    for (;;) {
        const double u = 1.0 - uniform_double(rng);  // (0, 1]
        const double next = tau + t_sep + exp_sample_seconds(u, lambda_per_hr);
        if (next > t_max) break;
        times.push_back(next);
        tau = next;
    }
    return times;
}

Scenario build_scenario(const GeometryConfig& config,
                        const std::map<std::string, int>& rates, double t_sep,
                        double t_max, std::uint64_t seed) {
    Scenario scenario;
    scenario.rates = rates;
    scenario.t_sep = t_sep;
    scenario.t_max = t_max;
    scenario.rng_seed = seed;

    for (const auto& [gate, rate] : rates) {
        const auto it = config.gates.find(gate);
        if (it == config.gates.end())
            throw std::invalid_argument("build_scenario: unknown gate " + gate);
        if (rate <= 0) continue;
        for (const double tau : generate_stream(seed, gate, rate, t_sep, t_max)) {
            scenario.arrivals.push_back({0, gate, it->second, tau});
        }
    }
    std::sort(scenario.arrivals.begin(), scenario.arrivals.end(),
              [](const Arrival& a, const Arrival& b) {
                  if (a.entry_time_tau != b.entry_time_tau)
                      return a.entry_time_tau < b.entry_time_tau;
                  return a.gate < b.gate;
              });
    for (std::size_t i = 0; i < scenario.arrivals.size(); ++i)
        scenario.arrivals[i].id = static_cast<int>(i);
    return scenario;
}

}  // namespace tracon
