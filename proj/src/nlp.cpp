#include "tracon/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "tracon/rng.hpp"

namespace tracon {

namespace {

double softplus(double x, double eta) {
    const double z = x / eta;
    if (z > 40.0) return x;
    if (z < -40.0) return eta * std::exp(z);
    return eta * std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z > 40.0) return 1.0;
    if (z < -40.0) return std::exp(z);
    return 1.0 / (1.0 + std::exp(-z));
}

double speed_deficit(double v, const SpeedRange& range) {
    const double span = range.max - range.min;
    return span > 0.0 ? (range.max - v) / span : 0.0;
}

struct DecisionVars {
    double d = 0.0;
    double v_f = 0.0;
    double v_theta = 0.0;
    double v_L = 0.0;
};

/// Maps a raw (d, v_f, s1, s2) vector into the feasible set: boxes on d and
/// v_f, then the stacked speed slacks clamped so v_theta and v_L land in
/// their own boxes while staying monotone.
DecisionVars project_vars(double d, double v_f, double s1, double s2,
                          const Bounds& bounds) {
    DecisionVars out;
    out.d = std::clamp(d, 0.0, bounds.d_max);
    out.v_f = std::clamp(v_f, bounds.v_f.min, bounds.v_f.max);
    out.v_theta = std::clamp(out.v_f + std::max(s1, 0.0),
                             std::max(bounds.v_theta.min, out.v_f), bounds.v_theta.max);
    out.v_L = std::clamp(out.v_theta + std::max(s2, 0.0),
                         std::max(bounds.v_L.min, out.v_theta), bounds.v_L.max);
    return out;
}

/// Shared state for one solve: arrivals in rank order plus scratch vectors.
class Problem {
public:
    Problem(const GeometryConfig& config, const Scenario& scenario,
            const std::vector<int>& sequence, const Bounds& bounds,
            const Weights& weights)
        : config_(config), scenario_(scenario), bounds_(bounds), weights_(weights) {
        ranked_.reserve(sequence.size());
        for (const int idx : sequence) ranked_.push_back(&scenario.arrivals.at(idx));
        // Variable scales used to map the normalized vector to raw values.
        scale_d_ = bounds.d_max;
        scale_vf_ = bounds.v_f.max - bounds.v_f.min;
        scale_s1_ = bounds.v_theta.max - bounds.v_f.min;
        scale_s2_ = bounds.v_L.max - bounds.v_theta.min;
    }

    int size() const { return static_cast<int>(ranked_.size()); }
    int dim() const { return 4 * size(); }
    const Arrival& arrival(int rank) const { return *ranked_[rank]; }

    DecisionVars vars_at(const std::vector<double>& z, int rank) const {
        const double* p = &z[4 * rank];
        return project_vars(p[0] * scale_d_, bounds_.v_f.min + p[1] * scale_vf_,
                            p[2] * scale_s1_, p[3] * scale_s2_, bounds_);
    }

    /// Re-normalizes z in place so it encodes exactly the projected values.
    void project(std::vector<double>& z) const {
        for (int rank = 0; rank < size(); ++rank) {
            const DecisionVars v = vars_at(z, rank);
            double* p = &z[4 * rank];
            p[0] = scale_d_ > 0.0 ? v.d / scale_d_ : 0.0;
            p[1] = scale_vf_ > 0.0 ? (v.v_f - bounds_.v_f.min) / scale_vf_ : 0.0;
            p[2] = scale_s1_ > 0.0 ? (v.v_theta - v.v_f) / scale_s1_ : 0.0;
            p[3] = scale_s2_ > 0.0 ? (v.v_L - v.v_theta) / scale_s2_ : 0.0;
        }
    }

    std::vector<AircraftPlan> plans_of(const std::vector<double>& z) const {
        std::vector<AircraftPlan> plans;
        plans.reserve(size());
        for (int rank = 0; rank < size(); ++rank) {
            const DecisionVars v = vars_at(z, rank);
            plans.push_back(make_plan(arrival(rank), v.d, {v.v_L, v.v_theta, v.v_f}));
        }
        return plans;
    }

    AircraftPlan make_plan(const Arrival& arr, double d, const SpeedProfile& speeds) const {
        AircraftPlan plan;
        plan.arrival_id = arr.id;
        plan.gate = arr.gate;
        plan.entry = arr.entry_point;
        plan.tau = arr.entry_time_tau;
        plan.d = d;
        plan.speeds = speeds;
        plan.geometry = path_geometry(config_, arr.entry_point, d);
        plan.faf_time_t = arr.entry_time_tau + travel_time(config_, arr.entry_point, d, speeds);
        return plan;
    }

    /// Smoothed objective and its gradient in normalized coordinates.
    double eval(const std::vector<double>& z, double eta, std::vector<double>* grad) const {
        const int n = size();
        faf_times_.resize(n);
        std::vector<TravelTimeGradient> legs(grad ? n : 0);

        double obj = 0.0;
        for (int rank = 0; rank < n; ++rank) {
            const DecisionVars v = vars_at(z, rank);
            const Arrival& arr = arrival(rank);
            const SpeedProfile speeds{v.v_L, v.v_theta, v.v_f};
            faf_times_[rank] =
                arr.entry_time_tau + travel_time(config_, arr.entry_point, v.d, speeds);
            obj += weights_.eff * v.d;
            obj += weights_.speed *
                   (speed_deficit(v.v_L, bounds_.v_L) + speed_deficit(v.v_theta, bounds_.v_theta) +
                    speed_deficit(v.v_f, bounds_.v_f));
            if (grad)
                legs[rank] = travel_time_gradient(config_, arr.entry_point, v.d, speeds);
        }

        std::vector<double> dJ_dt(grad ? n : 0, 0.0);
        for (int k = 1; k < n; ++k) {
            const double gap = faf_times_[k - 1] + scenario_.t_sep - faf_times_[k];
            obj += weights_.safe * softplus(gap, eta);
            if (grad) {
                const double w = weights_.safe * sigmoid(gap / eta);
                dJ_dt[k - 1] += w;
                dJ_dt[k] -= w;
            }
        }
        if (n > 0) {
            obj += weights_.thru * faf_times_[n - 1];
            if (grad) dJ_dt[n - 1] += weights_.thru;
        }

        if (grad) {
            grad->assign(dim(), 0.0);
            for (int rank = 0; rank < n; ++rank) {
                const TravelTimeGradient& g = legs[rank];
                const double wt = dJ_dt[rank];
                // Deficit slopes per raw speed variable.
                const double def_L =
                    (bounds_.v_L.max > bounds_.v_L.min)
                        ? -weights_.speed / (bounds_.v_L.max - bounds_.v_L.min)
                        : 0.0;
                const double def_th =
                    (bounds_.v_theta.max > bounds_.v_theta.min)
                        ? -weights_.speed / (bounds_.v_theta.max - bounds_.v_theta.min)
                        : 0.0;
                const double def_f =
                    (bounds_.v_f.max > bounds_.v_f.min)
                        ? -weights_.speed / (bounds_.v_f.max - bounds_.v_f.min)
                        : 0.0;
                const double dJ_dd = wt * g.d_extension + weights_.eff;
                const double dJ_dvL = wt * g.d_v_L + def_L;
                const double dJ_dvth = wt * g.d_v_theta + def_th;
                const double dJ_dvf = wt * g.d_v_f + def_f;
                double* out = &(*grad)[4 * rank];
                // v_f feeds all three speeds; s1 feeds v_theta and v_L; s2 only v_L.
                out[0] = dJ_dd * scale_d_;
                out[1] = (dJ_dvf + dJ_dvth + dJ_dvL) * scale_vf_;
                out[2] = (dJ_dvth + dJ_dvL) * scale_s1_;
                out[3] = dJ_dvL * scale_s2_;
            }
        }
        return obj;
    }

private:
    const GeometryConfig& config_;
    const Scenario& scenario_;
    const Bounds& bounds_;
    const Weights& weights_;
    std::vector<const Arrival*> ranked_;
    double scale_d_, scale_vf_, scale_s1_, scale_s2_;
    mutable std::vector<double> faf_times_;
};

std::vector<double> encode(const Problem& problem, const std::vector<AircraftPlan>& plans,
                           const Bounds& bounds) {
    std::vector<double> z(problem.dim(), 0.0);
    for (int rank = 0; rank < problem.size(); ++rank) {
        double* p = &z[4 * rank];
        const AircraftPlan& plan = plans[rank];
        p[0] = bounds.d_max > 0.0 ? plan.d / bounds.d_max : 0.0;
        const double span_f = bounds.v_f.max - bounds.v_f.min;
        const double span_1 = bounds.v_theta.max - bounds.v_f.min;
        const double span_2 = bounds.v_L.max - bounds.v_theta.min;
        p[1] = span_f > 0.0 ? (plan.speeds.v_f - bounds.v_f.min) / span_f : 0.0;
        p[2] = span_1 > 0.0 ? (plan.speeds.v_theta - plan.speeds.v_f) / span_1 : 0.0;
        p[3] = span_2 > 0.0 ? (plan.speeds.v_L - plan.speeds.v_theta) / span_2 : 0.0;
    }
    return z;
}

struct SpgResult {
    std::vector<double> z;
    bool converged = false;
};

/// Spectral projected gradient with a nonmonotone line search. Budget is
/// shared across calls through `iterations_left`.
SpgResult spg_minimize(const Problem& problem, std::vector<double> z, double eta,
                       const SolverParams& params, int& iterations_left) {
    problem.project(z);
    std::vector<double> grad, grad_new, trial;
    double f = problem.eval(z, eta, &grad);

    std::deque<double> recent{f};  // nonmonotone reference window
    std::vector<double> best_history{f};
    double alpha = 1.0;
    bool converged = false;

    while (iterations_left > 0) {
        --iterations_left;

        trial = z;
        for (int i = 0; i < problem.dim(); ++i) trial[i] -= alpha * grad[i];
        problem.project(trial);

        double dir_norm = 0.0;
        double gtd = 0.0;
        for (int i = 0; i < problem.dim(); ++i) {
            const double di = trial[i] - z[i];
            dir_norm = std::max(dir_norm, std::abs(di));
            gtd += grad[i] * di;
        }
        if (dir_norm < 1e-13) {
            converged = true;
            break;
        }

        const double f_ref = *std::max_element(recent.begin(), recent.end());
        double lambda = 1.0;
        double f_new = 0.0;
        std::vector<double> z_new;
        for (;;) {
            z_new = z;
            for (int i = 0; i < problem.dim(); ++i)
                z_new[i] += lambda * (trial[i] - z[i]);
            f_new = problem.eval(z_new, eta, nullptr);
            if (f_new <= f_ref + 1e-4 * lambda * gtd || lambda < 1e-12) break;
            lambda *= 0.5;
        }

        grad_new.clear();
        f_new = problem.eval(z_new, eta, &grad_new);

        // Barzilai-Borwein step for the next iteration.
        double sts = 0.0, sty = 0.0;
        for (int i = 0; i < problem.dim(); ++i) {
            const double s = z_new[i] - z[i];
            sts += s * s;
            sty += s * (grad_new[i] - grad[i]);
        }
        alpha = (sty > 1e-16) ? std::clamp(sts / sty, 1e-8, 1e8) : 1.0;

        z.swap(z_new);
        grad.swap(grad_new);
        f = f_new;

        recent.push_back(f);
        if (recent.size() > 10) recent.pop_front();

        const double best_now = std::min(best_history.back(), f);
        best_history.push_back(best_now);
        const int w = params.stall_window;
        if (static_cast<int>(best_history.size()) > w) {
            const double before = best_history[best_history.size() - 1 - w];
            const double rel = (before - best_now) / std::max(1.0, std::abs(best_now));
            if (rel < params.tolerance) {
                converged = true;
                break;
            }
        }
    }
    return {std::move(z), converged};
}

}  // namespace

void Bounds::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(what); };
    if (!(d_max >= 0.0)) fail("bounds: d_max must be nonnegative");
    for (const SpeedRange* r : {&v_L, &v_theta, &v_f})
        if (!(r->min > 0.0) || !(r->min <= r->max))
            fail("bounds: each speed range needs 0 < min <= max");
    if (!(v_L.max >= v_theta.max && v_theta.max >= v_f.max))
        fail("bounds: speed maxima must satisfy v_L >= v_theta >= v_f");
    if (!(v_L.min >= v_theta.min && v_theta.min >= v_f.min))
        fail("bounds: speed minima must satisfy v_L >= v_theta >= v_f");
}

void Weights::validate() const {
    if (!(safe >= thru && thru >= eff && eff >= speed && speed >= 0.0))
        throw std::invalid_argument(
            "weights: hierarchy w_safe >= w_thru >= w_eff >= w_speed >= 0 required");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::InfeasibleGeometry: return "infeasible-geometry";
    }
    return "unknown";
}

std::vector<int> fcfs_sequence(const GeometryConfig& config, const Scenario& scenario,
                               const Bounds& bounds) {
    struct Entry {
        double eta;
        double tau;
        int id;
        int index;
    };
    std::vector<Entry> entries;
    entries.reserve(scenario.arrivals.size());
    const SpeedProfile fastest = bounds.max_speeds();
    for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
        const Arrival& arr = scenario.arrivals[i];
        const double eta =
            arr.entry_time_tau + travel_time(config, arr.entry_point, 0.0, fastest);
        entries.push_back({eta, arr.entry_time_tau, arr.id, static_cast<int>(i)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.eta != b.eta) return a.eta < b.eta;
        if (a.tau != b.tau) return a.tau < b.tau;
        return a.id < b.id;
    });
    std::vector<int> sequence;
    sequence.reserve(entries.size());
    for (const Entry& e : entries) sequence.push_back(e.index);
    return sequence;
}

std::vector<double> separation_slacks(const std::vector<AircraftPlan>& plans,
                                      double t_sep) {
    std::vector<double> slacks;
    if (plans.size() < 2) return slacks;
    slacks.reserve(plans.size() - 1);
    for (std::size_t k = 1; k < plans.size(); ++k)
        slacks.push_back(
            std::max(0.0, plans[k - 1].faf_time_t + t_sep - plans[k].faf_time_t));
    return slacks;
}

ObjectiveBreakdown evaluate_objective(const Scenario& scenario, const Bounds& bounds,
                                      const Weights& weights,
                                      const std::vector<AircraftPlan>& plans) {
    ObjectiveBreakdown breakdown;
    for (const double sigma : separation_slacks(plans, scenario.t_sep))
        breakdown.safety += sigma;
    if (!plans.empty()) breakdown.throughput = plans.back().faf_time_t;
    for (const AircraftPlan& plan : plans) {
        breakdown.efficiency += plan.d;
        breakdown.speed += speed_deficit(plan.speeds.v_L, bounds.v_L) +
                           speed_deficit(plan.speeds.v_theta, bounds.v_theta) +
                           speed_deficit(plan.speeds.v_f, bounds.v_f);
    }
    breakdown.total = weights.safe * breakdown.safety + weights.thru * breakdown.throughput +
                      weights.eff * breakdown.efficiency + weights.speed * breakdown.speed;
    return breakdown;
}

Solution greedy_fcfs_solve(const GeometryConfig& config, const Scenario& scenario,
                           const std::vector<int>& sequence, const Bounds& bounds,
                           const Weights& weights) {
    bounds.validate();
    Problem problem(config, scenario, sequence, bounds, weights);

    Solution solution;
    solution.status = SolveStatus::Converged;
    double t_prev = -std::numeric_limits<double>::infinity();

    const SpeedProfile vmax = bounds.max_speeds();
    const SpeedProfile vmin = bounds.min_speeds();

    for (int rank = 0; rank < problem.size(); ++rank) {
        const Arrival& arr = problem.arrival(rank);

        // Composite delay knob: s in [0,1] slows all legs from their upper to
        // lower bounds at d = 0; s in [1,2] then stretches d to d_max.
        const auto controls_at = [&](double s) -> std::pair<double, SpeedProfile> {
            const double slow = std::clamp(s, 0.0, 1.0);
            const SpeedProfile speeds{vmax.v_L + slow * (vmin.v_L - vmax.v_L),
                                      vmax.v_theta + slow * (vmin.v_theta - vmax.v_theta),
                                      vmax.v_f + slow * (vmin.v_f - vmax.v_f)};
            const double d = std::clamp(s - 1.0, 0.0, 1.0) * bounds.d_max;
            return {d, speeds};
        };
        const auto time_at = [&](double s) {
            const auto [d, speeds] = controls_at(s);
            return arr.entry_time_tau + travel_time(config, arr.entry_point, d, speeds);
        };

        const double target = t_prev + scenario.t_sep;
        double chosen = 0.0;
        if (time_at(0.0) < target) {
            if (time_at(2.0) < target) {
                chosen = 2.0;  // even maximal delay falls short; slack remains
            } else {
                double lo = 0.0, hi = 2.0;
                for (int iter = 0; iter < 100; ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    (time_at(mid) < target ? lo : hi) = mid;
                }
                chosen = hi;
            }
        }
        const auto [d, speeds] = controls_at(chosen);
        solution.plans.push_back(problem.make_plan(arr, d, speeds));
        t_prev = solution.plans.back().faf_time_t;
    }

    solution.slacks_sigma = separation_slacks(solution.plans, scenario.t_sep);
    solution.objective = evaluate_objective(scenario, bounds, weights, solution.plans);
    return solution;
}

Solution solve(const GeometryConfig& config, const Scenario& scenario,
               const std::vector<int>& sequence, const Bounds& bounds,
               const Weights& weights, const SolverParams& params) {
    bounds.validate();
    weights.validate();
    if (!(params.softplus_eta > 0.0))
        throw std::invalid_argument("solve: softplus_eta must be positive");

    Solution best;
    try {
        best = greedy_fcfs_solve(config, scenario, sequence, bounds, weights);
        if (best.plans.empty()) return best;

        Problem problem(config, scenario, sequence, bounds, weights);
        const std::vector<double> warm = encode(problem, best.plans, bounds);

        // Continuation: the stated smoothing width first, then sharper hinges
        // so the solution is not left with a softplus-sized margin.
        const double etas[] = {params.softplus_eta, params.softplus_eta / 10.0,
                               params.softplus_eta / 100.0};

        std::mt19937_64 perturb_rng(substream_seed(scenario.rng_seed, "solver/restarts"));
        for (int start = 0; start <= params.restarts; ++start) {
            std::vector<double> z = warm;
            if (start > 0) {
                for (double& zi : z)
                    zi += 0.3 * (uniform_double(perturb_rng) - 0.5);
                problem.project(z);
            }
            int iterations_left = params.max_iterations;
            bool converged = true;
            for (const double eta : etas) {
                SpgResult result = spg_minimize(problem, std::move(z), eta, params,
                                                iterations_left);
                z = std::move(result.z);
                converged = result.converged;
                if (iterations_left <= 0) break;
            }

            std::vector<AircraftPlan> plans = problem.plans_of(z);
            const ObjectiveBreakdown exact =
                evaluate_objective(scenario, bounds, weights, plans);
            if (exact.total < best.objective.total) {
                best.plans = std::move(plans);
                best.objective = exact;
                best.slacks_sigma = separation_slacks(best.plans, scenario.t_sep);
                best.status =
                    converged ? SolveStatus::Converged : SolveStatus::IterationLimit;
            }
        }
    } catch (const GeometryError&) {
        Solution failed;
        failed.status = SolveStatus::InfeasibleGeometry;
        return failed;
    }
    return best;
}

Solution quantize_speeds(const GeometryConfig& config, const Scenario& scenario,
                         const Bounds& bounds, const Weights& weights,
                         const Solution& solution, double grid_kt) {
    if (!(grid_kt > 0.0))
        throw std::invalid_argument("quantize_speeds: grid must be positive");
    const auto snap_down = [grid_kt](double v, const SpeedRange& range) {
        const double snapped = std::floor(v / grid_kt) * grid_kt;
        return std::max(snapped, range.min);
    };

    Solution out = solution;
    for (AircraftPlan& plan : out.plans) {
        SpeedProfile q{snap_down(plan.speeds.v_L, bounds.v_L),
                       snap_down(plan.speeds.v_theta, bounds.v_theta),
                       snap_down(plan.speeds.v_f, bounds.v_f)};
        // Flooring preserves the ordering; the min-bump cannot break it when
        // the bound chains hold, but clamp anyway for off-chain configs.
        q.v_theta = std::min(q.v_theta, q.v_L);
        q.v_f = std::min(q.v_f, q.v_theta);
        plan.speeds = q;
        plan.faf_time_t = plan.tau + travel_time(config, plan.entry, plan.d, q);
    }
    out.slacks_sigma = separation_slacks(out.plans, scenario.t_sep);
    out.objective = evaluate_objective(scenario, bounds, weights, out.plans);
    return out;
}

}  // namespace tracon
