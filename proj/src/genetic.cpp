#include "cpdetect/genetic.hpp"

#include "cpdetect/errors.hpp"

#include <cstdlib>
#include <numeric>

namespace cpdetect {

void GAConfig::validate() const {
    if (population_size < 1) throw InvalidInput("population size must be positive");
    if (generations < 1) throw InvalidInput("generation count must be positive");
    if (max_duplicate_retries < 1) throw InvalidInput("duplicate retries must be positive");
    auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!is_prob(init_prob) || !is_prob(crossover_keep_prob) || !is_prob(mutation_rate)) {
        throw InvalidInput("GA probabilities must lie in [0, 1]");
    }
    double sum = 0.0;
    for (double p : mutation_probs) {
        if (!is_prob(p)) throw InvalidInput("mutation probabilities must lie in [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidInput("mutation probabilities must sum to 1");
    }
}

std::array<double, 3> GAConfig::normalize_weights(std::array<double, 3> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("mutation weights must be >= 0");
        sum += w;
    }
    if (!(sum > 0.0)) throw InvalidInput("mutation weights must not all be zero");
    for (double& w : weights) w /= sum;
    return weights;
}

int fitness_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CPDETECT_WORKERS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) return static_cast<int>(v);
        throw InvalidInput("CPDETECT_WORKERS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

ChangePointConfig draw_chromosome(int horizon, double p, Rng& rng) {
    std::vector<int> tau;
    for (int t = 2; t <= horizon - 1; ++t) {
        if (rng.bernoulli(p)) tau.push_back(t);
    }
    return ChangePointConfig(horizon, std::move(tau));
}

int weighted_pick(std::span<const double> weights, double total, int skip, Rng& rng) {
    const double target = rng.uniform() * total;
    double acc = 0.0;
    int last = -1;
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
        if (i == skip) continue;
        acc += weights[static_cast<std::size_t>(i)];
        last = i;
        if (target < acc) return i;
    }
    return last;
}

}  // namespace

std::vector<ChangePointConfig> init_population(int horizon, const GAConfig& cfg, Rng& rng) {
    if (horizon < 3) throw InvalidInput("genetic search needs T >= 3");
    std::vector<ChangePointConfig> population;
    population.reserve(static_cast<std::size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) {
        ChangePointConfig c = draw_chromosome(horizon, cfg.init_prob, rng);
        for (int attempt = 0; attempt < cfg.max_duplicate_retries &&
                              std::find(population.begin(), population.end(), c) != population.end();
             ++attempt) {
            c = draw_chromosome(horizon, cfg.init_prob, rng);
        }
        population.push_back(std::move(c));
    }
    return population;
}

std::vector<double> rank_weights(std::span<const double> scores) {
    const std::size_t k = scores.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> ranks(k);
    for (std::size_t pos = 0; pos < k; ++pos) ranks[order[pos]] = static_cast<double>(k - pos);
    return ranks;
}

std::pair<int, int> rank_select(std::span<const double> scores, Rng& rng) {
    if (scores.size() < 2) throw InvalidInput("rank selection needs at least two chromosomes");
    for (double s : scores) {
        if (std::isnan(s)) throw InvalidInput("rank selection received a NaN fitness");
    }
    const std::vector<double> ranks = rank_weights(scores);
    const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    const int mother = weighted_pick(ranks, total, -1, rng);
    const int father =
        weighted_pick(ranks, total - ranks[static_cast<std::size_t>(mother)], mother, rng);
    return {mother, father};
}

ChangePointConfig crossover(const ChangePointConfig& mother, const ChangePointConfig& father,
                            const GAConfig& cfg, Rng& rng) {
    if (mother.horizon() != father.horizon()) {
        throw InvalidInput("crossover parents have different horizons");
    }
    std::vector<int> joined;
    std::set_union(mother.tau().begin(), mother.tau().end(), father.tau().begin(),
                   father.tau().end(), std::back_inserter(joined));
    joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
    std::vector<int> kept;
    for (int t : joined) {
        if (rng.bernoulli(cfg.crossover_keep_prob)) kept.push_back(t);
    }
    return ChangePointConfig(mother.horizon(), std::move(kept));
}

ChangePointConfig mutate(const ChangePointConfig& child, const GAConfig& cfg, Rng& rng) {
    const int horizon = child.horizon();
    std::vector<int> shifted;
    shifted.reserve(child.tau().size());
    for (int t : child.tau()) {
        int shift = 0;
        if (cfg.mutation_mode == MutationMode::PerPointShift) {
            const double u = rng.uniform();
            if (u < cfg.mutation_probs[0]) {
                shift = -1;
            } else if (u >= cfg.mutation_probs[0] + cfg.mutation_probs[1]) {
                shift = 1;
            }
        } else if (rng.bernoulli(cfg.mutation_rate)) {
            shift = rng.bernoulli(0.5) ? 1 : -1;
        }
        shifted.push_back(std::clamp(t + shift, 2, horizon - 1));
    }
    std::sort(shifted.begin(), shifted.end());
    shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
    return ChangePointConfig(horizon, std::move(shifted));
}

GAHistory<BmdlEvaluation> run_ga(const ExceedanceData& data, Family family, const Hyperparams& hyper,
                                 const GAConfig& cfg, const FitOptions& fit_options) {
    const BmdlObjective objective(family, data, hyper, fit_options);
    auto evaluator = [&objective](const ChangePointConfig& config, std::uint64_t stream) {
        FitResult r = objective.fit(config, stream);
        return BmdlEvaluation{r.value, std::move(r.fit)};
    };
    auto history = evolve(data.horizon(), cfg, evaluator);
    if (data.count() == 0) {
        history.notes.insert(history.notes.begin(),
                             "warning: no threshold exceedances; fit is prior-dominated");
    }
    return history;
}

}  // namespace cpdetect
