#pragma once

#include "cpdetect/nhpp.hpp"
#include "cpdetect/objective.hpp"
#include "cpdetect/rng.hpp"
#include "cpdetect/series.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cpdetect {

enum class MutationMode {
    /// Every change-point shifts by -1/0/+1 with mutation_probs.
    PerPointShift,
    /// Each change-point mutates with probability mutation_rate, then shifts
    /// by -1 or +1 with equal probability.
    RateThenShift,
};

struct GAConfig {
    int population_size = 50;
    int generations = 50;
    double init_prob = 0.06;
    /// (p_minus, p_zero, p_plus); the default is the 0.4/0.3/0.4 weighting
    /// normalized to sum to one.
    std::array<double, 3> mutation_probs = {0.4 / 1.1, 0.3 / 1.1, 0.4 / 1.1};
    MutationMode mutation_mode = MutationMode::PerPointShift;
    double mutation_rate = 0.03;
    double crossover_keep_prob = 0.5;
    std::uint64_t seed = 0;
    int max_duplicate_retries = 20;
    bool elitism = true;
    /// Concurrent fitness workers; 0 reads CPDETECT_WORKERS, then falls back
    /// to the hardware concurrency.
    int workers = 0;

    void validate() const;

    /// Scales nonnegative weights so they sum to one.
    static std::array<double, 3> normalize_weights(std::array<double, 3> weights);
};

/// Resolves the worker count (explicit value, CPDETECT_WORKERS, hardware).
int fitness_workers(int requested);

/// k chromosomes; each interior time 2..T-1 is included independently with
/// probability init_prob. Duplicates are redrawn up to max_duplicate_retries.
std::vector<ChangePointConfig> init_population(int horizon, const GAConfig& cfg, Rng& rng);

/// Rank weights S: the lowest score gets k, the highest 1; equal scores give
/// the higher rank to the earlier index.
std::vector<double> rank_weights(std::span<const double> scores);

/// Draws (mother, father) with probability proportional to rank; the father
/// is drawn from the remaining k - 1 members.
std::pair<int, int> rank_select(std::span<const double> scores, Rng& rng);

/// Union of both parents' change-points, each kept with crossover_keep_prob.
ChangePointConfig crossover(const ChangePointConfig& mother, const ChangePointConfig& father,
                            const GAConfig& cfg, Rng& rng);

/// Shifts change-points by -1/0/+1, clamps to 2..T-1 and removes collisions.
ChangePointConfig mutate(const ChangePointConfig& child, const GAConfig& cfg, Rng& rng);

template <typename Evaluation>
struct GenerationRecord {
    int generation = 0;
    ChangePointConfig best;
    Evaluation evaluation;
    int population_size = 0;
};

template <typename Evaluation>
struct GAHistory {
    std::vector<GenerationRecord<Evaluation>> generations;
    /// Index into `generations` of the overall optimum (first on ties).
    std::size_t best_generation = 0;
    /// tau -> number of per-generation best chromosomes containing it.
    std::map<int, int> cp_frequency;
    std::vector<std::string> notes;
    /// Number of distinct chromosomes evaluated.
    int distinct_evaluations = 0;

    const GenerationRecord<Evaluation>& best() const { return generations.at(best_generation); }
};

/// Fitness result of the Bayesian-MDL search.
struct BmdlEvaluation {
    ObjectiveValue value;
    SegmentFit fit;

    double score() const { return value.bmdl; }
};

namespace detail {

template <typename Evaluation, typename Evaluator>
void evaluate_pending(const std::vector<std::pair<const ChangePointConfig*, std::uint64_t>>& jobs,
                      std::vector<Evaluation>& out, const Evaluator& evaluator, int workers) {
    out.resize(jobs.size());
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            out[i] = evaluator(*jobs[i].first, jobs[i].second);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) {
                try {
                    out[i] = evaluator(*jobs[i].first, jobs[i].second);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Generation loop shared by every fitness function.
///
/// `evaluator(config, stream_seed)` must be callable concurrently and return
/// an Evaluation exposing `double score() const` (lower is better). Each
/// distinct chromosome is evaluated once per run, on the substream
/// derive_seed(seed, generation, index) of its first appearance, so the
/// history does not depend on the worker count.
template <typename Evaluator>
auto evolve(int horizon, const GAConfig& cfg, const Evaluator& evaluator)
    -> GAHistory<decltype(evaluator(std::declval<const ChangePointConfig&>(), std::uint64_t{}))> {
    using Evaluation = decltype(evaluator(std::declval<const ChangePointConfig&>(), std::uint64_t{}));
    cfg.validate();
    const int workers = fitness_workers(cfg.workers);
    const int k = cfg.population_size;

    GAHistory<Evaluation> history;
    std::map<std::vector<int>, Evaluation> cache;
    Rng rng(cfg.seed);
    std::vector<ChangePointConfig> population = init_population(horizon, cfg, rng);
    bool duplicate_noted = false;

    for (int g = 0; g < cfg.generations; ++g) {
        std::vector<std::pair<const ChangePointConfig*, std::uint64_t>> jobs;
        std::map<std::vector<int>, std::size_t> pending;
        for (std::size_t i = 0; i < population.size(); ++i) {
            const auto& tau = population[i].tau();
            if (cache.contains(tau) || pending.contains(tau)) continue;
            pending.emplace(tau, jobs.size());
            jobs.emplace_back(&population[i], derive_seed(cfg.seed, static_cast<std::uint64_t>(g), i));
        }
        std::vector<Evaluation> results;
        detail::evaluate_pending(jobs, results, evaluator, workers);
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            cache.emplace(jobs[j].first->tau(), std::move(results[j]));
        }
        history.distinct_evaluations = static_cast<int>(cache.size());

        std::vector<double> scores(population.size());
        std::size_t best = 0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            scores[i] = cache.at(population[i].tau()).score();
            if (scores[i] < scores[best]) best = i;
        }
        history.generations.push_back(GenerationRecord<Evaluation>{
            g, population[best], cache.at(population[best].tau()), static_cast<int>(population.size())});
        for (int t : population[best].tau()) history.cp_frequency[t] += 1;

        if (g + 1 == cfg.generations) break;

        std::vector<ChangePointConfig> next;
        next.reserve(static_cast<std::size_t>(k));
        if (cfg.elitism) next.push_back(population[best]);
        while (static_cast<int>(next.size()) < k) {
            ChangePointConfig child(horizon);
            for (int attempt = 0; attempt <= cfg.max_duplicate_retries; ++attempt) {
                int mother = 0;
                int father = 0;
                if (k >= 2) std::tie(mother, father) = rank_select(scores, rng);
                child = mutate(crossover(population[static_cast<std::size_t>(mother)],
                                         population[static_cast<std::size_t>(father)], cfg, rng),
                               cfg, rng);
                if (std::find(next.begin(), next.end(), child) == next.end()) break;
                if (attempt == cfg.max_duplicate_retries && !duplicate_noted) {
                    history.notes.push_back("generation " + std::to_string(g + 1) +
                                            ": duplicate child accepted after " +
                                            std::to_string(cfg.max_duplicate_retries) + " retries");
                    duplicate_noted = true;
                }
            }
            next.push_back(std::move(child));
        }
        population = std::move(next);
    }

    for (std::size_t g = 1; g < history.generations.size(); ++g) {
        if (history.generations[g].evaluation.score() <
            history.generations[history.best_generation].evaluation.score()) {
            history.best_generation = g;
        }
    }
    return history;
}

/// Bayesian-MDL genetic search over change-point configurations.
GAHistory<BmdlEvaluation> run_ga(const ExceedanceData& data, Family family, const Hyperparams& hyper,
                                 const GAConfig& cfg, const FitOptions& fit_options = {});

}  // namespace cpdetect
