#include "cli.hpp"

#include "cpdetect/baselines.hpp"
#include "cpdetect/errors.hpp"
#include "cpdetect/genetic.hpp"
#include "cpdetect/report.hpp"
#include "cpdetect/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cpdetect::cli {

namespace {

using nlohmann::json;

constexpr double kNorm37 = 37.0;

struct GaOptions {
    std::string family = "weibull";
    int generations = 50;
    int pop = 50;
    std::uint64_t seed = 1;
    double init_prob = 0.06;
    std::vector<double> mutation;
    std::vector<double> hyper;
    std::string elitism = "on";
};

void add_ga_options(CLI::App& cmd, GaOptions& o) {
    cmd.add_option("--family", o.family, "Intensity family")
        ->check(CLI::IsMember({"weibull", "musa-okumoto", "goel-okumoto", "ggo"}));
    cmd.add_option("--generations", o.generations, "Number of generations")->check(CLI::PositiveNumber);
    cmd.add_option("--pop", o.pop, "Population size")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", o.seed, "Random seed");
    cmd.add_option("--init-prob", o.init_prob, "Initial inclusion probability")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--mutation", o.mutation, "Shift weights for -1,0,+1")->delimiter(',')->expected(3);
    cmd.add_option("--hyper", o.hyper, "Gamma prior hyperparameters phi11,phi12,phi21,phi22[,phi31,phi32]")
        ->delimiter(',');
    cmd.add_option("--elitism", o.elitism, "Carry the best chromosome over")
        ->check(CLI::IsMember({"on", "off"}));
}

GAConfig make_ga_config(const GaOptions& o) {
    GAConfig cfg;
    cfg.population_size = o.pop;
    cfg.generations = o.generations;
    cfg.seed = o.seed;
    cfg.init_prob = o.init_prob;
    cfg.elitism = o.elitism == "on";
    if (!o.mutation.empty()) {
        cfg.mutation_probs = GAConfig::normalize_weights({o.mutation[0], o.mutation[1], o.mutation[2]});
    }
    cfg.validate();
    return cfg;
}

Hyperparams make_hyper(const GaOptions& o) {
    return o.hyper.empty() ? Hyperparams{} : Hyperparams::from_list(o.hyper);
}

json ga_config_json(const GaOptions& o, const GAConfig& cfg, const Hyperparams& h) {
    return json{{"family", o.family},
                {"generations", cfg.generations},
                {"pop", cfg.population_size},
                {"seed", cfg.seed},
                {"init_prob", cfg.init_prob},
                {"mutation", cfg.mutation_probs},
                {"crossover_keep_prob", cfg.crossover_keep_prob},
                {"elitism", cfg.elitism},
                {"hyper", {h.phi11, h.phi12, h.phi21, h.phi22, h.phi31, h.phi32}}};
}

struct Threshold {
    double value = 0.0;
    std::string mode;
};

Threshold resolve_threshold(const std::string& spec, const MeasurementSeries& series) {
    if (spec == "mean") return {mean_threshold(series), "mean"};
    if (spec == "norm37") return {kNorm37, "norm37"};
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), v);
    if (ec != std::errc() || ptr != spec.data() + spec.size() || !std::isfinite(v)) {
        throw InvalidInput("threshold must be a number, 'mean' or 'norm37', got '" + spec + "'");
    }
    return {v, "value"};
}

json input_json(const std::string& path, const MeasurementSeries& series, const Threshold& th,
                const ExceedanceData& data) {
    return json{{"path", path},
                {"T", series.size()},
                {"threshold", th.value},
                {"threshold_mode", th.mode},
                {"n_events", data.count()}};
}

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << contents;
    } else {
        write_file_atomic(path, contents);
    }
}

std::string json_text(const json& j) {
    return j.dump(2) + "\n";
}

struct DetectRun {
    DetectionResult result;
    json document;
};

DetectRun run_detection(const std::string& in, const std::string& threshold_spec, const GaOptions& o) {
    const MeasurementSeries series = read_series_csv_file(in);
    const Threshold th = resolve_threshold(threshold_spec, series);
    const ExceedanceData data = extract_exceedances(series, th.value);
    const GAConfig cfg = make_ga_config(o);
    const Hyperparams hyper = make_hyper(o);
    const Family family = parse_family(o.family);
    const auto history = run_ga(data, family, hyper, cfg);
    DetectRun run{make_detection_result(history, family, data), {}};
    run.document = to_json(run.result, input_json(in, series, th, data), ga_config_json(o, cfg, hyper));
    return run;
}

std::vector<std::string> split_methods(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "ga" && item != "pelt" && item != "cusum" && item != "freqmdl") {
            throw CLI::ValidationError("--methods", "unknown method '" + item + "'");
        }
        out.push_back(item);
    }
    if (out.empty()) throw CLI::ValidationError("--methods", "no methods given");
    return out;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiple change-point detection for threshold exceedances", "cpdetect"};
    app.require_subcommand(1);

    std::string setting;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Generate a bundled synthetic series");
    simulate->add_option("--setting", setting, "1cp, 2cp, 3cp, J10, J20 or J50")->required();
    simulate->add_option("--seed", sim_seed, "Random seed");
    simulate->add_option("--out", sim_out, "Output CSV (default stdout)");

    std::string in;
    std::string result_out;
    std::string plot_out;
    std::string threshold = "mean";
    GaOptions ga;
    auto* detect = app.add_subcommand("detect", "Bayesian-MDL genetic change-point search");
    detect->add_option("--in", in, "Input CSV (date,value)")->required();
    detect->add_option("--out", result_out, "Result JSON (default stdout)");
    detect->add_option("--plot", plot_out, "Tidy plot-data CSV");
    detect->add_option("--threshold", threshold, "Number, 'mean' or 'norm37'");
    add_ga_options(*detect, ga);

    std::string methods = "ga,pelt,cusum,freqmdl";
    double cusum_k = 1.0;
    auto* compare = app.add_subcommand("compare", "Run several detectors side by side");
    compare->add_option("--in", in, "Input CSV (date,value)")->required();
    compare->add_option("--out", result_out, "Comparison JSON (default stdout)");
    compare->add_option("--threshold", threshold, "Number, 'mean' or 'norm37'");
    compare->add_option("--methods", methods, "Comma list of ga, pelt, cusum, freqmdl");
    compare->add_option("--cusum-k", cusum_k, "CUSUM shift to detect, in units of sigma (slack is half of it)")
        ->check(CLI::NonNegativeNumber);
    add_ga_options(*compare, ga);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (simulate->parsed()) {
            const SimulationSetting s = find_preset(setting);
            Rng rng(sim_seed);
            std::ostringstream buf;
            write_series_csv(buf, gen_lognormal_series(s, rng));
            emit(sim_out, buf.str(), out);
        } else if (detect->parsed()) {
            const DetectRun run = run_detection(in, threshold, ga);
            if (!plot_out.empty()) {
                std::ostringstream buf;
                write_plot_csv(buf, run.result);
                write_file_atomic(plot_out, buf.str());
            }
            emit(result_out, json_text(run.document), out);
        } else if (compare->parsed()) {
            const std::vector<std::string> list = split_methods(methods);
            const MeasurementSeries series = read_series_csv_file(in);
            const Threshold th = resolve_threshold(threshold, series);
            const ExceedanceData data = extract_exceedances(series, th.value);
            json doc{{"spec_version", kResultSchemaVersion},
                     {"input", input_json(in, series, th, data)},
                     {"methods", json::object()}};
            const GAConfig cfg = make_ga_config(ga);
            const Hyperparams hyper = make_hyper(ga);
            doc["config"] = ga_config_json(ga, cfg, hyper);
            doc["config"]["cusum_shift_sigma"] = cusum_k;
            for (const auto& m : list) {
                if (m == "ga") {
                    const Family family = parse_family(ga.family);
                    const auto history = run_ga(data, family, hyper, cfg);
                    const auto& best = history.best();
                    doc["methods"]["ga"] = {{"tau", best.best.tau()},
                                            {"J", best.best.size()},
                                            {"bmdl", best.evaluation.value.bmdl},
                                            {"generation", best.generation},
                                            {"modal_tau", modal_change_point(history.cp_frequency)}};
                } else if (m == "pelt") {
                    const auto tau = pelt(series, PeltConfig{});
                    doc["methods"]["pelt"] = {{"tau", tau}, {"J", tau.size()},
                                              {"penalty", 2.0 * std::log(static_cast<double>(series.size()))},
                                              {"cost", "gaussian-loglik-on-log-data"}};
                } else if (m == "cusum") {
                    const double mu0 = mean_threshold(series);
                    const double sigma = cusum_sigma(series, mu0);
                    CusumConfig cc;
                    cc.slack = cusum_k * sigma / 2.0;
                    const CusumResult r = cusum(series, cc);
                    doc["methods"]["cusum"] = {{"alarms", r.alarm_count()},
                                               {"change_points", r.change_points},
                                               {"mu0", r.mu0},
                                               {"sigma", r.sigma},
                                               {"k", r.slack},
                                               {"h", r.decision_interval}};
                } else if (m == "freqmdl") {
                    const auto history = run_freq_mdl_ga(series, cfg);
                    const auto& best = history.best();
                    json entry{{"tau", best.best.tau()}, {"J", best.best.size()},
                               {"generation", best.generation}};
                    if (best.evaluation.rejected) {
                        entry["mdl"] = nullptr;
                    } else {
                        entry["mdl"] = best.evaluation.value.mdl;
                        entry["degenerate"] = best.evaluation.value.degenerate;
                    }
                    doc["methods"]["freqmdl"] = std::move(entry);
                }
            }
            emit(result_out, json_text(doc), out);
        }
    } catch (const CLI::ValidationError& e) {
        report_error(err, "usage", e.what());
        return 2;
    } catch (const InvalidInput& e) {
        report_error(err, "invalid-input", e.what());
        return 1;
    } catch (const DomainError& e) {
        report_error(err, "domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error(err, "error", e.what());
        return 1;
    }
    return 0;
}

}  // namespace cpdetect::cli
