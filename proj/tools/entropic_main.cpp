// Command-line front end: fit a sample, query the oracles, reproduce the
// synthetic-experiment tables, or emit synthetic samples.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "entropic/config.hpp"
#include "entropic/errors.hpp"
#include "entropic/experiments.hpp"
#include "entropic/json_writer.hpp"
#include "entropic/oracles.hpp"
#include "entropic/search.hpp"
#include "entropic/synth.hpp"

namespace {

using namespace entropic;

constexpr int kExitIo = 2;
constexpr int kExitParse = 3;
constexpr int kExitEmpty = 4;
constexpr int kExitGuard = 5;

struct CommonOpts {
    std::string config_path;
    std::string output_path = "-";
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned jobs = 1;
};

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

KeyValueConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_config_file(path);
}

Family family_from_options(FamilyKind kind, const WeightedSample& w,
                           const KeyValueConfig& cfg) {
    return bind_family(kind, w, cfg.get_double("alpha", 0.005),
                       cfg.get_double("lambda_cap", 1e8),
                       cfg.get_double("sigma2_floor_scale", 1e-12));
}

SearchConfig search_from_options(const KeyValueConfig& cfg, const CommonOpts& common) {
    SearchConfig sc;
    sc.n_init = cfg.get_int("n_init", sc.n_init);
    sc.stop_em = cfg.get_int("stop_em", sc.stop_em);
    sc.stop_r = cfg.get_int("stop_r", sc.stop_r);
    sc.r_start = static_cast<std::size_t>(cfg.get_int("r_start", 1));
    sc.r_max_guard = static_cast<std::size_t>(cfg.get_int("r_max_guard", 32));
    sc.seed = common.seed_set ? common.seed : cfg.get_uint("seed", 0);
    return sc;
}

Json params_json(const Family& family, const FamilyParams& params) {
    Json j = Json::object();
    j.set("family", family_id(family.kind));
    if (const auto* g = std::get_if<GaussianParams>(&params)) {
        j.set("mu", g->mu);
        j.set("sigma2", g->sigma2);
    } else if (const auto* b = std::get_if<BiExpParams>(&params)) {
        j.set("p", b->p);
        j.set("a_left", b->a_left);
        j.set("a_right", b->a_right);
        j.set("lambda_left", b->lambda_left);
        j.set("lambda_right", b->lambda_right);
    } else {
        const auto& p = std::get<BernoulliParams>(params);
        j.set("mu0", p.mu0);
        j.set("mu1", p.mu1);
    }
    return j;
}

int cmd_fit(const std::string& input, const std::string& family_id_str,
            double grouping_tolerance, const CommonOpts& common) {
    const KeyValueConfig cfg = load_config(common.config_path);
    const std::vector<double> raw = read_values_csv(input);
    const WeightedSample w = ingest(raw, grouping_tolerance);
    const FamilyKind kind =
        family_kind_from_id(family_id_str.empty()
                                ? cfg.get_string("family", "gaussian")
                                : family_id_str);
    const Family family = family_from_options(kind, w, cfg);
    const SearchConfig sc = search_from_options(cfg, common);
    const FitResult fit = search(w, family, sc, common.jobs);

    // per-row labels in raw order (1-based class ids)
    std::map<double, std::size_t> label_of;
    std::vector<double> keyed(raw);
    if (grouping_tolerance > 0.0)
        for (double& z : keyed) z = std::round(z / grouping_tolerance) * grouping_tolerance;
    for (std::size_t i = 0; i < w.size(); ++i)
        label_of[w.values[i]] = fit.best_assignment.label[i] + 1;

    Json out = Json::object();
    out.set("family", family_id(kind));
    out.set("n", w.n);
    out.set("distinct_values", w.size());
    out.set("seed", static_cast<std::int64_t>(sc.seed));
    out.set("best_H", fit.best_H);
    out.set("log_likelihood", -static_cast<double>(w.n) * fit.best_H);
    out.set("r_n", fit.r_n);
    out.set("r_searched", fit.r_searched);
    out.set("guard_hit", fit.guard_hit);
    out.set("order_tied", fit.order_tied);
    Json tied = Json::array();
    for (std::size_t o : fit.tied_orders) tied.push_back(o);
    out.set("tied_orders", std::move(tied));
    Json nu = Json::array();
    for (double v : fit.model.nu.weights) nu.push_back(v);
    out.set("nu", std::move(nu));
    Json params = Json::array();
    for (const auto& p : fit.model.params) params.push_back(params_json(family, p));
    out.set("params", std::move(params));
    Json labels = Json::array();
    for (double z : keyed) labels.push_back(label_of.at(z));
    out.set("labels", std::move(labels));
    Json restarts = Json::object();
    restarts.set("total_runs", fit.restarts_log.size());
    std::size_t total_iterations = 0, improvements = 0;
    for (const auto& rec : fit.restarts_log) {
        total_iterations += rec.iterations;
        improvements += rec.improved_global ? 1 : 0;
    }
    restarts.set("total_iterations", total_iterations);
    restarts.set("improvement_events", improvements);
    out.set("restarts", std::move(restarts));

    write_output(common.output_path, out.dump());
    return fit.guard_hit ? kExitGuard : 0;
}

int cmd_threshold(const std::vector<double>& a, const CommonOpts& common) {
    const GaussianThresholdReport rep =
        gaussian_split_test(a[0], a[1], a[2], a[3], a[4], a[5]);
    Json out = Json::object();
    out.set("lhs", rep.lhs);
    out.set("rhs", rep.rhs);
    out.set("sigma_star2", rep.sigma_star2);
    out.set("split_is_strictly_better", rep.split_is_strictly_better);
    out.set("merged_H", rep.merged_H);
    out.set("split_H", rep.split_H);
    write_output(common.output_path, out.dump());
    return 0;
}

int cmd_oracle(const std::string& input, const std::string& family_id_str,
               std::size_t r, std::uint64_t guard, double grouping_tolerance,
               const CommonOpts& common) {
    const KeyValueConfig cfg = load_config(common.config_path);
    const WeightedSample w = ingest(read_values_csv(input), grouping_tolerance);
    const FamilyKind kind =
        family_kind_from_id(family_id_str.empty()
                                ? cfg.get_string("family", "gaussian")
                                : family_id_str);
    const Family family = family_from_options(kind, w, cfg);
    const BruteForceResult res = brute_force_min(w, family, r, guard);

    Json out = Json::object();
    out.set("family", family_id(kind));
    out.set("r", r);
    out.set("min_H", res.min_H);
    out.set("assignments_enumerated",
            static_cast<std::int64_t>(res.assignments_enumerated));
    out.set("num_optima", res.optima.size());
    Json optima = Json::array();
    for (const auto& opt : res.optima) {
        Json labels = Json::array();
        for (std::size_t lab : opt.label) labels.push_back(lab + 1);
        optima.push_back(std::move(labels));
    }
    out.set("optima", std::move(optima));
    Json values = Json::array();
    for (double z : w.values) values.push_back(z);
    out.set("values", std::move(values));
    write_output(common.output_path, out.dump());
    return 0;
}

int cmd_experiment(const std::string& which, const std::string& family_id_str,
                   const CommonOpts& common) {
    const KeyValueConfig cfg = load_config(common.config_path);
    ExperimentConfig ec;
    ec.n = cfg.get_int("n", 10000);
    ec.seeds = cfg.get_uints("seeds", {0, 1, 2, 3, 4});
    ec.search = search_from_options(cfg, common);
    ec.alpha = cfg.get_double("alpha", 0.005);
    ec.lambda_cap = cfg.get_double("lambda_cap", 1e8);
    ec.sigma2_floor_scale = cfg.get_double("sigma2_floor_scale", 1e-12);
    ec.jobs = common.jobs;

    const bool table1 = which == "table1";
    const std::vector<double> factors =
        cfg.get_doubles("mu_factors", table1
                                          ? std::vector<double>{0.70, 0.75, 0.9, 1.0, 1.1}
                                          : std::vector<double>{0.50, 0.60, 0.70, 1.0});
    std::vector<FamilyKind> kinds;
    if (family_id_str.empty() || family_id_str == "both")
        kinds = {FamilyKind::gaussian, FamilyKind::biexp};
    else
        kinds = {family_kind_from_id(family_id_str)};

    TableResult all;
    for (FamilyKind kind : kinds) {
        const TableResult t = table1 ? run_table1(kind, factors, ec)
                                     : run_table2(kind, factors, ec);
        for (const auto& cell : t.cells) all.cells.push_back(cell);
    }

    std::string csv;
    {
        std::ostringstream os;
        write_cell_csv(os, all);
        csv = os.str();
    }
    write_output(common.output_path, csv);

    std::fprintf(stderr, "%-10s %-9s %-11s %-10s %s\n", "mu_factor", "family",
                 "majority_r", "agreement", "flag");
    for (const auto& cell : all.cells)
        std::fprintf(stderr, "%-10.3f %-9s %-11zu %-10.2f %s\n", cell.mu_factor,
                     cell.family.c_str(), cell.majority_r_n, cell.agreement,
                     cell.unstable ? "unstable" : "");
    return 0;
}

int cmd_sample(const std::string& which, double mu_star, double mu_factor,
               std::int64_t n, bool with_labels, const CommonOpts& common) {
    if (mu_star <= 0.0) mu_star = mu_factor * kTwoSqrt3;
    const MixtureSpec spec = which == "r7" ? spec_r7(mu_star) : spec_r2(mu_star);
    const LabeledSample draw = sample_mixture(spec, n, common.seed);
    std::string text;
    char buf[64];
    if (with_labels) text += "value,label\n";
    for (std::size_t i = 0; i < draw.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", draw.values[i]);
        text += buf;
        if (with_labels) {
            text += ',';
            text += std::to_string(draw.labels[i] + 1);
        }
        text += '\n';
    }
    write_output(common.output_path, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixing-entropy clustering with self-selected class count"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--seed", common.seed, "override the RNG seed (default 0)")
        ->each([&](const std::string&) { common.seed_set = true; });
    app.add_option("--jobs", common.jobs, "worker threads for restarts");
    app.add_option("-c,--config", common.config_path, "key = value config file");
    app.add_option("-o,--output", common.output_path, "output path, '-' for stdout");

    std::string input, family_str, table = "table1", sample_spec = "r2";
    double grouping_tolerance = 0.0;
    std::size_t oracle_r = 2;
    std::uint64_t oracle_guard = 2000000;
    std::vector<double> threshold_args;
    double mu_star = 0.0, mu_factor = 1.0;
    std::int64_t sample_n = 10000;
    bool with_labels = false;

    CLI::App* fit = app.add_subcommand("fit", "fit a CSV sample, emit JSON");
    fit->add_option("input", input, "CSV file, one value per line")->required();
    fit->add_option("-f,--family", family_str, "gaussian | biexp | bernoulli");
    fit->add_option("--grouping-tolerance", grouping_tolerance,
                    "group values equal after rounding to this step");

    CLI::App* threshold = app.add_subcommand(
        "threshold", "two-component gaussian split test: nu1 mu1 sigma1 nu2 mu2 sigma2");
    threshold->add_option("args", threshold_args, "nu1 mu1 sigma1 nu2 mu2 sigma2")
        ->expected(6);

    CLI::App* oracle =
        app.add_subcommand("oracle", "exhaustive minimum over assignments, emit JSON");
    oracle->add_option("input", input, "CSV file, one value per line")->required();
    oracle->add_option("-f,--family", family_str, "gaussian | biexp | bernoulli");
    oracle->add_option("-r", oracle_r, "class count")->required();
    oracle->add_option("--guard", oracle_guard, "max assignments to enumerate");
    oracle->add_option("--grouping-tolerance", grouping_tolerance,
                       "group values equal after rounding to this step");

    CLI::App* experiment =
        app.add_subcommand("experiment", "reproduce a synthetic table, emit CSV");
    experiment->add_option("table", table, "table1 | table2")
        ->check(CLI::IsMember({"table1", "table2"}));
    experiment->add_option("-f,--family", family_str,
                           "gaussian | biexp | both (default both)");

    CLI::App* sample =
        app.add_subcommand("sample", "emit a synthetic sample as CSV");
    sample->add_option("--spec", sample_spec, "r2 | r7")
        ->check(CLI::IsMember({"r2", "r7"}));
    sample->add_option("--mu-star", mu_star, "component spacing");
    sample->add_option("--mu-factor", mu_factor,
                       "spacing as a multiple of 2*sqrt(3)");
    sample->add_option("-n", sample_n, "sample size");
    sample->add_flag("--with-labels", with_labels, "emit value,label rows");

    for (CLI::App* sub : {fit, threshold, oracle, experiment, sample})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed())
            return cmd_fit(input, family_str, grouping_tolerance, common);
        if (threshold->parsed()) return cmd_threshold(threshold_args, common);
        if (oracle->parsed())
            return cmd_oracle(input, family_str, oracle_r, oracle_guard,
                              grouping_tolerance, common);
        if (experiment->parsed()) return cmd_experiment(table, family_str, common);
        if (sample->parsed())
            return cmd_sample(sample_spec, mu_star, mu_factor, sample_n, with_labels,
                              common);
    } catch (const EmptySampleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
